#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "multiegs/datum.hpp"
#include "multiegs/tree.hpp"

namespace multiegs {

/// a^exponent.
struct APower {
  int exponent = 0;
  friend bool operator==(const APower&, const APower&) = default;
  friend auto operator<=>(const APower&, const APower&) = default;
};

/// prod_i (b_i^(family))^exponents[i-1]; the family is elementary abelian so
/// the order inside a syllable does not matter.
struct FamilyPower {
  int family = 0;
  std::vector<int> exponents;
  friend bool operator==(const FamilyPower&, const FamilyPower&) = default;
  friend auto operator<=>(const FamilyPower&, const FamilyPower&) = default;
};

using Syllable = std::variant<APower, FamilyPower>;

/// Word in a and the directed generators. Products are kept in the reduced
/// form of the free product of <a> with the p families.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(int p) : p_(p) {}

  static GroupWord a(int p, int exponent = 1);
  /// (b_i^(j))^exponent inside a datum whose family j has r_j vectors.
  static GroupWord b(const NumericalDatum& datum, int j, int i, int exponent = 1);
  static GroupWord family(int p, FamilyPower syllable);

  int prime() const { return p_; }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool empty() const { return syllables_.empty(); }

  /// Appends a syllable, merging with the last one where possible.
  void push(Syllable s);

  GroupWord operator*(const GroupWord& other) const;
  GroupWord inverse() const;
  GroupWord pow(long long e) const;
  /// this^g = g^-1 this g
  GroupWord conjugate(const GroupWord& g) const;

  /// Number of family syllables of the reduced form.
  int length() const;
  /// Exponent sum of a, mod p.
  int a_exponent() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  friend auto operator<=>(const GroupWord&, const GroupWord&) = default;

 private:
  int p_ = 3;
  std::vector<Syllable> syllables_;
};

/// [x,y] = x^-1 y^-1 x y.
GroupWord commutator(const GroupWord& x, const GroupWord& y);

/// Reduced form; GroupWord already keeps itself reduced, this re-runs the merge.
GroupWord reduce(const GroupWord& w);
inline int length(const GroupWord& w) { return w.length(); }

/// Word syntax:
///   word   := factor*            juxtaposition, optional '*' between factors
///   factor := atom ('^' int)?
///   atom   := 'a' | 'b[' j ',' i ']' | 'b[' j ']' | '1' | '(' word ')' | '[' word ',' word (',' word)* ']'
/// Commutators are left-normed. Whitespace is ignored.
GroupWord parse_word(const std::string& text, const NumericalDatum& datum);
std::string format_word(const GroupWord& w);

/// Portrait of w truncated to `depth`.
Portrait evaluate(const GroupWord& w, const NumericalDatum& datum, int depth);

/// Root label of w together with its p sections at level 1 (vertex order 1..p).
struct FirstLevel {
  int root = 0;
  std::vector<GroupWord> sections;
};
FirstLevel first_level(const GroupWord& w, const NumericalDatum& datum);
/// Sections of w in St(1); throws std::invalid_argument otherwise.
std::vector<GroupWord> first_level_sections(const GroupWord& w, const NumericalDatum& datum);

struct RecursionGuard {
  int depth = 30;
  std::size_t length = 10000;
  std::size_t nodes = 200000;
};

enum class Tri { True, False, GuardExceeded };
std::string to_string(Tri t);

Tri is_trivial(const GroupWord& w, const NumericalDatum& datum, const RecursionGuard& guard = {});

struct OrderResult {
  enum class Kind { Finite, ExceedsCap, GuardExceeded } kind = Kind::Finite;
  int log_p = 0;  // order = p^log_p when finite
};
/// Order of w, or ExceedsCap when it is provably larger than `cap`.
OrderResult order(const GroupWord& w, const NumericalDatum& datum, std::uint64_t cap,
                  const RecursionGuard& guard = {});

/// Exponent sums: coordinate 0 for a, then b_i^(j) for j = 1..p, i = 1..r_j.
std::vector<int> abelianization(const GroupWord& w, const NumericalDatum& datum);

/// psi_d-preimage construction: a leaf carries a word, a node carries a root
/// label and p children. The node stands for psi_1^-1(children) a^label.
class BranchElement {
 public:
  BranchElement() = default;
  /*implicit*/ BranchElement(GroupWord leaf);
  BranchElement(int label, std::vector<BranchElement> children);

  bool is_leaf() const { return leaf_.has_value(); }
  const GroupWord& word() const { return *leaf_; }
  int label() const { return label_; }
  const std::vector<BranchElement>& children() const { return children_; }
  /// Depth of the decomposition tree.
  int depth() const;

 private:
  std::optional<GroupWord> leaf_;
  int label_ = 0;
  std::vector<BranchElement> children_;
};

Portrait evaluate(const BranchElement& e, const NumericalDatum& datum, int depth);
/// Exponent sums of the element a BranchElement stands for, assuming it lies
/// in G: for g in St(1) the b-coordinates of g are the sums over its sections.
std::vector<int> abelianization(const BranchElement& e, const NumericalDatum& datum);
/// Nested tuple text, e.g. "psi^-1(a, 1, b[1,1])".
std::string format_branch(const BranchElement& e);

}  // namespace multiegs
