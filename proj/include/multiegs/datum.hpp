#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multiegs/tree.hpp"

namespace multiegs {

/// Defining vector (e_1, ..., e_{p-1}) over F_p.
struct DefiningVector {
  std::vector<int> entries;

  int size() const { return static_cast<int>(entries.size()); }
  int operator[](int k) const { return entries[k - 1]; }  // 1-based like e_k

  friend bool operator==(const DefiningVector&, const DefiningVector&) = default;
};

/// e_k == e_{p-k} for all k.
bool is_symmetric(const DefiningVector& v);
/// All entries equal and non-zero (a non-zero multiple of (1,...,1)).
bool is_constant(const DefiningVector& v);

/// The numerical datum: a prime and p families of defining vectors.
/// families[j-1] holds E^(j).
struct NumericalDatum {
  int p = 3;
  std::vector<std::vector<DefiningVector>> families;

  int family_size(int j) const { return static_cast<int>(families[j - 1].size()); }
  int total_rank() const;  // r = r_1 + ... + r_p
  const DefiningVector& vector(int j, int i) const { return families[j - 1][i - 1]; }

  friend bool operator==(const NumericalDatum&, const NumericalDatum&) = default;
};

/// Builds a datum from (family, vector) pairs; other families are empty.
NumericalDatum make_datum(int p, const std::vector<std::pair<int, std::vector<int>>>& vectors);

/// Every violated invariant, empty when the datum is valid.
std::vector<std::string> validate(const NumericalDatum& datum);
/// Throws std::invalid_argument listing the violations.
void require_valid(const NumericalDatum& datum);

/// Truncation to `depth` of the directed automorphism along the path
/// (p-j+1)(p-j+1)... with the given defining vector.
Portrait directed_portrait(int p, int j, const DefiningVector& v, int depth);
/// Truncation of b_i^(j).
Portrait generator_portrait(const NumericalDatum& datum, int j, int i, int depth);

/// a-exponent carried by coordinate `coordinate` (1-based) of psi_1 of a
/// directed generator of family j, or std::nullopt at the path coordinate p-j+1.
std::optional<int> defining_vector_index(int p, int j, int coordinate);

bool is_torsion(const NumericalDatum& datum);

enum class CspStatus { HasCSP, NoCSP, OutsideTheoremScope };

struct Classification {
  bool in_G_class = false;  // constant-vector singleton families
  bool in_S_class = false;  // symmetric singleton families
  bool in_E_class = false;  // the exceptional complementary {0,1} pair
  bool branch_over_derived = false;
  bool branch_over_gamma3_only = false;
  bool not_branch = false;
  int dimV = 0;
  bool joint_independent = false;
  bool torsion = false;
  CspStatus csp = CspStatus::OutsideTheoremScope;
  /// Human-readable reasons, one per clause that fired.
  std::vector<std::string> reasons;
  /// For in_E_class: the two families and the scalars normalizing them to {0,1}.
  int e_family_j = 0, e_family_k = 0, e_scalar_j = 0, e_scalar_k = 0;
};

Classification classify(const NumericalDatum& datum);
std::string to_string(CspStatus s);

/// A family syllable: prod_i (b_i^(family))^exponents[i-1].
struct FamilyElement {
  int family = 0;
  std::vector<int> exponents;
  friend bool operator==(const FamilyElement&, const FamilyElement&) = default;
};

/// c == prod_k terms[k]^(a^(terms[k].family - c.family)) mod St_G(2), with the
/// terms in pairwise distinct families other than c.family.
struct Dependency {
  FamilyElement target;
  std::vector<FamilyElement> terms;
};

std::optional<Dependency> dependency(const NumericalDatum& datum);

/// Defining vector of a family element: sum_i exponents_i * e_i^(family).
DefiningVector combined_vector(const NumericalDatum& datum, const FamilyElement& element);

/// Datum text format:
///   p <prime>
///   family <j> = <v1> ; <v2> ; ...      vectors as comma-separated residues
/// Lines starting with '#' and blank lines are ignored; unlisted families are empty.
NumericalDatum parse_datum(const std::string& text);
std::string format_datum(const NumericalDatum& datum);
/// FNV-1a of the canonical text, as 16 hex digits.
std::string datum_hash(const NumericalDatum& datum);

}  // namespace multiegs
