#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multiegs/datum.hpp"
#include "multiegs/quotient.hpp"
#include "multiegs/word.hpp"

namespace multiegs {

/// A statement whose hypotheses exclude the datum or level.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconclusive: a construction ran but the finite quotient cannot show the
/// claimed separation.
enum class Verdict { Verified, RefutedByWitness, Inconclusive, GuardExceeded };
std::string to_string(Verdict v);

struct CheckReport {
  std::string id;
  std::string datum_hash;
  std::string datum_text;  // canonical, one line
  int level = 0;
  int aux_level = 0;  // m for witness and closure checks, 0 if unused
  Verdict verdict = Verdict::Verified;
  /// What the datum's classification predicts for this check.
  Verdict expected = Verdict::Verified;
  std::string semantics;
  std::vector<std::pair<std::string, std::string>> certificates;

  bool agrees() const { return verdict == expected; }
  void add(std::string key, std::string value) {
    certificates.emplace_back(std::move(key), std::move(value));
  }
};

std::string format_report(const CheckReport& r);
/// JSON array of reports.
std::string reports_json(const std::vector<CheckReport>& reports);

struct LabConfig {
  std::uint64_t degree_guard = kDefaultDegreeGuard;
  ChainCache* cache = nullptr;
  std::uint64_t seed = 1;
  int search_depth = 4;
  int samples = 20;
};

CheckReport check_branch_over_derived(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_branch_over_gamma3(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_key(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_subdirect(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_second_derived(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_csp_positive(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_fractality(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport check_weak_csp(const NumericalDatum& d, int n, const LabConfig& cfg = {});
CheckReport constant_vector_analysis(const NumericalDatum& d, int n, const LabConfig& cfg = {});

/// t_1, ..., t_n of the dependent-vector construction (t_1, t_2 are words).
struct DependentWitness {
  Dependency dependency;
  GroupWord c;
  GroupWord product;  // b_{i_1} ... b_{i_m}
  std::vector<BranchElement> t;  // t[k-1] = t_k
};
DependentWitness dependent_witness(const NumericalDatum& d, int n);
CheckReport csp_witness_dependent(const NumericalDatum& d, int n, int m, const LabConfig& cfg = {});

/// t_1 = t_2 = [(b^(j))^(a^(j-k)), b^(k)], then t_{n-1} placed under vertex p-k+1.
struct ExceptionalWitness {
  int j = 0, k = 0;
  GroupWord bj, bk;  // generators rescaled to {0,1} vectors
  GroupWord commutator_jk;  // [b^(j), b^(k)]
  std::vector<BranchElement> t;
};
ExceptionalWitness exceptional_witness(const NumericalDatum& d, int n);
CheckReport csp_witness_exceptional(const NumericalDatum& d, int n, int m, const LabConfig& cfg = {});

/// First vertex u, breadth-first with |u| <= depth_bound, where the section
/// image of St_N(u) is all of Q_{m-|u|}, N the normal closure of x in Q_m.
std::optional<Vertex> find_full_section_vertex(const NumericalDatum& d, const GroupWord& x,
                                               int depth_bound, int m, const LabConfig& cfg = {});
CheckReport check_full_section_vertex(const NumericalDatum& d, const GroupWord& x, int depth_bound,
                                      int m, const LabConfig& cfg = {});
/// Smallest n with M_n (and K_n outside class E) inside the normal closure of x in Q_m.
CheckReport check_normal_closure_blocks(const NumericalDatum& d, const GroupWord& x, int m,
                                        const LabConfig& cfg = {});

/// Statement ids accepted by run_check.
const std::vector<std::string>& check_ids();
/// Dispatches by id; m is used by the witness ids; guard overruns become GuardExceeded.
CheckReport run_check(const std::string& id, const NumericalDatum& d, int n, int m,
                      const LabConfig& cfg = {});

}  // namespace multiegs
