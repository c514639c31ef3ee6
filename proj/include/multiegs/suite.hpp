#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "multiegs/lab.hpp"

namespace multiegs {

/// Named data used across the acceptance matrix.
struct SuiteDatum {
  std::string name;
  NumericalDatum datum;
};
NumericalDatum gupta_sidki_datum();        // p=3, {(1,2)}
NumericalDatum constant_pair_datum();      // p=3, {(1,1)} and {(1,1)}
NumericalDatum symmetric_two_datum();      // p=3, {(2,2)}
NumericalDatum dependent_datum();          // p=3, {(1,2)} and {(1,2)}
NumericalDatum exceptional_datum();        // p=5, {(1,0,0,1)} and {(0,1,1,0)}
NumericalDatum constant_single_datum();    // p=3, {(1,1)}
/// Data outside class G, mixed primes.
std::vector<SuiteDatum> suite_data();

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> lines;
};

struct SuiteConfig {
  std::uint64_t degree_guard = kDefaultDegreeGuard;
  std::uint64_t seed = 1;
  /// Cache directory for criterion 9's cached pass; empty uses a temporary one.
  std::optional<std::filesystem::path> cache_dir;
  int jobs = 1;
};

/// Criteria 1..9.
CriterionResult run_criterion(int id, const SuiteConfig& cfg, ChainCache* cache = nullptr);
/// Results in criterion order regardless of completion order.
std::vector<CriterionResult> run_suite(const std::vector<int>& ids, const SuiteConfig& cfg,
                                       ChainCache* cache = nullptr);
std::string format_criterion(const CriterionResult& r);
std::string format_suite(const std::vector<CriterionResult>& results);

/// Order of a portrait: p^k with k the returned value.
int portrait_log_order(const Portrait& g);
/// Order of w on the deepest level the degree guard allows; -1 unless the
/// last `stable` levels agree.
int permutation_log_order(const GroupWord& w, const NumericalDatum& d, int stable = 2,
                          std::uint64_t degree_guard = kDefaultDegreeGuard);
/// Reduced word with `syllables` random syllables, alternating a-powers and family generators.
GroupWord random_word(const NumericalDatum& d, int syllables, std::mt19937_64& rng);

}  // namespace multiegs
