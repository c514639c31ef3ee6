#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multiegs/chain.hpp"
#include "multiegs/datum.hpp"
#include "multiegs/word.hpp"

namespace multiegs {

inline constexpr std::uint64_t kDefaultDegreeGuard = 20000;

/// Raised when p^n exceeds the configured degree guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memo of subgroup chains keyed by text, optionally mirrored to a directory.
/// Disk entries hold the strong generators as leaf-permutation image lists.
class ChainCache {
 public:
  ChainCache() = default;
  explicit ChainCache(std::filesystem::path directory);

  SubgroupChain get_or_build(const std::string& key, const std::function<SubgroupChain()>& build);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::optional<SubgroupChain> load(const std::string& key) const;
  void save(const std::string& key, const SubgroupChain& c) const;

  std::optional<std::filesystem::path> dir_;
  std::map<std::string, SubgroupChain> memo_;
  std::mutex mutex_;
  std::size_t hits_ = 0, misses_ = 0;
};

std::string write_chain(const SubgroupChain& c);
SubgroupChain read_chain(const std::string& text);

/// G/St_G(n) acting on the p^n leaves.
class FiniteQuotient {
 public:
  FiniteQuotient(NumericalDatum datum, int n, std::uint64_t degree_guard = kDefaultDegreeGuard,
                 ChainCache* cache = nullptr);

  const NumericalDatum& datum() const { return datum_; }
  int level() const { return n_; }
  int prime() const { return datum_.p; }
  std::uint64_t degree() const { return checked_power(datum_.p, n_); }
  std::uint64_t degree_guard() const { return guard_; }
  ChainCache* cache() const { return cache_; }

  /// a first, then b_i^(j) for j = 1..p, i = 1..r_j.
  const std::vector<Portrait>& generators() const { return gens_; }
  std::vector<Permutation> generator_permutations() const;

  Portrait image(const GroupWord& w) const { return evaluate(w, datum_, n_); }
  Portrait image(const BranchElement& e) const { return evaluate(e, datum_, n_); }

  const SubgroupChain& group() const;
  const SubgroupChain& derived() const;
  const SubgroupChain& gamma3() const;
  const SubgroupChain& second_derived() const;

  /// The same datum one or more levels lower, sharing guard and cache.
  FiniteQuotient lower(int m) const { return FiniteQuotient(datum_, m, guard_, cache_); }

 private:
  const SubgroupChain& memo(std::optional<SubgroupChain>& slot, const std::string& what,
                            const std::function<SubgroupChain()>& build) const;

  NumericalDatum datum_;
  int n_;
  std::uint64_t guard_;
  ChainCache* cache_;
  std::vector<Portrait> gens_;
  mutable std::optional<SubgroupChain> group_, derived_, gamma3_, second_derived_;
};

/// H' as the normal closure in H of commutators of `gens` (strong generators when empty).
SubgroupChain derived(const SubgroupChain& h, std::span<const Portrait> gens = {});
/// [H', H].
SubgroupChain gamma3(const SubgroupChain& h, std::span<const Portrait> gens = {});
SubgroupChain second_derived(const SubgroupChain& h, std::span<const Portrait> gens = {});

/// Elements of the chain fixing every vertex of level k, 1 <= k <= n.
SubgroupChain level_kernel(const FiniteQuotient& q, const SubgroupChain& h, int k);

/// phi_u(St_H(u)) at depth n - |u|.
SubgroupChain section_image(const SubgroupChain& h, const Vertex& u);

/// Normal closure in Q_n.
SubgroupChain normal_closure(const FiniteQuotient& q, std::span<const Portrait> elements);
inline bool subgroup_contains(const SubgroupChain& a, const SubgroupChain& b) { return a.contains(b); }
/// For each first-level vertex x: whether section_image(h, x) is all of Q_{n-1}.
std::vector<bool> joint_image_subdirect(const FiniteQuotient& q, const SubgroupChain& h);

/// psi_level^-1(B x ... x B): a copy of `block` under every vertex of the level.
SubgroupChain vertex_product(const SubgroupChain& block, int level);

}  // namespace multiegs
