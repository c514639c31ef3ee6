#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "multiegs/tree.hpp"

namespace multiegs {

using BigInt = boost::multiprecision::cpp_int;

/// Subgroup of the Sylow p-subgroup of Sym(p^n), stored as portraits.
///
/// The series H_k = {g : labels of g vanish at breadth-first indices < k} has
/// cyclic factors of order p, so a subgroup is described by at most one
/// pivot per index: an element whose first non-zero label sits at k and
/// equals 1. The base point for index k is the first child of vertex k.
/// Sifting divides off pivot powers left to right and is exact.
class SubgroupChain {
 public:
  SubgroupChain() = default;
  /// Trivial subgroup.
  SubgroupChain(int p, int depth);

  static SubgroupChain generated_by(int p, int depth, std::span<const Portrait> generators);
  /// Smallest subgroup containing `elements` and normalized by `normalizers`.
  static SubgroupChain normal_closure(int p, int depth, std::span<const Portrait> elements,
                                     std::span<const Portrait> normalizers);
  /// Rebuilds a chain from its own strong generators (used by the disk cache).
  static SubgroupChain from_strong_generators(int p, int depth, std::span<const Portrait> pivots);

  int prime() const { return p_; }
  int depth() const { return depth_; }
  std::uint64_t degree() const { return checked_power(p_, depth_); }

  /// Adds an element and closes up. Returns true when the group grew.
  bool add(const Portrait& g);
  /// Adds g and closes under conjugation by `normalizers`.
  bool add_normal(const Portrait& g, std::span<const Portrait> normalizers);

  /// Remainder of g after sifting; identity iff g is a member.
  Portrait sift(const Portrait& g) const;
  bool contains(const Portrait& g) const;
  bool contains(const Permutation& g) const;
  bool contains(const SubgroupChain& other) const;

  /// |H| = p^log_order().
  int log_order() const { return static_cast<int>(positions_.size()); }
  BigInt order() const;

  /// Breadth-first indices carrying a pivot, increasing.
  const std::vector<std::size_t>& base_indices() const { return positions_; }
  /// Base points: for every pivot index, the first child of that vertex.
  std::vector<Vertex> base() const;
  std::vector<Portrait> strong_generators() const;
  /// Generators as leaf permutations of degree p^depth.
  std::vector<Permutation> strong_generator_permutations() const;

  /// The subgroup of elements fixing every vertex of the given level.
  SubgroupChain level_kernel(int level) const;

  /// Element prod_k pivot_k^c_k with uniform c_k: a uniform random element.
  Portrait random_element(std::mt19937_64& rng) const;

  /// Every element, in normal-form order; throws if there are more than `limit`.
  std::vector<Portrait> elements(std::size_t limit = 1u << 20) const;

  /// Equality as subgroups; strong generators themselves are not canonical.
  friend bool operator==(const SubgroupChain& x, const SubgroupChain& y) {
    return x.p_ == y.p_ && x.depth_ == y.depth_ && x.positions_ == y.positions_ && x.contains(y);
  }

 private:
  struct Pivot {
    std::vector<Portrait> powers;  // powers[c-1] = pivot^c, c = 1..p-1
  };

  bool insert_and_close(Portrait g, std::span<const Portrait> normalizers);
  /// Normalizes the leading label to 1 and stores the pivot; returns its index.
  std::size_t store(Portrait g);

  int p_ = 3;
  int depth_ = 0;
  std::vector<Pivot> slots_;  // one per internal vertex; empty powers when absent
  std::vector<std::size_t> positions_;
};

}  // namespace multiegs
