#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "multiegs/fp.hpp"

namespace multiegs {

/// Number of vertices of the p-adic tree at depth < n, i.e. (p^n - 1)/(p - 1).
std::size_t internal_vertex_count(int p, int n);

/// p^n, throwing std::overflow_error past 2^62.
std::uint64_t checked_power(int p, int n);

/// Vertex of the p-adic tree as a word over {1,...,p}; the empty word is the root.
class Vertex {
 public:
  Vertex() = default;
  Vertex(int p, std::vector<int> letters);

  static Vertex root(int p) { return Vertex(p, {}); }
  /// Vertex at `level` whose lexicographic position among that level is `position`.
  static Vertex from_position(int p, int level, std::uint64_t position);

  int prime() const { return p_; }
  int level() const { return static_cast<int>(letters_.size()); }
  const std::vector<int>& letters() const { return letters_; }

  /// Lexicographic position within its level (0-based).
  std::uint64_t position() const;
  /// Breadth-first index among all vertices.
  std::size_t bfs_index() const;

  Vertex child(int letter) const;
  Vertex prefix(int length) const;

  std::string to_string() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;

 private:
  int p_ = 3;
  std::vector<int> letters_;
};

/// Permutation of {0,...,degree-1} acting on the right: x^(fg) = (x^f)^g.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);
  explicit Permutation(std::vector<std::uint32_t> images);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator[](std::size_t x) const { return images_[x]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  bool is_identity() const;
  Permutation operator*(const Permutation& other) const;
  Permutation inverse() const;
  std::uint64_t order() const;

  /// Cycle notation with 1-based points, "()" for the identity.
  std::string cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// Depth-n truncation of an automorphism in the Sylow pro-p subgroup: one
/// exponent of the p-cycle a = (1 2 ... p) per internal vertex, breadth-first.
class Portrait {
 public:
  Portrait() = default;
  /// Identity portrait.
  Portrait(int p, int depth);
  Portrait(int p, int depth, std::vector<Residue> labels);

  /// The rooted automorphism a^exponent.
  static Portrait rooted(int p, int depth, int exponent);
  /// Portrait with root label `root_label` and sections `children` (all of depth-1).
  static Portrait assemble(int root_label, std::span<const Portrait> children);

  int prime() const { return p_; }
  int depth() const { return depth_; }
  std::span<const Residue> labels() const { return labels_; }
  Residue label(std::size_t bfs_index) const { return labels_[bfs_index]; }
  Residue label(const Vertex& v) const { return labels_[v.bfs_index()]; }

  bool is_identity() const;
  /// Breadth-first index of the first non-zero label, or labels().size().
  std::size_t leading_index() const;

  friend bool operator==(const Portrait&, const Portrait&) = default;
  friend auto operator<=>(const Portrait&, const Portrait&) = default;

 private:
  friend Portrait compose(const Portrait&, const Portrait&);
  friend Portrait invert(const Portrait&);
  int p_ = 3;
  int depth_ = 0;
  std::vector<Residue> labels_;
};

/// v^f computed letter by letter; requires |v| <= depth(f).
Vertex act(const Portrait& f, const Vertex& v);
/// Product fg under the right action: label (fg)(w) = f(w) + g(w^f).
Portrait compose(const Portrait& f, const Portrait& g);
Portrait invert(const Portrait& f);
Portrait power(const Portrait& f, long long exponent);
/// f^g = g^-1 f g.
Portrait conjugate(const Portrait& f, const Portrait& g);
/// [f,g] = f^-1 g^-1 f g.
Portrait commutator(const Portrait& f, const Portrait& g);
/// Section f_u at a vertex fixed by f; result has depth depth(f) - |u|.
Portrait section(const Portrait& f, const Vertex& u);
Portrait truncate(const Portrait& f, int depth);
/// Action on the depth-n leaves in lexicographic order.
Permutation leaf_permutation(const Portrait& f);
/// Inverse of leaf_permutation; throws if `perm` is not in the Sylow subgroup.
Portrait portrait_from_leaf_permutation(int p, int depth, const Permutation& perm);
/// Element with the given portraits at every vertex of level `level` (psi_level^-1).
Portrait from_level_sections(int p, int level, std::span<const Portrait> sections);

/// Header line "p n" followed by the labels, space separated, breadth-first.
std::string serialize(const Portrait& f);
Portrait parse_portrait(const std::string& text);

std::ostream& operator<<(std::ostream& os, const Portrait& f);

}  // namespace multiegs
