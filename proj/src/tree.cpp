#include "multiegs/tree.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace multiegs {

namespace {

std::vector<std::uint32_t>& scratch_images(std::size_t n) {
  thread_local std::vector<std::uint32_t> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return buffer;
}

void require_same_shape(const Portrait& f, const Portrait& g) {
  if (f.prime() != g.prime() || f.depth() != g.depth())
    throw std::invalid_argument("portraits differ in prime or depth");
}

// Writes into `img` the position (within its level) of the image of every
// internal vertex under f, indexed breadth-first.
void vertex_images(const Portrait& f, std::vector<std::uint32_t>& img) {
  const int p = f.prime();
  const auto labels = f.labels();
  if (labels.empty()) return;
  img[0] = 0;
  std::size_t prev_off = 0, off = 1, count = 1;
  for (int level = 1; level < f.depth(); ++level) {
    for (std::size_t parent = 0; parent < count; ++parent) {
      const std::uint32_t base = img[prev_off + parent] * p;
      const int shift = labels[prev_off + parent];
      for (int x = 0; x < p; ++x) {
        int y = x + shift;
        if (y >= p) y -= p;
        img[off + parent * p + x] = base + y;
      }
    }
    prev_off = off;
    count *= p;
    off += count;
  }
}

}  // namespace

std::size_t internal_vertex_count(int p, int n) {
  std::size_t total = 0, level = 1;
  for (int i = 0; i < n; ++i) {
    total += level;
    level *= p;
  }
  return total;
}

std::uint64_t checked_power(int p, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (std::uint64_t{1} << 62) / p) throw std::overflow_error("p^n overflows");
    r *= p;
  }
  return r;
}

// ---------------------------------------------------------------- Vertex

Vertex::Vertex(int p, std::vector<int> letters) : p_(p), letters_(std::move(letters)) {
  for (int x : letters_)
    if (x < 1 || x > p_) throw std::invalid_argument("vertex letter outside {1,...,p}");
}

Vertex Vertex::from_position(int p, int level, std::uint64_t position) {
  std::vector<int> letters(level);
  for (int i = level - 1; i >= 0; --i) {
    letters[i] = static_cast<int>(position % p) + 1;
    position /= p;
  }
  return Vertex(p, std::move(letters));
}

std::uint64_t Vertex::position() const {
  std::uint64_t pos = 0;
  for (int x : letters_) pos = pos * p_ + (x - 1);
  return pos;
}

std::size_t Vertex::bfs_index() const {
  return internal_vertex_count(p_, level()) + position();
}

Vertex Vertex::child(int letter) const {
  auto letters = letters_;
  letters.push_back(letter);
  return Vertex(p_, std::move(letters));
}

Vertex Vertex::prefix(int length) const {
  return Vertex(p_, std::vector<int>(letters_.begin(), letters_.begin() + length));
}

std::string Vertex::to_string() const {
  if (letters_.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(letters_[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------- Permutation

Permutation::Permutation(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), 0u);
}

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto x : images_) {
    if (x >= images_.size() || seen[x]) throw std::invalid_argument("not a permutation");
    seen[x] = true;
  }
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::operator*(const Permutation& other) const {
  if (degree() != other.degree()) throw std::invalid_argument("permutation degree mismatch");
  Permutation r(degree());
  for (std::size_t i = 0; i < degree(); ++i) r.images_[i] = other.images_[images_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r(degree());
  for (std::size_t i = 0; i < degree(); ++i) r.images_[images_[i]] = static_cast<std::uint32_t>(i);
  return r;
}

std::uint64_t Permutation::order() const {
  std::vector<bool> seen(degree(), false);
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t x = i; !seen[x]; x = images_[x]) {
      seen[x] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

std::string Permutation::cycles() const {
  std::string s;
  std::vector<bool> seen(degree(), false);
  for (std::size_t i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    s += "(";
    for (std::size_t x = i; !seen[x]; x = images_[x]) {
      seen[x] = true;
      if (x != i) s += " ";
      s += std::to_string(x + 1);
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

// ---------------------------------------------------------------- Portrait

Portrait::Portrait(int p, int depth)
    : p_(p), depth_(depth), labels_(internal_vertex_count(p, depth), 0) {
  if (p < 2 || p > kMaxPrime) throw std::invalid_argument("prime out of range");
  if (depth < 0) throw std::invalid_argument("negative depth");
}

Portrait::Portrait(int p, int depth, std::vector<Residue> labels)
    : p_(p), depth_(depth), labels_(std::move(labels)) {
  if (p < 2 || p > kMaxPrime) throw std::invalid_argument("prime out of range");
  if (labels_.size() != internal_vertex_count(p, depth))
    throw std::invalid_argument("label count does not match (p^n-1)/(p-1)");
  for (auto x : labels_)
    if (x >= p) throw std::invalid_argument("label outside {0,...,p-1}");
}

Portrait Portrait::rooted(int p, int depth, int exponent) {
  Portrait f(p, depth);
  if (depth > 0) f.labels_[0] = static_cast<Residue>(mod(exponent, p));
  return f;
}

Portrait Portrait::assemble(int root_label, std::span<const Portrait> children) {
  if (children.empty()) throw std::invalid_argument("assemble needs p children");
  const int p = children.front().prime();
  if (static_cast<int>(children.size()) != p)
    throw std::invalid_argument("assemble needs exactly p children");
  for (const auto& c : children) require_same_shape(c, children.front());
  Portrait f = from_level_sections(p, 1, children);
  f.labels_[0] = static_cast<Residue>(mod(root_label, p));
  return f;
}

bool Portrait::is_identity() const {
  return std::all_of(labels_.begin(), labels_.end(), [](Residue x) { return x == 0; });
}

std::size_t Portrait::leading_index() const {
  auto it = std::find_if(labels_.begin(), labels_.end(), [](Residue x) { return x != 0; });
  return static_cast<std::size_t>(it - labels_.begin());
}

Vertex act(const Portrait& f, const Vertex& v) {
  if (v.level() > f.depth()) throw std::invalid_argument("vertex deeper than portrait");
  if (v.prime() != f.prime()) throw std::invalid_argument("vertex and portrait primes differ");
  const int p = f.prime();
  std::vector<int> out;
  out.reserve(v.level());
  std::uint64_t pos = 0;  // position of the image prefix within its level
  for (int level = 0; level < v.level(); ++level) {
    const int shift = f.label(internal_vertex_count(p, level) + pos);
    const int y = (v.letters()[level] - 1 + shift) % p;
    out.push_back(y + 1);
    pos = pos * p + y;
  }
  return Vertex(p, std::move(out));
}

Portrait compose(const Portrait& f, const Portrait& g) {
  require_same_shape(f, g);
  const int p = f.p_;
  const std::size_t n = f.labels_.size();
  Portrait out(p, f.depth_);
  if (n == 0) return out;
  auto& img = scratch_images(n);
  vertex_images(f, img);
  const Residue* fl = f.labels_.data();
  const Residue* gl = g.labels_.data();
  Residue* ol = out.labels_.data();
  std::size_t off = 0, count = 1;
  for (int level = 0; level < f.depth_; ++level) {
    for (std::size_t q = 0; q < count; ++q) {
      int s = fl[off + q] + gl[off + img[off + q]];
      if (s >= p) s -= p;
      ol[off + q] = static_cast<Residue>(s);
    }
    off += count;
    count *= p;
  }
  return out;
}

Portrait invert(const Portrait& f) {
  const int p = f.p_;
  const std::size_t n = f.labels_.size();
  Portrait out(p, f.depth_);
  if (n == 0) return out;
  auto& img = scratch_images(n);
  vertex_images(f, img);
  std::size_t off = 0, count = 1;
  for (int level = 0; level < f.depth_; ++level) {
    for (std::size_t q = 0; q < count; ++q) {
      const int x = f.labels_[off + q];
      out.labels_[off + img[off + q]] = static_cast<Residue>(x == 0 ? 0 : p - x);
    }
    off += count;
    count *= p;
  }
  return out;
}

Portrait power(const Portrait& f, long long exponent) {
  Portrait base = exponent < 0 ? invert(f) : f;
  unsigned long long e = exponent < 0 ? -static_cast<unsigned long long>(exponent)
                                      : static_cast<unsigned long long>(exponent);
  Portrait result(f.prime(), f.depth());
  while (e) {
    if (e & 1) result = compose(result, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return result;
}

Portrait conjugate(const Portrait& f, const Portrait& g) {
  return compose(compose(invert(g), f), g);
}

Portrait commutator(const Portrait& f, const Portrait& g) {
  return compose(compose(invert(f), invert(g)), compose(f, g));
}

Portrait section(const Portrait& f, const Vertex& u) {
  if (u.level() > f.depth()) throw std::invalid_argument("vertex deeper than portrait");
  if (act(f, u) != u) throw std::invalid_argument("section requested at a vertex moved by f");
  const int p = f.prime();
  const int d = f.depth() - u.level();
  std::vector<Residue> labels;
  labels.reserve(internal_vertex_count(p, d));
  const std::uint64_t upos = u.position();
  std::uint64_t count = 1;
  for (int level = 0; level < d; ++level) {
    const std::size_t off = internal_vertex_count(p, u.level() + level);
    const std::uint64_t start = upos * count;
    for (std::uint64_t q = 0; q < count; ++q) labels.push_back(f.label(off + start + q));
    count *= p;
  }
  return Portrait(p, d, std::move(labels));
}

Portrait truncate(const Portrait& f, int depth) {
  if (depth > f.depth() || depth < 0) throw std::invalid_argument("truncation depth out of range");
  auto labels = f.labels();
  return Portrait(f.prime(), depth,
                  std::vector<Residue>(labels.begin(),
                                       labels.begin() + internal_vertex_count(f.prime(), depth)));
}

Permutation leaf_permutation(const Portrait& f) {
  const int p = f.prime();
  const std::uint64_t leaves = checked_power(p, f.depth());
  std::vector<std::uint32_t> images(leaves);
  if (f.depth() == 0) return Permutation(std::move(images));
  const std::size_t n = f.labels().size();
  auto& img = scratch_images(n);
  vertex_images(f, img);
  const std::size_t last_off = n - leaves / p;
  for (std::uint64_t parent = 0; parent < leaves / p; ++parent) {
    const std::uint32_t base = img[last_off + parent] * p;
    const int shift = f.label(last_off + parent);
    for (int x = 0; x < p; ++x) images[parent * p + x] = base + (x + shift) % p;
  }
  return Permutation(std::move(images));
}

Portrait portrait_from_leaf_permutation(int p, int depth, const Permutation& perm) {
  const std::uint64_t leaves = checked_power(p, depth);
  if (perm.degree() != leaves) throw std::invalid_argument("permutation degree is not p^depth");
  std::vector<Residue> labels(internal_vertex_count(p, depth), 0);
  std::uint64_t count = 1;
  for (int level = 0; level < depth; ++level) {
    const std::size_t off = internal_vertex_count(p, level);
    const std::uint64_t block = leaves / count;       // leaves under a level vertex
    const std::uint64_t child_block = block / p;      // leaves under its children
    for (std::uint64_t q = 0; q < count; ++q) {
      const std::uint64_t image_block = perm[q * block] / block;
      const std::uint64_t first_child = perm[q * block] / child_block;
      const int shift = static_cast<int>(first_child % p);
      for (std::uint64_t leaf = q * block; leaf < (q + 1) * block; ++leaf) {
        const std::uint64_t x = (leaf - q * block) / child_block;
        const std::uint64_t expected_child = image_block * p + (x + shift) % p;
        if (perm[leaf] / child_block != expected_child)
          throw std::invalid_argument("permutation is not in the Sylow p-subgroup of the tree");
      }
      labels[off + q] = static_cast<Residue>(shift);
    }
    count *= p;
  }
  return Portrait(p, depth, std::move(labels));
}

Portrait from_level_sections(int p, int level, std::span<const Portrait> sections) {
  const std::uint64_t width = checked_power(p, level);
  if (sections.size() != width) throw std::invalid_argument("need p^level sections");
  const int d = sections.front().depth();
  for (const auto& s : sections)
    if (s.prime() != p || s.depth() != d) throw std::invalid_argument("section shape mismatch");
  std::vector<Residue> labels(internal_vertex_count(p, level + d), 0);
  std::uint64_t count = 1;
  for (int l = 0; l < d; ++l) {
    const std::size_t off = internal_vertex_count(p, level + l);
    const std::size_t sub_off = internal_vertex_count(p, l);
    for (std::uint64_t v = 0; v < width; ++v) {
      const auto src = sections[v].labels();
      std::copy(src.begin() + sub_off, src.begin() + sub_off + count,
                labels.begin() + off + v * count);
    }
    count *= p;
  }
  return Portrait(p, level + d, std::move(labels));
}

std::string serialize(const Portrait& f) {
  std::ostringstream os;
  os << f.prime() << ' ' << f.depth() << '\n';
  bool first = true;
  for (auto x : f.labels()) {
    if (!first) os << ' ';
    os << static_cast<int>(x);
    first = false;
  }
  os << '\n';
  return os.str();
}

Portrait parse_portrait(const std::string& text) {
  std::istringstream is(text);
  int p = 0, n = -1;
  if (!(is >> p >> n)) throw std::invalid_argument("portrait header must be \"p n\"");
  if (!is_odd_prime(p)) throw std::invalid_argument("portrait prime must be an odd prime");
  std::vector<Residue> labels;
  int x;
  while (is >> x) {
    if (x < 0 || x >= p) throw std::invalid_argument("portrait label outside {0,...,p-1}");
    labels.push_back(static_cast<Residue>(x));
  }
  if (!is.eof()) throw std::invalid_argument("portrait labels must be integers");
  return Portrait(p, n, std::move(labels));
}

std::ostream& operator<<(std::ostream& os, const Portrait& f) { return os << serialize(f); }

}  // namespace multiegs
