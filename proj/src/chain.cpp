#include "multiegs/chain.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace multiegs {

SubgroupChain::SubgroupChain(int p, int depth)
    : p_(p), depth_(depth), slots_(internal_vertex_count(p, depth)) {}

SubgroupChain SubgroupChain::generated_by(int p, int depth, std::span<const Portrait> generators) {
  SubgroupChain c(p, depth);
  for (const auto& g : generators) c.add(g);
  return c;
}

SubgroupChain SubgroupChain::normal_closure(int p, int depth, std::span<const Portrait> elements,
                                            std::span<const Portrait> normalizers) {
  SubgroupChain c(p, depth);
  for (const auto& g : elements) c.add_normal(g, normalizers);
  return c;
}

SubgroupChain SubgroupChain::from_strong_generators(int p, int depth,
                                                    std::span<const Portrait> pivots) {
  SubgroupChain c(p, depth);
  for (const auto& g : pivots) {
    if (g.prime() != p || g.depth() != depth) throw std::invalid_argument("pivot shape mismatch");
    if (g.is_identity() || !c.slots_[g.leading_index()].powers.empty())
      throw std::invalid_argument("pivots must have distinct leading indices");
    c.store(g);
  }
  return c;
}

bool SubgroupChain::add(const Portrait& g) { return insert_and_close(g, {}); }

bool SubgroupChain::add_normal(const Portrait& g, std::span<const Portrait> normalizers) {
  return insert_and_close(g, normalizers);
}

Portrait SubgroupChain::sift(const Portrait& g) const {
  if (g.prime() != p_ || g.depth() != depth_) throw std::invalid_argument("element shape mismatch");
  Portrait r = g;
  for (;;) {
    const std::size_t k = r.leading_index();
    if (k == slots_.size() || slots_[k].powers.empty()) return r;
    const int c = r.label(k);
    r = compose(slots_[k].powers[p_ - c - 1], r);
  }
}

bool SubgroupChain::contains(const Portrait& g) const { return sift(g).is_identity(); }

bool SubgroupChain::contains(const Permutation& g) const {
  Portrait f;
  try {
    f = portrait_from_leaf_permutation(p_, depth_, g);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return contains(f);
}

bool SubgroupChain::contains(const SubgroupChain& other) const {
  if (other.log_order() > log_order()) return false;
  for (std::size_t k : other.positions_)
    if (!contains(other.slots_[k].powers.front())) return false;
  return true;
}

BigInt SubgroupChain::order() const {
  BigInt r = 1;
  for (int i = 0; i < log_order(); ++i) r *= p_;
  return r;
}

std::vector<Vertex> SubgroupChain::base() const {
  std::vector<Vertex> out;
  for (std::size_t k : positions_) {
    int level = 0;
    while (internal_vertex_count(p_, level + 1) <= k) ++level;
    const auto v = Vertex::from_position(p_, level, k - internal_vertex_count(p_, level));
    out.push_back(v.child(1));
  }
  return out;
}

std::vector<Portrait> SubgroupChain::strong_generators() const {
  std::vector<Portrait> out;
  out.reserve(positions_.size());
  for (std::size_t k : positions_) out.push_back(slots_[k].powers.front());
  return out;
}

std::vector<Permutation> SubgroupChain::strong_generator_permutations() const {
  std::vector<Permutation> out;
  for (std::size_t k : positions_) out.push_back(leaf_permutation(slots_[k].powers.front()));
  return out;
}

SubgroupChain SubgroupChain::level_kernel(int level) const {
  if (level < 0 || level > depth_) throw std::invalid_argument("level out of range");
  SubgroupChain c(p_, depth_);
  const std::size_t from = internal_vertex_count(p_, level);
  for (std::size_t k : positions_)
    if (k >= from) {
      c.slots_[k] = slots_[k];
      c.positions_.push_back(k);
    }
  return c;
}

Portrait SubgroupChain::random_element(std::mt19937_64& rng) const {
  Portrait r(p_, depth_);
  for (std::size_t k : positions_) {
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(p_));
    if (c) r = compose(r, slots_[k].powers[c - 1]);
  }
  return r;
}

std::vector<Portrait> SubgroupChain::elements(std::size_t limit) const {
  std::vector<Portrait> out{Portrait(p_, depth_)};
  for (auto it = positions_.rbegin(); it != positions_.rend(); ++it) {
    if (out.size() * p_ > limit) throw std::length_error("subgroup too large to enumerate");
    const auto& pw = slots_[*it].powers;
    const std::size_t n = out.size();
    for (int c = 1; c < p_; ++c)
      for (std::size_t i = 0; i < n; ++i) out.push_back(compose(pw[c - 1], out[i]));
  }
  return out;
}

std::size_t SubgroupChain::store(Portrait g) {
  const std::size_t k = g.leading_index();
  const int c = g.label(k);
  if (c != 1) g = power(g, inverse_mod(c, p_));
  auto& slot = slots_[k];
  slot.powers.clear();
  slot.powers.push_back(g);
  for (int e = 2; e < p_; ++e) slot.powers.push_back(compose(slot.powers.back(), g));
  positions_.insert(std::upper_bound(positions_.begin(), positions_.end(), k), k);
  return k;
}

bool SubgroupChain::insert_and_close(Portrait g, std::span<const Portrait> normalizers) {
  Portrait r = sift(g);
  if (r.is_identity()) return false;
  std::deque<std::size_t> queue{store(std::move(r))};
  auto feed = [&](const Portrait& h) {
    Portrait rem = sift(h);
    if (!rem.is_identity()) queue.push_back(store(std::move(rem)));
  };
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const Portrait x = slots_[k].powers.front();
    const Portrait x_inv = slots_[k].powers.back();
    feed(compose(slots_[k].powers.back(), x));  // x^p
    const auto snapshot = positions_;
    for (std::size_t j : snapshot) {
      if (j == k) continue;
      const auto& y = slots_[j].powers;
      if (j > k)
        feed(compose(compose(x_inv, y.front()), x));  // y^x
      else
        feed(compose(compose(y.back(), x), y.front()));  // x^y
    }
    for (const auto& s : normalizers) feed(conjugate(x, s));
  }
  return true;
}

}  // namespace multiegs
