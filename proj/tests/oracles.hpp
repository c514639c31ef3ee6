#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <vector>

#include "multiegs/datum.hpp"
#include "multiegs/tree.hpp"

/// Brute-force references that avoid portraits and stabilizer chains.
namespace oracle {

using Perm = std::vector<std::uint32_t>;
using Letters = std::vector<int>;

inline Letters leaf_letters(int p, int n, std::uint32_t index) {
  Letters w(n);
  for (int k = n - 1; k >= 0; --k) {
    w[k] = 1 + static_cast<int>(index % p);
    index /= p;
  }
  return w;
}

inline std::uint32_t leaf_index(int p, const Letters& w) {
  std::uint32_t x = 0;
  for (int c : w) x = x * p + (c - 1);
  return x;
}

inline int rotate(int p, int letter, int e) { return 1 + ((letter - 1 + e) % p + p) % p; }

/// b^(j) with vector e on a leaf word, unrolled straight from the recursion:
/// coordinate p-j+1 carries b itself, coordinate c carries a^(e_s), s = c+j-1 mod p.
inline void apply_directed(int p, int j, const std::vector<int>& e, Letters& w, std::size_t from) {
  for (std::size_t k = from; k < w.size(); ++k) {
    const int c = w[k];
    if (c == p - j + 1) continue;
    const int s = ((c + j - 1 - 1) % p) + 1;
    if (k + 1 < w.size()) w[k + 1] = rotate(p, w[k + 1], e[s - 1]);
    return;
  }
}

inline Perm directed_perm(int p, int n, int j, const std::vector<int>& e) {
  const std::uint32_t deg = static_cast<std::uint32_t>(multiegs::checked_power(p, n));
  Perm out(deg);
  for (std::uint32_t x = 0; x < deg; ++x) {
    auto w = leaf_letters(p, n, x);
    apply_directed(p, j, e, w, 0);
    out[x] = leaf_index(p, w);
  }
  return out;
}

inline Perm rooted_perm(int p, int n) {
  const std::uint32_t deg = static_cast<std::uint32_t>(multiegs::checked_power(p, n));
  Perm out(deg);
  for (std::uint32_t x = 0; x < deg; ++x) {
    auto w = leaf_letters(p, n, x);
    w[0] = rotate(p, w[0], 1);
    out[x] = leaf_index(p, w);
  }
  return out;
}

/// x^(fg) = (x^f)^g
inline Perm mul(const Perm& f, const Perm& g) {
  Perm h(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) h[x] = g[f[x]];
  return h;
}

inline Perm inv(const Perm& f) {
  Perm h(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) h[f[x]] = static_cast<std::uint32_t>(x);
  return h;
}

inline Perm comm(const Perm& f, const Perm& g) { return mul(mul(inv(f), inv(g)), mul(f, g)); }

inline Perm identity(std::size_t deg) {
  Perm e(deg);
  for (std::size_t x = 0; x < deg; ++x) e[x] = static_cast<std::uint32_t>(x);
  return e;
}

/// All elements of <gens>, by breadth-first closure.
inline std::set<Perm> closure(const std::vector<Perm>& gens, std::size_t deg) {
  std::set<Perm> seen{identity(deg)};
  std::deque<Perm> todo{identity(deg)};
  while (!todo.empty()) {
    const Perm x = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      Perm y = mul(x, g);
      if (seen.insert(y).second) todo.push_back(std::move(y));
    }
  }
  return seen;
}

/// Normal closure of `elements` in <gens>.
inline std::set<Perm> normal_closure(const std::vector<Perm>& elements, const std::vector<Perm>& gens,
                                     std::size_t deg) {
  std::vector<Perm> current = elements;
  for (;;) {
    const auto group = closure(current, deg);
    bool grew = false;
    for (const auto& x : std::vector<Perm>(current))
      for (const auto& g : gens) {
        Perm y = mul(mul(inv(g), x), g);
        if (!group.count(y)) {
          current.push_back(std::move(y));
          grew = true;
        }
      }
    if (!grew) return group;
  }
}

/// G' of <gens>.
inline std::set<Perm> derived(const std::vector<Perm>& gens, std::size_t deg) {
  std::vector<Perm> comms;
  for (const auto& x : gens)
    for (const auto& y : gens) comms.push_back(comm(x, y));
  return normal_closure(comms, gens, deg);
}

inline std::vector<Perm> generator_perms(const multiegs::NumericalDatum& d, int n) {
  std::vector<Perm> gens{rooted_perm(d.p, n)};
  for (int j = 1; j <= d.p; ++j)
    for (int i = 1; i <= d.family_size(j); ++i)
      gens.push_back(directed_perm(d.p, n, j, d.vector(j, i).entries));
  return gens;
}

}  // namespace oracle
