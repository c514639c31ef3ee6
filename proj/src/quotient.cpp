#include "multiegs/quotient.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace multiegs {

// ---------------------------------------------------------------- cache

std::string write_chain(const SubgroupChain& c) {
  std::ostringstream os;
  os << "chain " << c.prime() << ' ' << c.depth() << '\n';
  os << "order " << c.order() << '\n';
  os << "base";
  for (auto k : c.base_indices()) os << ' ' << k;
  os << '\n';
  for (const auto& g : c.strong_generator_permutations()) {
    for (std::size_t i = 0; i < g.degree(); ++i) os << (i ? " " : "") << g[i];
    os << '\n';
  }
  return os.str();
}

SubgroupChain read_chain(const std::string& text) {
  std::istringstream is(text);
  std::string word, line;
  int p = 0, depth = 0;
  if (!(is >> word >> p >> depth) || word != "chain") throw std::invalid_argument("bad chain header");
  std::getline(is, line);
  std::getline(is, line);  // order
  std::getline(is, line);  // base
  const std::uint64_t degree = checked_power(p, depth);
  std::vector<Portrait> pivots;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::uint32_t> images;
    std::uint32_t x;
    while (ls >> x) images.push_back(x);
    if (images.size() != degree) throw std::invalid_argument("bad chain generator");
    pivots.push_back(portrait_from_leaf_permutation(p, depth, Permutation(std::move(images))));
  }
  return SubgroupChain::from_strong_generators(p, depth, pivots);
}

ChainCache::ChainCache(std::filesystem::path directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(*dir_);
}

std::optional<SubgroupChain> ChainCache::load(const std::string& key) const {
  if (!dir_) return std::nullopt;
  std::ifstream in(*dir_ / (key + ".chain"));
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return read_chain(ss.str());
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ChainCache::save(const std::string& key, const SubgroupChain& c) const {
  if (!dir_) return;
  const auto tmp = *dir_ / (key + ".chain.tmp");
  {
    std::ofstream out(tmp);
    out << write_chain(c);
  }
  std::filesystem::rename(tmp, *dir_ / (key + ".chain"));
}

SubgroupChain ChainCache::get_or_build(const std::string& key,
                                       const std::function<SubgroupChain()>& build) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
    if (auto c = load(key)) {
      ++hits_;
      memo_.emplace(key, *c);
      return *c;
    }
    ++misses_;
  }
  SubgroupChain c = build();
  std::lock_guard lock(mutex_);
  memo_.emplace(key, c);
  save(key, c);
  return c;
}

// ---------------------------------------------------------------- quotient

FiniteQuotient::FiniteQuotient(NumericalDatum datum, int n, std::uint64_t degree_guard,
                               ChainCache* cache)
    : datum_(std::move(datum)), n_(n), guard_(degree_guard), cache_(cache) {
  require_valid(datum_);
  if (n < 1) throw std::invalid_argument("level must be at least 1");
  std::uint64_t deg = 0;
  try {
    deg = checked_power(datum_.p, n);
  } catch (const std::overflow_error&) {
    deg = UINT64_MAX;
  }
  if (deg > guard_)
    throw GuardError("degree " + std::to_string(datum_.p) + "^" + std::to_string(n) +
                     " exceeds the guard " + std::to_string(guard_));
  gens_.push_back(Portrait::rooted(datum_.p, n, 1));
  for (int j = 1; j <= datum_.p; ++j)
    for (int i = 1; i <= datum_.family_size(j); ++i)
      gens_.push_back(generator_portrait(datum_, j, i, n));
}

std::vector<Permutation> FiniteQuotient::generator_permutations() const {
  std::vector<Permutation> out;
  for (const auto& g : gens_) out.push_back(leaf_permutation(g));
  return out;
}

const SubgroupChain& FiniteQuotient::memo(std::optional<SubgroupChain>& slot,
                                          const std::string& what,
                                          const std::function<SubgroupChain()>& build) const {
  if (slot) return *slot;
  if (cache_)
    slot = cache_->get_or_build(datum_hash(datum_) + "-n" + std::to_string(n_) + "-" + what, build);
  else
    slot = build();
  return *slot;
}

const SubgroupChain& FiniteQuotient::group() const {
  return memo(group_, "group",
              [&] { return SubgroupChain::generated_by(datum_.p, n_, gens_); });
}

const SubgroupChain& FiniteQuotient::derived() const {
  return memo(derived_, "derived", [&] { return multiegs::derived(group(), gens_); });
}

const SubgroupChain& FiniteQuotient::gamma3() const {
  return memo(gamma3_, "gamma3", [&] {
    const auto d = derived().strong_generators();
    std::vector<Portrait> seeds;
    for (const auto& x : d)
      for (const auto& g : gens_) seeds.push_back(commutator(x, g));
    return SubgroupChain::normal_closure(datum_.p, n_, seeds, gens_);
  });
}

const SubgroupChain& FiniteQuotient::second_derived() const {
  return memo(second_derived_, "second_derived", [&] { return multiegs::derived(derived()); });
}

// ---------------------------------------------------------------- operations

namespace {

std::vector<Portrait> gens_or_strong(const SubgroupChain& h, std::span<const Portrait> gens) {
  if (!gens.empty()) return {gens.begin(), gens.end()};
  return h.strong_generators();
}

}  // namespace

SubgroupChain derived(const SubgroupChain& h, std::span<const Portrait> gens) {
  const auto g = gens_or_strong(h, gens);
  std::vector<Portrait> seeds;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) seeds.push_back(commutator(g[i], g[j]));
  return SubgroupChain::normal_closure(h.prime(), h.depth(), seeds, g);
}

SubgroupChain gamma3(const SubgroupChain& h, std::span<const Portrait> gens) {
  const auto g = gens_or_strong(h, gens);
  const auto d = derived(h, g).strong_generators();
  std::vector<Portrait> seeds;
  for (const auto& x : d)
    for (const auto& y : g) seeds.push_back(commutator(x, y));
  return SubgroupChain::normal_closure(h.prime(), h.depth(), seeds, g);
}

SubgroupChain second_derived(const SubgroupChain& h, std::span<const Portrait> gens) {
  return derived(derived(h, gens));
}

SubgroupChain level_kernel(const FiniteQuotient& q, const SubgroupChain& h, int k) {
  if (k < 1 || k > q.level()) throw std::invalid_argument("kernel level out of range");
  return h.level_kernel(k);
}

SubgroupChain section_image(const SubgroupChain& h, const Vertex& u) {
  const int p = h.prime();
  const int level = u.level();
  if (level > h.depth()) throw std::invalid_argument("vertex deeper than the quotient");
  const int d = h.depth() - level;
  const std::size_t cut = internal_vertex_count(p, level);
  std::vector<Portrait> top, tail;
  for (const auto& g : h.strong_generators()) (g.leading_index() < cut ? top : tail).push_back(g);

  // Stabilizer of u by Schreier generators over the orbit of u under the top
  // part; the tail fixes level `level` pointwise and is normal in H.
  std::vector<Portrait> stab = tail;
  if (!top.empty()) {
    std::map<Vertex, Portrait> transversal{{u, Portrait(p, h.depth())}};
    std::vector<Vertex> orbit{u};
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      const Vertex v = orbit[i];
      const Portrait tv = transversal.at(v);
      for (const auto& s : top) {
        const Vertex w = act(s, v);
        const Portrait tvs = compose(tv, s);
        auto it = transversal.find(w);
        if (it == transversal.end()) {
          transversal.emplace(w, tvs);
          orbit.push_back(w);
        } else {
          const Portrait sg = compose(tvs, invert(it->second));
          if (!sg.is_identity()) stab.push_back(sg);
        }
      }
    }
  }
  std::vector<Portrait> sections;
  for (const auto& g : stab) sections.push_back(section(g, u));
  return SubgroupChain::generated_by(p, d, sections);
}

SubgroupChain normal_closure(const FiniteQuotient& q, std::span<const Portrait> elements) {
  return SubgroupChain::normal_closure(q.prime(), q.level(), elements, q.generators());
}

std::vector<bool> joint_image_subdirect(const FiniteQuotient& q, const SubgroupChain& h) {
  const SubgroupChain below = q.lower(q.level() - 1).group();
  std::vector<bool> out;
  for (int x = 1; x <= q.prime(); ++x) {
    const auto img = section_image(h, Vertex(q.prime(), {x}));
    out.push_back(img.log_order() == below.log_order() && below.contains(img));
  }
  return out;
}

SubgroupChain vertex_product(const SubgroupChain& block, int level) {
  const int p = block.prime();
  const std::uint64_t width = checked_power(p, level);
  const Portrait id(p, block.depth());
  std::vector<Portrait> pivots;
  for (std::uint64_t v = 0; v < width; ++v)
    for (const auto& g : block.strong_generators()) {
      std::vector<Portrait> secs(width, id);
      secs[v] = g;
      pivots.push_back(from_level_sections(p, level, secs));
    }
  std::sort(pivots.begin(), pivots.end(),
            [](const Portrait& x, const Portrait& y) { return x.leading_index() < y.leading_index(); });
  return SubgroupChain::from_strong_generators(p, block.depth() + level, pivots);
}

}  // namespace multiegs
