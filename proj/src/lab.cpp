#include "multiegs/lab.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <json.hpp>

namespace multiegs {

namespace {

const char* kContainment =
    "containment in Q_n is a necessary finite-level consequence of the infinite statement; "
    "non-containment in Q_n is a rigorous refutation";

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string datum_line(const NumericalDatum& d) {
  std::string s = format_datum(d);
  std::string out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out += (out.empty() ? "" : "; ") + line;
  return out;
}

std::string vec_text(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string pow_text(int p, int e) { return std::to_string(p) + "^" + std::to_string(e); }

CheckReport start(const std::string& id, const NumericalDatum& d, int n, int m = 0) {
  CheckReport r;
  r.id = id;
  r.datum_hash = datum_hash(d);
  r.datum_text = datum_line(d);
  r.level = n;
  r.aux_level = m;
  r.semantics = kContainment;
  return r;
}

FiniteQuotient quotient(const NumericalDatum& d, int n, const LabConfig& cfg) {
  return FiniteQuotient(d, n, cfg.degree_guard, cfg.cache);
}

/// a, then b_i^(j) in the documented order.
std::vector<GroupWord> generator_words(const NumericalDatum& d) {
  std::vector<GroupWord> out{GroupWord::a(d.p)};
  for (int j = 1; j <= d.p; ++j)
    for (int i = 1; i <= d.family_size(j); ++i) out.push_back(GroupWord::b(d, j, i));
  return out;
}

/// psi_1^-1((g, 1, ..., 1)).
Portrait first_coordinate(const Portrait& g) {
  std::vector<Portrait> secs(g.prime(), Portrait(g.prime(), g.depth()));
  secs[0] = g;
  return from_level_sections(g.prime(), 1, secs);
}

BranchElement first_coordinate(const GroupWord& w) {
  std::vector<BranchElement> kids(w.prime(), BranchElement(GroupWord(w.prime())));
  kids[0] = BranchElement(w);
  return BranchElement(0, std::move(kids));
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionError(msg);
}

void require_nontrivial(const GroupWord& x, const NumericalDatum& d) {
  require(is_trivial(x, d) != Tri::True, "precondition: x must be non-trivial");
}

/// Block-placement check shared by the regular-branch statements: every
/// seed word and every strong generator of `block` (one level down), put in
/// the first coordinate, must lie in `target`.
void check_first_coordinate(CheckReport& r, const FiniteQuotient& q, const SubgroupChain& target,
                            const std::vector<GroupWord>& seeds, const SubgroupChain& block,
                            const std::string& block_name) {
  const auto lower = q.lower(q.level() - 1);
  for (const auto& w : seeds) {
    if (!target.contains(first_coordinate(lower.image(w)))) {
      r.verdict = Verdict::RefutedByWitness;
      r.add("witness", format_branch(first_coordinate(w)));
      r.add("witness_portrait", one_line(serialize(q.image(first_coordinate(w)))));
      return;
    }
  }
  int k = 0;
  for (const auto& g : block.strong_generators()) {
    ++k;
    const Portrait e = first_coordinate(g);
    if (!target.contains(e)) {
      r.verdict = Verdict::RefutedByWitness;
      r.add("witness", "psi^-1((g,1,...,1)) for strong generator " + std::to_string(k) + " of " +
                           block_name);
      r.add("witness_portrait", one_line(serialize(e)));
      return;
    }
  }
  r.verdict = Verdict::Verified;
  r.add("tested", std::to_string(seeds.size()) + " seed words and " +
                      std::to_string(block.log_order()) + " strong generators of " + block_name);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::RefutedByWitness: return "RefutedByWitness";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::GuardExceeded: return "GuardExceeded";
  }
  return "?";
}

std::string format_report(const CheckReport& r) {
  std::ostringstream os;
  os << "statement: " << r.id << '\n';
  os << "datum: " << r.datum_hash << " [" << r.datum_text << "]\n";
  os << "level: " << r.level;
  if (r.aux_level) os << " m=" << r.aux_level;
  os << '\n';
  os << "verdict: " << to_string(r.verdict) << " (expected " << to_string(r.expected) << ", "
     << (r.agrees() ? "agrees" : "DISAGREES") << ")\n";
  os << "semantics: " << r.semantics << '\n';
  for (const auto& [k, v] : r.certificates) os << "  " << k << ": " << v << '\n';
  return os.str();
}

std::string reports_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["statement"] = r.id;
    j["datum_hash"] = r.datum_hash;
    j["datum"] = r.datum_text;
    j["level"] = r.level;
    if (r.aux_level) j["m"] = r.aux_level;
    j["verdict"] = to_string(r.verdict);
    j["expected"] = to_string(r.expected);
    j["agrees"] = r.agrees();
    j["semantics"] = r.semantics;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.certificates) c[k] = v;
    j["certificates"] = c;
    arr.push_back(j);
  }
  return arr.dump(2);
}

// ---------------------------------------------------------------- branch checks

CheckReport check_branch_over_derived(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 3, "level must be at least 3");
  const auto cls = classify(d);
  auto r = start("branch-derived", d, n);
  r.expected = cls.branch_over_derived ? Verdict::Verified : Verdict::RefutedByWitness;
  const auto q = quotient(d, n, cfg);
  const auto lower = q.lower(n - 1);
  const auto target = derived(q.group().level_kernel(1));
  r.add("St(1)' image order", pow_text(d.p, target.log_order()));
  r.add("derived(Q_" + std::to_string(n - 1) + ") order", pow_text(d.p, lower.derived().log_order()));
  std::vector<GroupWord> seeds;
  const auto gens = generator_words(d);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t k = i + 1; k < gens.size(); ++k) seeds.push_back(commutator(gens[i], gens[k]));
  check_first_coordinate(r, q, target, seeds, lower.derived(), "derived(Q_" + std::to_string(n - 1) + ")");
  return r;
}

CheckReport check_branch_over_gamma3(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 3, "level must be at least 3");
  const auto cls = classify(d);
  require(!cls.in_G_class, "excluded by hypothesis: datum is in class G");
  auto r = start("branch-gamma3", d, n);
  const auto q = quotient(d, n, cfg);
  const auto lower = q.lower(n - 1);
  const auto target = gamma3(q.group().level_kernel(1));
  r.add("gamma3(St(1)) image order", pow_text(d.p, target.log_order()));
  std::vector<GroupWord> seeds;
  const auto gens = generator_words(d);
  for (const auto& x : gens)
    for (const auto& y : gens)
      for (const auto& z : gens) {
        auto w = commutator(commutator(x, y), z);
        if (!w.empty()) seeds.push_back(w);
      }
  check_first_coordinate(r, q, target, seeds, lower.gamma3(), "gamma3(Q_" + std::to_string(n - 1) + ")");
  return r;
}

CheckReport check_key(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 2, "level must be at least 2");
  const auto cls = classify(d);
  require(!cls.in_G_class, "excluded by hypothesis: datum is in class G");
  auto r = start("key", d, n);
  r.expected = cls.in_E_class ? Verdict::RefutedByWitness : Verdict::Verified;
  std::vector<GroupWord> seeds;
  for (int j = 1; j <= d.p; ++j)
    for (int k = j + 1; k <= d.p; ++k)
      for (int i = 1; i <= d.family_size(j); ++i)
        for (int l = 1; l <= d.family_size(k); ++l)
          seeds.push_back(commutator(GroupWord::b(d, j, i), GroupWord::b(d, k, l)));
  for (int level = 2; level <= n; ++level) {
    const auto q = quotient(d, level, cfg);
    const auto& g3 = q.gamma3();
    for (const auto& w : seeds)
      if (!g3.contains(q.image(w))) {
        r.verdict = Verdict::RefutedByWitness;
        r.add("refuting level", std::to_string(level));
        r.add("witness", format_word(w) + " outside gamma3(Q_" + std::to_string(level) + ")");
        return r;
      }
    const auto st1d = derived(q.group().level_kernel(1));
    if (!g3.contains(st1d)) {
      r.verdict = Verdict::RefutedByWitness;
      r.add("refuting level", std::to_string(level));
      r.add("witness", "a strong generator of St(1)' image outside gamma3(Q_" + std::to_string(level) + ")");
      return r;
    }
    r.add("level " + std::to_string(level),
          "St(1)' image (" + pow_text(d.p, st1d.log_order()) + ") inside gamma3 (" +
              pow_text(d.p, g3.log_order()) + ")");
  }
  r.verdict = Verdict::Verified;
  r.add("refuting level", "none up to " + std::to_string(n));
  return r;
}

CheckReport check_subdirect(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 2, "level must be at least 2");
  const auto cls = classify(d);
  require(!cls.in_G_class, "excluded by hypothesis: datum is in class G");
  auto r = start("subdirect", d, n);
  const auto q = quotient(d, n, cfg);
  const bool use_derived = cls.branch_over_derived;
  const auto& h = use_derived ? q.derived() : q.gamma3();
  r.add("subgroup", use_derived ? "derived" : "gamma3");
  const auto flags = joint_image_subdirect(q, h);
  r.verdict = Verdict::Verified;
  for (int x = 1; x <= d.p; ++x) {
    r.add("coordinate " + std::to_string(x), flags[x - 1] ? "full" : "proper");
    if (!flags[x - 1]) r.verdict = Verdict::RefutedByWitness;
  }
  return r;
}

CheckReport check_second_derived(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 3, "level must be at least 3");
  const auto cls = classify(d);
  require(cls.branch_over_derived, "excluded by hypothesis: datum is not regular branch over G'");
  auto r = start("second-derived", d, n);
  const auto q = quotient(d, n, cfg);
  const auto& target = q.second_derived();
  r.add("second derived order", pow_text(d.p, target.log_order()));
  std::vector<GroupWord> seeds;
  const auto gens = generator_words(d);
  for (const auto& x : gens)
    for (const auto& y : gens)
      for (const auto& z : gens) {
        auto w = commutator(commutator(x, y), z);
        if (!w.empty()) seeds.push_back(w);
      }
  check_first_coordinate(r, q, target, seeds, q.lower(n - 1).gamma3(),
                         "gamma3(Q_" + std::to_string(n - 1) + ")");
  return r;
}

// ---------------------------------------------------------------- congruence

CheckReport check_csp_positive(const NumericalDatum& d, int n, const LabConfig& cfg) {
  const auto cls = classify(d);
  require(cls.csp == CspStatus::HasCSP,
          "statement does not apply: datum is classified " + to_string(cls.csp));
  const bool gamma_case = cls.branch_over_gamma3_only;
  const int k = gamma_case ? 5 : d.total_rank() + 1;
  require(n >= k + 1, "level too small for the statement: need n >= " + std::to_string(k + 1));
  auto r = start("csp-positive", d, n);
  const auto q = quotient(d, n, cfg);
  const auto kernel = q.group().level_kernel(k);
  const auto& target = gamma_case ? q.gamma3() : q.derived();
  const std::string name = gamma_case ? "gamma3" : "derived";
  r.add("statement", "St(" + std::to_string(k) + ") <= " + name);
  r.add("kernel order", pow_text(d.p, kernel.log_order()));
  r.add(name + " order", pow_text(d.p, target.log_order()));
  r.verdict = target.contains(kernel) ? Verdict::Verified : Verdict::RefutedByWitness;
  if (r.verdict == Verdict::RefutedByWitness)
    for (const auto& g : kernel.strong_generators())
      if (!target.contains(g)) {
        r.add("witness_portrait", one_line(serialize(g)));
        break;
      }
  return r;
}

DependentWitness dependent_witness(const NumericalDatum& d, int n) {
  require(n >= 1, "n must be positive");
  const auto dep = dependency(d);
  require(dep.has_value(), "joint defining vectors are linearly independent");
  DependentWitness w;
  w.dependency = *dep;
  const int p = d.p;
  const int j = dep->target.family;
  w.c = GroupWord::family(p, FamilyPower{j, dep->target.exponents});
  w.product = GroupWord(p);
  GroupWord conjugated(p);
  for (const auto& term : dep->terms) {
    const auto b = GroupWord::family(p, FamilyPower{term.family, term.exponents});
    w.product = w.product * b;
    conjugated = conjugated * b.conjugate(GroupWord::a(p, term.family - j));
  }
  w.t.emplace_back(w.product);
  if (n >= 2) w.t.emplace_back(conjugated);
  const auto e = combined_vector(d, dep->target);
  for (int k = 3; k <= n; ++k) {
    std::vector<BranchElement> kids;
    for (int x = 1; x <= p; ++x) {
      const auto idx = defining_vector_index(p, j, x);
      kids.push_back(idx ? BranchElement(GroupWord::a(p, e[*idx])) : w.t.back());
    }
    w.t.emplace_back(0, std::move(kids));
  }
  return w;
}

CheckReport csp_witness_dependent(const NumericalDatum& d, int n, int m, const LabConfig& cfg) {
  require(m > n, "need m > n");
  const auto cls = classify(d);
  require(cls.branch_over_derived, "excluded by hypothesis: datum is not regular branch over G'");
  const auto w = dependent_witness(d, n);
  auto r = start("no-csp", d, n, m);
  r.semantics =
      "c^-1 t_n in St_G(n) (exact) together with an abelianization defect shows St_G(n) is not "
      "inside G'; the image in Q_m can only separate if G'St_G(m) misses it";
  const auto& tn = w.t.back();
  r.add("c", format_word(w.c));
  r.add("t_1", format_branch(w.t.front()));
  if (n >= 2) r.add("t_2", format_branch(w.t[1]));
  r.add("t_" + std::to_string(n), format_branch(tn));

  const Portrait y_n = compose(invert(evaluate(w.c, d, n)), evaluate(tn, d, n));
  const bool a_ok = y_n.is_identity();
  r.add("(a) c^-1 t_n trivial to depth n", a_ok ? "yes" : "no");

  const auto ab_t = abelianization(tn, d);
  const auto ab_prod = abelianization(w.product, d);
  const auto ab_c = abelianization(w.c, d);
  const bool b_ok = ab_t == ab_prod && ab_t != ab_c;
  r.add("(b) abelianization t_n", vec_text(ab_t));
  r.add("(b) abelianization c", vec_text(ab_c));
  r.add("(b) defect non-zero", b_ok ? "yes" : "no");

  const auto q = quotient(d, m, cfg);
  const Portrait y = compose(invert(q.image(w.c)), evaluate(tn, d, m));
  const bool in_kernel =
      y.leading_index() >= internal_vertex_count(d.p, n) && q.group().contains(y);
  const bool outside = !q.derived().contains(y);
  r.add("(c) image in level-" + std::to_string(n) + " kernel of Q_" + std::to_string(m),
        in_kernel ? "yes" : "no");
  r.add("(c) image outside derived(Q_" + std::to_string(m) + ")", outside ? "yes" : "no");
  r.add("image of c^-1 t_n at depth m", one_line(serialize(y)));

  if (!a_ok || !b_ok || !in_kernel)
    r.verdict = Verdict::RefutedByWitness;
  else
    r.verdict = outside ? Verdict::Verified : Verdict::Inconclusive;
  return r;
}

ExceptionalWitness exceptional_witness(const NumericalDatum& d, int n) {
  require(n >= 1, "n must be positive");
  const auto cls = classify(d);
  require(cls.in_E_class,
          d.p == 3 ? "class E is empty for p=3" : "excluded by hypothesis: datum is not in class E");
  ExceptionalWitness w;
  const int p = d.p;
  w.j = cls.e_family_j;
  w.k = cls.e_family_k;
  w.bj = GroupWord::b(d, w.j, 1, cls.e_scalar_j);
  w.bk = GroupWord::b(d, w.k, 1, cls.e_scalar_k);
  w.commutator_jk = commutator(w.bj, w.bk);
  const auto t1 = commutator(w.bj.conjugate(GroupWord::a(p, w.j - w.k)), w.bk);
  w.t.emplace_back(t1);
  if (n >= 2) w.t.emplace_back(t1);
  for (int level = 3; level <= n; ++level) {
    std::vector<BranchElement> kids(p, BranchElement(GroupWord(p)));
    kids[p - w.k] = w.t.back();  // coordinate p-k+1
    w.t.emplace_back(0, std::move(kids));
  }
  return w;
}

CheckReport csp_witness_exceptional(const NumericalDatum& d, int n, int m, const LabConfig& cfg) {
  require(m > n, "need m > n");
  const auto w = exceptional_witness(d, n);
  auto r = start("exceptional", d, n, m);
  r.semantics =
      "t_n in St_G(n) is exact; t_n outside gamma3(Q_m) would be a rigorous finite separation";
  const auto& tn = w.t.back();
  r.add("families", std::to_string(w.j) + "," + std::to_string(w.k));
  r.add("t_1", format_branch(w.t.front()));
  r.add("t_" + std::to_string(n), format_branch(tn));
  const bool st_ok = evaluate(tn, d, n).is_identity();
  r.add("t_n in St(n)", st_ok ? "yes" : "no");
  const bool deeper = evaluate(tn, d, n + 1).is_identity();
  r.add("t_n in St(n+1)", deeper ? "yes" : "no");

  const auto q = quotient(d, m, cfg);
  const auto& g3 = q.gamma3();
  const Portrait tn_m = evaluate(tn, d, m);
  const bool coset = g3.contains(compose(invert(q.image(w.commutator_jk)), tn_m));
  const bool outside = !g3.contains(tn_m);
  r.add("t_n in [b^(j),b^(k)] gamma3(Q_m)", coset ? "yes" : "no");
  r.add("t_n outside gamma3(Q_m)", outside ? "yes" : "no");

  int found = 0;
  for (int level = 2; level <= m && !found; ++level) {
    const auto ql = quotient(d, level, cfg);
    if (!ql.gamma3().contains(ql.image(w.commutator_jk))) found = level;
  }
  r.add("refuting level for [b^(j),b^(k)] outside gamma3",
        found ? std::to_string(found) : "none up to " + std::to_string(m));

  if (!st_ok || !coset)
    r.verdict = Verdict::RefutedByWitness;
  else
    r.verdict = outside ? Verdict::Verified : Verdict::Inconclusive;
  return r;
}

// ---------------------------------------------------------------- fractality

CheckReport check_fractality(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 2, "level must be at least 2");
  const auto cls = classify(d);
  auto r = start("fractality", d, n);
  r.expected = cls.in_G_class ? Verdict::RefutedByWitness : Verdict::Verified;
  const auto q = quotient(d, n, cfg);
  r.verdict = Verdict::Verified;
  for (int k = 1; k < n; ++k) {
    const auto kernel = q.group().level_kernel(k);
    const SubgroupChain full = q.lower(n - k).group();
    const std::uint64_t width = checked_power(d.p, k);
    int worst = 0;
    std::optional<Vertex> bad;
    for (std::uint64_t pos = 0; pos < width; ++pos) {
      const auto u = Vertex::from_position(d.p, k, pos);
      const auto img = section_image(kernel, u);
      const int defect = full.log_order() - img.log_order();
      if ((defect > 0 || !full.contains(img)) && !bad) {
        bad = u;
        worst = defect;
      }
    }
    if (bad) {
      r.verdict = Verdict::RefutedByWitness;
      r.add("depth " + std::to_string(k), "section image at " + bad->to_string() +
                                              " is proper, defect index " + pow_text(d.p, worst));
      break;
    }
    r.add("depth " + std::to_string(k), "all " + std::to_string(width) + " section images equal Q_" +
                                             std::to_string(n - k) + " (order " +
                                             pow_text(d.p, full.log_order()) + ")");
  }
  return r;
}

std::optional<Vertex> find_full_section_vertex(const NumericalDatum& d, const GroupWord& x,
                                               int depth_bound, int m, const LabConfig& cfg) {
  require(!classify(d).in_G_class, "excluded by hypothesis: datum is in class G");
  require_nontrivial(x, d);
  require(depth_bound < m, "depth bound must be below m");
  const auto q = quotient(d, m, cfg);
  const Portrait xi = q.image(x);
  require(!xi.is_identity(), "precondition: x is trivial in Q_m; raise m");
  const auto n = normal_closure(q, std::span<const Portrait>(&xi, 1));
  for (int level = 0; level <= depth_bound; ++level) {
    const SubgroupChain full = level == 0 ? q.group() : q.lower(m - level).group();
    const std::uint64_t width = checked_power(d.p, level);
    for (std::uint64_t pos = 0; pos < width; ++pos) {
      const auto u = Vertex::from_position(d.p, level, pos);
      const auto img = section_image(n, u);
      if (img.log_order() == full.log_order()) return u;
    }
  }
  return std::nullopt;
}

CheckReport check_full_section_vertex(const NumericalDatum& d, const GroupWord& x, int depth_bound,
                                      int m, const LabConfig& cfg) {
  auto r = start("full-section", d, depth_bound, m);
  r.semantics = "section image equality is checked in Q_m; a vertex found is finite-level evidence";
  r.add("x", format_word(x));
  const auto u = find_full_section_vertex(d, x, depth_bound, m, cfg);
  if (u) {
    r.verdict = Verdict::Verified;
    r.add("vertex", u->to_string());
  } else {
    r.verdict = Verdict::GuardExceeded;
    r.add("vertex", "NotFound up to depth " + std::to_string(depth_bound));
  }
  return r;
}

CheckReport check_normal_closure_blocks(const NumericalDatum& d, const GroupWord& x, int m,
                                        const LabConfig& cfg) {
  const auto cls = classify(d);
  require(cls.branch_over_derived, "excluded by hypothesis: datum is not regular branch over G'");
  require_nontrivial(x, d);
  auto r = start("normal-closure", d, 0, m);
  r.semantics = "containment of the block subgroups is checked in Q_m (finite-level evidence)";
  r.add("x", format_word(x));
  const auto q = quotient(d, m, cfg);
  const Portrait xi = q.image(x);
  require(!xi.is_identity(), "precondition: x is trivial in Q_m; raise m");
  const auto nc = normal_closure(q, std::span<const Portrait>(&xi, 1));
  r.add("normal closure order", pow_text(d.p, nc.log_order()));
  int found_m = 0, found_k = 0;
  for (int n = 1; n < m; ++n) {
    const auto lower = q.lower(m - n);
    if (!found_m && lower.gamma3().log_order() > 0 && nc.contains(vertex_product(lower.gamma3(), n)))
      found_m = n;
    if (!cls.in_E_class && !found_k && lower.derived().log_order() > 0 &&
        nc.contains(vertex_product(lower.derived(), n)))
      found_k = n;
  }
  r.add("M_n contained for n", found_m ? std::to_string(found_m) : "none");
  if (!cls.in_E_class) r.add("K_n contained for n", found_k ? std::to_string(found_k) : "none");
  else r.add("K_n", "not asserted for class E");
  r.level = found_m;
  const bool ok = found_m && (cls.in_E_class || found_k);
  r.verdict = ok ? Verdict::Verified : Verdict::GuardExceeded;
  return r;
}

CheckReport check_weak_csp(const NumericalDatum& d, int n, const LabConfig& cfg) {
  require(n >= 1, "level must be positive");
  require(!classify(d).in_G_class, "excluded by hypothesis: datum is in class G");
  const int m = n + 2;
  auto r = start("weak-csp", d, n, m);
  const auto q = quotient(d, m, cfg);
  const auto st_derived = derived(q.group().level_kernel(n));
  const auto kn = vertex_product(q.lower(m - n).derived(), n);
  r.add("St(n)' image order", pow_text(d.p, st_derived.log_order()));
  r.add("K_n image order", pow_text(d.p, kn.log_order()));
  r.verdict = kn.contains(st_derived) ? Verdict::Verified : Verdict::RefutedByWitness;
  if (n == 1)
    r.add("K_1 = St(1)' at this level", st_derived.contains(kn) && kn.contains(st_derived) ? "yes" : "no");
  return r;
}

// ---------------------------------------------------------------- constant vectors

CheckReport constant_vector_analysis(const NumericalDatum& d, int n, const LabConfig& cfg) {
  const auto cls = classify(d);
  std::vector<int> fams;
  for (int j = 1; j <= d.p; ++j)
    if (d.family_size(j)) fams.push_back(j);
  require(cls.in_G_class, "excluded by hypothesis: datum is not in class G");
  require(fams.size() >= 2, "excluded by hypothesis: a single family");
  require(n >= 2, "level must be at least 2");
  auto r = start("constant-structure", d, n);
  const int p = d.p;
  const auto q = quotient(d, n, cfg);
  const auto lower = q.lower(n - 1);
  const auto a = GroupWord::a(p);

  // b^(j) rescaled to the all-ones vector, and y_i^(j) = (b^(j) a^-1)^(a^i).
  std::map<int, GroupWord> b;
  for (int j : fams) b[j] = GroupWord::b(d, j, 1, inverse_mod(d.vector(j, 1)[1], p));
  auto y = [&](int j, int i) { return (b[j] * a.inverse()).conjugate(GroupWord::a(p, i)); };

  std::vector<Portrait> ys, ys_lower, seeds;
  for (int j : fams) {
    seeds.push_back(q.image(b[j] * a.inverse()));
    for (int i = 0; i < p; ++i) {
      ys.push_back(q.image(y(j, i)));
      ys_lower.push_back(lower.image(y(j, i)));
    }
  }
  const auto k = normal_closure(q, seeds);
  const bool index_ok = q.group().log_order() - k.log_order() == 1;
  const bool contains_derived = k.contains(q.derived());
  r.add("(a) |Q_n : K|", pow_text(p, q.group().log_order() - k.log_order()));
  r.add("(a) derived inside K", contains_derived ? "yes" : "no");

  const auto k_derived = derived(k, ys);
  bool b_ok = true;
  int tested = 0;
  for (int j : fams)
    for (int kk : fams)
      for (int i = 0; i < p; ++i)
        for (int l = 0; l < p; ++l) {
          const auto w = commutator(y(j, i), y(kk, l));
          ++tested;
          if (!k_derived.contains(first_coordinate(lower.image(w)))) {
            if (b_ok) r.add("(b) failing element", format_branch(first_coordinate(w)));
            b_ok = false;
          }
        }
  r.add("(b) ([y_i^(j), y_l^(k)],1,...,1) in K'", (b_ok ? "all " : "not all ") + std::to_string(tested));

  std::mt19937_64 rng(cfg.seed);
  r.add("seed", std::to_string(cfg.seed));
  bool c_ok = true;
  bool d_ok = true;
  const Portrait ap = q.image(a);
  for (int j : fams) {
    const Portrait gen = q.image(b[j] * a.inverse());
    const std::vector<Portrait> norm{ap, q.image(b[j])};
    const auto kj = SubgroupChain::normal_closure(p, n, std::span<const Portrait>(&gen, 1), norm);
    const auto kj_derived = derived(kj);
    int good = 0;
    for (int s = 0; s < cfg.samples; ++s) {
      const Portrait g = kj.random_element(rng);
      Portrait prod = g;
      Portrait conj = g;
      for (int i = 1; i < p; ++i) {
        conj = conjugate(conj, ap);
        prod = compose(prod, conj);
      }
      if (kj_derived.contains(prod)) ++good;
    }
    c_ok = c_ok && good == cfg.samples;
    r.add("(c) star products in K_" + std::to_string(j) + "'",
          std::to_string(good) + "/" + std::to_string(cfg.samples));
    if (n == 2) {
      std::size_t both = 0;
      for (const auto& e : kj.elements()) both += k_derived.contains(e);
      const bool eq = both == static_cast<std::size_t>(kj_derived.order()) && k_derived.contains(kj_derived);
      d_ok = d_ok && eq;
      r.add("(d) |K' cap K_" + std::to_string(j) + "| vs |K_" + std::to_string(j) + "'|",
            std::to_string(both) + " vs " + kj_derived.order().str());
    }
  }
  if (n != 2) r.add("(d)", "intersection equality only brute-forced at n=2");
  r.verdict = index_ok && contains_derived && b_ok && c_ok && d_ok ? Verdict::Verified
                                                                    : Verdict::RefutedByWitness;
  return r;
}

// ---------------------------------------------------------------- dispatch

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "branch-derived", "branch-gamma3", "constant-structure", "csp-positive", "exceptional",
      "fractality",     "key",           "no-csp",             "second-derived", "subdirect",
      "weak-csp"};
  return ids;
}

CheckReport run_check(const std::string& id, const NumericalDatum& d, int n, int m,
                      const LabConfig& cfg) {
  try {
    if (id == "branch-derived") return check_branch_over_derived(d, n, cfg);
    if (id == "branch-gamma3") return check_branch_over_gamma3(d, n, cfg);
    if (id == "key") return check_key(d, n, cfg);
    if (id == "subdirect") return check_subdirect(d, n, cfg);
    if (id == "second-derived") return check_second_derived(d, n, cfg);
    if (id == "csp-positive") return check_csp_positive(d, n, cfg);
    if (id == "fractality") return check_fractality(d, n, cfg);
    if (id == "weak-csp") return check_weak_csp(d, n, cfg);
    if (id == "constant-structure") return constant_vector_analysis(d, n, cfg);
    if (id == "no-csp") return csp_witness_dependent(d, n, m, cfg);
    if (id == "exceptional") return csp_witness_exceptional(d, n, m, cfg);
  } catch (const GuardError& e) {
    auto r = start(id, d, n, m);
    r.verdict = Verdict::GuardExceeded;
    r.add("guard", e.what());
    return r;
  }
  throw std::invalid_argument("unknown statement id \"" + id + "\"");
}

}  // namespace multiegs
