#include "multiegs/datum.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace multiegs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& token, int line) {
  const std::string t = trim(token);
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw std::invalid_argument("line " + std::to_string(line) + ": expected an integer, got \"" +
                                t + "\"");
  return value;
}

FpMatrix rows_of(const NumericalDatum& d) {
  FpMatrix rows;
  for (const auto& fam : d.families)
    for (const auto& v : fam) rows.push_back(v.entries);
  return rows;
}

std::string vector_text(const DefiningVector& v) {
  std::string s = "(";
  for (int k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v.entries[k]);
  return s + ")";
}

}  // namespace

bool is_symmetric(const DefiningVector& v) {
  const int n = v.size();
  for (int k = 0; k < n / 2; ++k)
    if (v.entries[k] != v.entries[n - 1 - k]) return false;
  return true;
}

bool is_constant(const DefiningVector& v) {
  if (v.entries.empty() || v.entries.front() == 0) return false;
  return std::all_of(v.entries.begin(), v.entries.end(),
                     [&](int x) { return x == v.entries.front(); });
}

int NumericalDatum::total_rank() const {
  int r = 0;
  for (const auto& f : families) r += static_cast<int>(f.size());
  return r;
}

NumericalDatum make_datum(int p, const std::vector<std::pair<int, std::vector<int>>>& vectors) {
  NumericalDatum d;
  d.p = p;
  d.families.assign(p, {});
  for (const auto& [j, entries] : vectors) {
    if (j < 1 || j > p) throw std::invalid_argument("family index outside {1,...,p}");
    std::vector<int> reduced;
    for (int x : entries) reduced.push_back(mod(x, p));
    d.families[j - 1].push_back(DefiningVector{reduced});
  }
  return d;
}

std::vector<std::string> validate(const NumericalDatum& d) {
  std::vector<std::string> v;
  if (!is_odd_prime(d.p) || d.p > kMaxPrime) {
    v.push_back("p must be an odd prime (at most " + std::to_string(kMaxPrime) + ")");
    return v;
  }
  if (static_cast<int>(d.families.size()) != d.p) {
    v.push_back("there must be exactly p families");
    return v;
  }
  bool any = false;
  for (int j = 1; j <= d.p; ++j) {
    const auto& fam = d.families[j - 1];
    if (!fam.empty()) any = true;
    if (static_cast<int>(fam.size()) > d.p - 1)
      v.push_back("family " + std::to_string(j) + " has more than p-1 vectors");
    bool shapes_ok = true;
    for (const auto& vec : fam) {
      if (vec.size() != d.p - 1) {
        v.push_back("family " + std::to_string(j) + ": vector " + vector_text(vec) +
                    " must have length p-1");
        shapes_ok = false;
      }
      for (int x : vec.entries)
        if (x < 0 || x >= d.p) {
          v.push_back("family " + std::to_string(j) + ": entry outside {0,...,p-1}");
          shapes_ok = false;
          break;
        }
    }
    if (shapes_ok && !fam.empty()) {
      FpMatrix rows;
      for (const auto& vec : fam) rows.push_back(vec.entries);
      if (rank_mod(rows, d.p) != static_cast<int>(fam.size()))
        v.push_back("family " + std::to_string(j) + " is linearly dependent over F_p");
    }
  }
  if (!any) v.push_back("some r_j != 0 required (all families are empty)");
  return v;
}

void require_valid(const NumericalDatum& d) {
  const auto v = validate(d);
  if (v.empty()) return;
  std::string msg = "invalid datum:";
  for (const auto& s : v) msg += " " + s + ";";
  throw std::invalid_argument(msg);
}

std::optional<int> defining_vector_index(int p, int j, int coordinate) {
  const int s = mod(coordinate + j - 1, p);
  if (s == 0) return std::nullopt;
  return s;
}

Portrait directed_portrait(int p, int j, const DefiningVector& v, int depth) {
  std::vector<Residue> labels(internal_vertex_count(p, depth), 0);
  const int path_letter = p - j + 1;
  std::uint64_t path_pos = 0;  // position of path_letter^m within level m
  for (int m = 0; m + 1 < depth; ++m) {
    const std::size_t off = internal_vertex_count(p, m + 1);
    for (int c = 1; c <= p; ++c) {
      const auto s = defining_vector_index(p, j, c);
      if (!s) continue;
      labels[off + path_pos * p + (c - 1)] = static_cast<Residue>(mod(v[*s], p));
    }
    path_pos = path_pos * p + (path_letter - 1);
  }
  return Portrait(p, depth, std::move(labels));
}

Portrait generator_portrait(const NumericalDatum& d, int j, int i, int depth) {
  if (j < 1 || j > d.p) throw std::invalid_argument("family index outside {1,...,p}");
  if (d.families[j - 1].empty()) throw std::invalid_argument("family " + std::to_string(j) + " is empty");
  if (i < 1 || i > d.family_size(j)) throw std::invalid_argument("generator index out of range");
  return directed_portrait(d.p, j, d.vector(j, i), depth);
}

bool is_torsion(const NumericalDatum& d) {
  for (const auto& fam : d.families)
    for (const auto& v : fam) {
      long long s = 0;
      for (int x : v.entries) s += x;
      if (mod(s, d.p) != 0) return false;
    }
  return true;
}

std::string to_string(CspStatus s) {
  switch (s) {
    case CspStatus::HasCSP: return "HasCSP";
    case CspStatus::NoCSP: return "NoCSP";
    case CspStatus::OutsideTheoremScope: return "OutsideTheoremScope";
  }
  return "?";
}

Classification classify(const NumericalDatum& d) {
  require_valid(d);
  Classification c;
  const int p = d.p;
  const auto rows = rows_of(d);
  c.dimV = rank_mod(rows, p);
  c.joint_independent = c.dimV == d.total_rank();
  c.torsion = is_torsion(d);

  std::vector<int> nonempty;
  for (int j = 1; j <= p; ++j)
    if (!d.families[j - 1].empty()) nonempty.push_back(j);
  const bool all_singletons = std::all_of(nonempty.begin(), nonempty.end(),
                                          [&](int j) { return d.family_size(j) == 1; });
  bool all_symmetric = true;
  bool all_constant = true;
  for (const auto& fam : d.families)
    for (const auto& v : fam) {
      all_symmetric = all_symmetric && is_symmetric(v);
      all_constant = all_constant && is_constant(v);
    }

  c.in_G_class = all_singletons && all_constant;
  c.in_S_class = all_singletons && all_symmetric;

  if (nonempty.size() == 2 && all_singletons && all_symmetric && c.dimV == 2) {
    const auto& e = d.vector(nonempty[0], 1);
    const auto& f = d.vector(nonempty[1], 1);
    for (int lam = 1; lam < p && !c.in_E_class; ++lam)
      for (int mu = 1; mu < p && !c.in_E_class; ++mu) {
        bool ok = true;
        for (int k = 0; k < p - 1 && ok; ++k) {
          const int x = mod(lam * e.entries[k], p), y = mod(mu * f.entries[k], p);
          ok = x <= 1 && y <= 1 && x != y;
        }
        if (ok) {
          c.in_E_class = true;
          c.e_family_j = nonempty[0];
          c.e_family_k = nonempty[1];
          c.e_scalar_j = lam;
          c.e_scalar_k = mu;
        }
      }
  }

  if (!all_symmetric) {
    c.branch_over_derived = true;
    c.reasons.push_back("some defining vector is non-symmetric: regular branch over G'");
  } else if (c.dimV >= 2) {
    c.branch_over_derived = true;
    c.reasons.push_back("dim V = " + std::to_string(c.dimV) + " >= 2: regular branch over G'");
  } else if (c.in_G_class) {
    c.not_branch = true;
    c.reasons.push_back("constant defining vectors (class G): weakly regular branch, not branch");
  } else {
    c.branch_over_gamma3_only = true;
    c.reasons.push_back(
        "one symmetric non-constant vector up to scalar: regular branch over gamma_3 only");
  }

  if (c.not_branch) {
    c.csp = CspStatus::OutsideTheoremScope;
    c.reasons.push_back("not branch: outside the CSP classification");
  } else if (c.branch_over_gamma3_only) {
    c.csp = CspStatus::HasCSP;
    c.reasons.push_back("branch over gamma_3 but not G': congruence subgroup property");
  } else if (c.in_E_class) {
    c.csp = CspStatus::NoCSP;
    c.reasons.push_back("class E: gamma_3 is not a congruence subgroup, no CSP");
  } else if (c.joint_independent) {
    c.csp = CspStatus::HasCSP;
    c.reasons.push_back("joint defining vectors linearly independent: congruence subgroup property");
  } else {
    c.csp = CspStatus::NoCSP;
    c.reasons.push_back("joint defining vectors linearly dependent: G' is not a congruence subgroup");
  }
  return c;
}

DefiningVector combined_vector(const NumericalDatum& d, const FamilyElement& el) {
  std::vector<int> sum(d.p - 1, 0);
  for (int i = 1; i <= static_cast<int>(el.exponents.size()); ++i)
    for (int k = 0; k < d.p - 1; ++k)
      sum[k] = mod(sum[k] + static_cast<long long>(el.exponents[i - 1]) * d.vector(el.family, i).entries[k],
                   d.p);
  return DefiningVector{sum};
}

std::optional<Dependency> dependency(const NumericalDatum& d) {
  require_valid(d);
  const auto rows = rows_of(d);
  const auto null = left_nullspace(rows, d.p);
  if (null.empty()) return std::nullopt;
  const auto& lambda = null.front();

  // Split lambda by family.
  std::vector<std::vector<int>> parts(d.p);
  std::size_t at = 0;
  for (int j = 1; j <= d.p; ++j)
    for (int i = 0; i < d.family_size(j); ++i) parts[j - 1].push_back(lambda[at++]);
  auto nonzero = [](const std::vector<int>& v) {
    return std::any_of(v.begin(), v.end(), [](int x) { return x != 0; });
  };
  int target = 0;
  for (int j = 1; j <= d.p && !target; ++j)
    if (nonzero(parts[j - 1])) target = j;

  // Scale so that the target's first non-zero exponent is 1.
  const auto& tp = parts[target - 1];
  const int lead = *std::find_if(tp.begin(), tp.end(), [](int x) { return x != 0; });
  const int scale = inverse_mod(lead, d.p);

  Dependency dep;
  dep.target.family = target;
  for (int x : tp) dep.target.exponents.push_back(mod(static_cast<long long>(x) * scale, d.p));
  for (int k = 1; k <= d.p; ++k) {
    if (k == target || !nonzero(parts[k - 1])) continue;
    FamilyElement term{k, {}};
    for (int x : parts[k - 1]) term.exponents.push_back(mod(-static_cast<long long>(x) * scale, d.p));
    dep.terms.push_back(std::move(term));
  }
  return dep;
}

NumericalDatum parse_datum(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  int p = 0;
  std::vector<std::pair<int, std::vector<std::vector<int>>>> families;
  std::vector<bool> seen;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
    };
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "p") {
      if (p != 0) fail("duplicate p");
      std::string rest;
      std::getline(ls, rest);
      p = parse_int(rest, line_no);
      if (!is_odd_prime(p) || p > kMaxPrime) fail("p must be an odd prime");
      seen.assign(p + 1, false);
    } else if (keyword == "family") {
      if (p == 0) fail("p must be declared before families");
      std::string rest;
      std::getline(ls, rest);
      const auto eq = rest.find('=');
      if (eq == std::string::npos) fail("expected \"family <j> = <vectors>\"");
      const int j = parse_int(rest.substr(0, eq), line_no);
      if (j < 1 || j > p) fail("family index outside {1,...,p}");
      if (seen[j]) fail("family " + std::to_string(j) + " declared twice");
      seen[j] = true;
      std::vector<std::vector<int>> vectors;
      std::string body = trim(rest.substr(eq + 1));
      if (!body.empty()) {
        std::istringstream vs(body);
        std::string vec;
        while (std::getline(vs, vec, ';')) {
          if (trim(vec).empty()) fail("empty vector");
          std::vector<int> entries;
          std::istringstream es(vec);
          std::string entry;
          while (std::getline(es, entry, ',')) {
            const int x = parse_int(entry, line_no);
            if (x < 0 || x >= p) fail("entry " + std::to_string(x) + " outside {0,...,p-1}");
            entries.push_back(x);
          }
          if (static_cast<int>(entries.size()) != p - 1)
            fail("vector must have exactly p-1 = " + std::to_string(p - 1) + " entries");
          vectors.push_back(std::move(entries));
        }
      }
      families.emplace_back(j, std::move(vectors));
    } else {
      fail("unknown keyword \"" + keyword + "\"");
    }
  }
  if (p == 0) throw std::invalid_argument("missing \"p <prime>\" line");
  NumericalDatum d;
  d.p = p;
  d.families.assign(p, {});
  for (auto& [j, vs] : families)
    for (auto& v : vs) d.families[j - 1].push_back(DefiningVector{std::move(v)});
  return d;
}

std::string format_datum(const NumericalDatum& d) {
  std::string s = "p " + std::to_string(d.p) + "\n";
  for (int j = 1; j <= static_cast<int>(d.families.size()); ++j) {
    if (d.families[j - 1].empty()) continue;
    s += "family " + std::to_string(j) + " = ";
    for (std::size_t i = 0; i < d.families[j - 1].size(); ++i) {
      if (i) s += " ; ";
      const auto& v = d.families[j - 1][i];
      for (int k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v.entries[k]);
    }
    s += "\n";
  }
  return s;
}

std::string datum_hash(const NumericalDatum& d) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : format_datum(d)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace multiegs
