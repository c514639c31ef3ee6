#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multiegs/lab.hpp"
#include "multiegs/suite.hpp"

using namespace multiegs;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kGuard = 2, kInput = 3 };

struct RunConfig {
  std::string datum_path;
  int level = 0;  // 0: per-statement default
  int m = 0;
  std::uint64_t degree_guard = kDefaultDegreeGuard;
  std::string cache_dir;
  std::uint64_t seed = 1;
  std::string json_report;
  std::string statement;
  std::string word;
  std::string kind = "no-csp";
  std::uint64_t cap = 0;
  int depth_bound = 4;
  std::vector<int> criteria;
  int jobs = 1;
  int samples = 20;
};

NumericalDatum load_datum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open datum file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_datum(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text << '\n';
}

int exit_for(const CheckReport& r) {
  if (r.verdict == Verdict::GuardExceeded) return kGuard;
  if (!r.agrees() && r.verdict != Verdict::Inconclusive) return kRefuted;
  return kOk;
}

int emit(CheckReport r, const RunConfig& rc) {
  bool seeded = false;
  for (const auto& [k, v] : r.certificates) seeded = seeded || k == "seed";
  if (!seeded) r.add("seed", std::to_string(rc.seed));
  std::cout << format_report(r);
  write_file(rc.json_report, reports_json({r}));
  return exit_for(r);
}

std::string branch_text(const Classification& c) {
  if (c.not_branch) return "not branch";
  if (c.branch_over_derived) return "branch over G'";
  if (c.branch_over_gamma3_only) return "branch over gamma3 only";
  return "branch type unknown";
}

int cmd_classify(const RunConfig& rc) {
  const auto d = load_datum(rc.datum_path);
  const auto c = classify(d);
  std::vector<std::string> tags;
  if (c.in_G_class) tags.push_back("class G");
  if (c.in_E_class) tags.push_back("class E");
  if (c.in_S_class && !c.in_G_class && !c.in_E_class) tags.push_back("class S");
  tags.push_back(branch_text(c));
  tags.push_back(c.torsion ? "torsion" : "not torsion");
  tags.push_back(c.csp == CspStatus::OutsideTheoremScope ? "outside theorem scope" : to_string(c.csp));
  std::string line;
  for (const auto& t : tags) line += (line.empty() ? "" : ", ") + t;
  std::cout << "datum: " << datum_hash(d) << '\n' << line << '\n';
  std::cout << "dim V: " << c.dimV << ", r: " << d.total_rank()
            << ", joint family " << (c.joint_independent ? "independent" : "dependent") << '\n';
  for (const auto& reason : c.reasons) std::cout << "  because " << reason << '\n';
  if (!rc.json_report.empty()) {
    nlohmann::ordered_json j;
    j["datum_hash"] = datum_hash(d);
    j["summary"] = line;
    j["in_G_class"] = c.in_G_class;
    j["in_S_class"] = c.in_S_class;
    j["in_E_class"] = c.in_E_class;
    j["branch_over_derived"] = c.branch_over_derived;
    j["branch_over_gamma3_only"] = c.branch_over_gamma3_only;
    j["not_branch"] = c.not_branch;
    j["torsion"] = c.torsion;
    j["csp"] = to_string(c.csp);
    j["reasons"] = c.reasons;
    j["seed"] = rc.seed;
    write_file(rc.json_report, j.dump(2));
  }
  return kOk;
}

int cmd_quotient(RunConfig rc, ChainCache* cache) {
  const auto d = load_datum(rc.datum_path);
  if (!rc.level) rc.level = 3;
  int prev = 0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::cout << "level  |G/St(k)|  layer\n";
  for (int k = 1; k <= rc.level; ++k) {
    const FiniteQuotient q(d, k, rc.degree_guard, cache);
    const int lo = q.group().log_order();
    std::cout << k << "  " << q.group().order() << " = " << d.p << "^" << lo << "  " << d.p << "^"
              << lo - prev << '\n';
    rows.push_back({{"level", k}, {"log_order", lo}, {"order", q.group().order().str()},
                    {"layer_log", lo - prev}});
    prev = lo;
  }
  write_file(rc.json_report, rows.dump(2));
  return kOk;
}

int cmd_order(const RunConfig& rc) {
  const auto d = load_datum(rc.datum_path);
  const auto w = parse_word(rc.word, d);
  const std::uint64_t cap = rc.cap ? rc.cap : checked_power(d.p, 12);
  const auto r = order(w, d, cap);
  std::string text;
  int code = kOk;
  switch (r.kind) {
    case OrderResult::Kind::Finite:
      text = std::to_string(checked_power(d.p, r.log_p));
      break;
    case OrderResult::Kind::ExceedsCap:
      text = "ExceedsCap (order above " + std::to_string(cap) + ")";
      break;
    case OrderResult::Kind::GuardExceeded:
      text = "GuardExceeded";
      code = kGuard;
      break;
  }
  std::cout << format_word(w) << ": " << text << '\n';
  nlohmann::ordered_json j{{"word", format_word(w)}, {"result", text}, {"seed", rc.seed}};
  write_file(rc.json_report, j.dump(2));
  return code;
}

LabConfig lab_config(const RunConfig& rc, ChainCache* cache) {
  LabConfig cfg;
  cfg.degree_guard = rc.degree_guard;
  cfg.cache = cache;
  cfg.seed = rc.seed;
  cfg.search_depth = rc.depth_bound;
  cfg.samples = rc.samples;
  return cfg;
}

/// Level used when --level is absent.
int default_level(const std::string& id, const NumericalDatum& d) {
  if (id == "csp-positive") return classify(d).branch_over_gamma3_only ? 6 : d.total_rank() + 2;
  if (id == "weak-csp" || id == "exceptional") return 2;
  return 3;
}

/// Auxiliary level used when -m is absent.
int default_m(const std::string& id, int level, int depth_bound) {
  if (id == "full-section") return depth_bound + 2;
  if (id == "normal-closure") return 5;
  return level + 2;
}

int cmd_check(RunConfig rc, ChainCache* cache) {
  const auto d = load_datum(rc.datum_path);
  if (!rc.level) rc.level = default_level(rc.statement, d);
  const auto cfg = lab_config(rc, cache);
  const int m = rc.m ? rc.m : default_m(rc.statement, rc.level, rc.depth_bound);
  if (rc.statement == "full-section" || rc.statement == "normal-closure") {
    const auto x = parse_word(rc.word, d);
    try {
      if (rc.statement == "full-section")
        return emit(check_full_section_vertex(d, x, rc.depth_bound, m, cfg), rc);
      return emit(check_normal_closure_blocks(d, x, m, cfg), rc);
    } catch (const GuardError& e) {
      std::cerr << "guard exceeded: " << e.what() << '\n';
      return kGuard;
    }
  }
  return emit(run_check(rc.statement, d, rc.level, m, cfg), rc);
}

int cmd_witness(RunConfig rc, ChainCache* cache) {
  if (rc.kind != "no-csp" && rc.kind != "exceptional")
    throw std::invalid_argument("unknown witness kind \"" + rc.kind + "\" (no-csp, exceptional)");
  const auto d = load_datum(rc.datum_path);
  if (!rc.level) rc.level = default_level(rc.kind, d);
  const int m = rc.m ? rc.m : rc.level + 2;
  return emit(run_check(rc.kind, d, rc.level, m, lab_config(rc, cache)), rc);
}

int cmd_suite(const RunConfig& rc, ChainCache* cache) {
  SuiteConfig cfg;
  cfg.degree_guard = rc.degree_guard;
  cfg.seed = rc.seed;
  cfg.jobs = rc.jobs;
  if (!rc.cache_dir.empty()) cfg.cache_dir = rc.cache_dir;
  std::vector<int> ids = rc.criteria;
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto results = run_suite(ids, cfg, cache);
  std::cout << "seed: " << rc.seed << '\n' << format_suite(results);
  bool ok = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    arr.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"lines", r.lines}});
  }
  write_file(rc.json_report, nlohmann::ordered_json{{"seed", rc.seed}, {"criteria", arr}}.dump(2));
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << '\n';
  return ok ? kOk : kRefuted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-EGS groups on the p-adic tree: classification and finite-level checks"};
  app.require_subcommand(1);
  RunConfig rc;
  app.add_option("--modulus-guard", rc.degree_guard, "largest permitted degree p^n")
      ->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", rc.cache_dir, "directory for cached subgroup chains");
  app.add_option("--seed", rc.seed, "seed for sampled checks");
  app.add_option("--json-report", rc.json_report, "also write a JSON report here");

  auto datum_opt = [&](CLI::App* sub) {
    sub->add_option("--datum", rc.datum_path, "datum file")->required();
  };
  auto* classify_cmd = app.add_subcommand("classify", "classify a datum");
  datum_opt(classify_cmd);

  auto* quotient_cmd = app.add_subcommand("quotient", "orders of G/St(k) for k <= n");
  datum_opt(quotient_cmd);
  quotient_cmd->add_option("--level,-n", rc.level, "n")->check(CLI::PositiveNumber);

  auto* order_cmd = app.add_subcommand("order", "order of a word");
  datum_opt(order_cmd);
  order_cmd->add_option("--word,-w", rc.word, "word, e.g. \"a b[1,1]\"")->required();
  order_cmd->add_option("--cap", rc.cap, "order cap (default p^12)");

  auto* check_cmd = app.add_subcommand("check", "verify one statement at a finite level");
  datum_opt(check_cmd);
  std::vector<std::string> ids = check_ids();
  ids.push_back("full-section");
  ids.push_back("normal-closure");
  check_cmd->add_option("statement", rc.statement, "statement id")
      ->required()
      ->check(CLI::IsMember(ids));
  check_cmd->add_option("--level,-n", rc.level, "n")->check(CLI::PositiveNumber);
  check_cmd->add_option("-m", rc.m, "auxiliary level (default n+2)");
  check_cmd->add_option("--word,-w", rc.word, "x for full-section and normal-closure");
  check_cmd->add_option("--depth-bound", rc.depth_bound, "search depth for full-section");
  check_cmd->add_option("--samples", rc.samples, "sampled elements for constant-structure");

  auto* witness_cmd = app.add_subcommand("witness", "build a congruence-subgroup witness");
  datum_opt(witness_cmd);
  witness_cmd->add_option("kind", rc.kind, "no-csp or exceptional")->required();
  witness_cmd->add_option("--level,-n", rc.level, "n")->check(CLI::PositiveNumber);
  witness_cmd->add_option("-m", rc.m, "quotient level (default n+2)");

  auto* suite_cmd = app.add_subcommand("suite", "run the acceptance matrix");
  suite_cmd->add_option("--criteria", rc.criteria, "criteria to run (default all)");
  suite_cmd->add_option("--jobs,-j", rc.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    std::optional<ChainCache> cache;
    if (!rc.cache_dir.empty() && !suite_cmd->parsed()) cache.emplace(rc.cache_dir);
    ChainCache* cp = cache ? &*cache : nullptr;
    if (classify_cmd->parsed()) return cmd_classify(rc);
    if (quotient_cmd->parsed()) return cmd_quotient(rc, cp);
    if (order_cmd->parsed()) return cmd_order(rc);
    if (check_cmd->parsed()) return cmd_check(rc, cp);
    if (witness_cmd->parsed()) return cmd_witness(rc, cp);
    if (suite_cmd->parsed()) return cmd_suite(rc, nullptr);
  } catch (const GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << '\n';
    return kGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::length_error& e) {
    std::cerr << "guard exceeded: " << e.what() << '\n';
    return kGuard;
  }
  return kInput;
}
