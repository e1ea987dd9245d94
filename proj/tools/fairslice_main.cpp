// Command-line front end: parse cake files, run division rules, verify
// fairness/efficiency axioms, and run monotonicity experiments.
//
// Exit codes: 0 success (all checks passed), 1 a requested check failed,
// 2 parse/usage error, 3 solver failure.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairslice/cake_io.hpp"
#include "fairslice/ceei.hpp"
#include "fairslice/monotonicity.hpp"
#include "json.hpp"

namespace {

using namespace fairslice;

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

// --- tolerance resolution ----------------------------------------------------
// Explicit --tol wins; otherwise the FAIRSLICE_TOL environment variable;
// otherwise the command's default.

std::optional<double> parse_env_tol() {
  const char* raw = std::getenv("FAIRSLICE_TOL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v >= 0))
    throw ParseError(std::string("FAIRSLICE_TOL='") + raw +
                     "' is not a non-negative number");
  return v;
}

double resolve_tol(const std::optional<double>& cli_tol, double command_default) {
  if (cli_tol) return *cli_tol;
  if (auto env = parse_env_tol()) return *env;
  return command_default;
}

// --- shared option plumbing ---------------------------------------------------

struct RuleOptions {
  std::string rule_name;
  std::optional<double> p;
  std::optional<double> tol;
};

void add_rule_options(CLI::App* cmd, RuleOptions* opts) {
  cmd->add_option("--rule", opts->rule_name,
                  "Division rule: nash, leximin-abs, leximin-rel, util-abs, util-rel, "
                  "wp-abs, wp-rel, cut-and-choose")
      ->required();
  cmd->add_option("--p", opts->p,
                  "Exponent for the power-mean rules wp-abs / wp-rel (required there, "
                  "rejected elsewhere)");
}

Rule make_rule(const RuleOptions& opts) {
  auto kind = parse_rule_kind(opts.rule_name);
  if (!kind) throw ParseError("unknown rule '" + opts.rule_name + "'");
  Rule rule;
  rule.kind = *kind;
  const bool wants_p =
      rule.kind == RuleKind::PowerAbsolute || rule.kind == RuleKind::PowerRelative;
  if (wants_p && !opts.p)
    throw ParseError("rule '" + opts.rule_name + "' needs --p");
  if (!wants_p && opts.p)
    throw ParseError("--p only applies to wp-abs / wp-rel");
  if (opts.p) rule.p = *opts.p;
  rule.tol = resolve_tol(opts.tol, 1e-9);
  return rule;
}

// --- plain-text tables ----------------------------------------------------------

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) {
      if (c >= width.size()) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  for (const auto& row : rows) {
    out << " ";
    for (size_t c = 0; c < row.size(); ++c) {
      out << " " << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size(), ' ');
    }
    out << "\n";
  }
}

std::string approx(const Rational& x) {
  std::ostringstream s;
  s << "~" << to_double(x);
  return s.str();
}

void print_solve_human(const Cake& cake, const Rule& rule, const SolveResult& res) {
  std::cout << "rule: " << rule_name(rule);
  if (rule.kind == RuleKind::PowerAbsolute || rule.kind == RuleKind::PowerRelative)
    std::cout << " (p = " << rule.p << ")";
  std::cout << "\n\nslice fractions (one row per agent):\n";
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    std::vector<std::string> row{cake.agent_name(i)};
    for (size_t j = 0; j < cake.num_slices(); ++j)
      row.push_back(format_rational(res.allocation.fraction(i, j)));
    rows.push_back(std::move(row));
  }
  print_table(std::cout, rows);

  std::cout << "\nutilities:\n";
  rows.clear();
  for (size_t i = 0; i < cake.num_agents(); ++i)
    rows.push_back({cake.agent_name(i), "absolute", format_rational(res.utility.absolute[i]),
                    approx(res.utility.absolute[i]), "relative",
                    format_rational(res.utility.relative[i]),
                    approx(res.utility.relative[i])});
  print_table(std::cout, rows);

  if (res.prices) {
    std::cout << "\nprice densities (per unit length):\n";
    rows.clear();
    std::vector<std::string> row{"price"};
    for (const Rational& d : res.prices->density) row.push_back(format_rational(d));
    rows.push_back(std::move(row));
    print_table(std::cout, rows);
  }
  if (!res.diagnostics.notes.empty()) std::cout << "\nnotes: " << res.diagnostics.notes << "\n";
}

// --- subcommands ------------------------------------------------------------------

struct SolveCmd {
  std::string cake_path;
  RuleOptions rule;
  bool json = false;
};

int run_solve(const SolveCmd& cmd) {
  const CakeFile file = load_cake(cmd.cake_path);
  const Rule rule = make_rule(cmd.rule);
  const SolveResult res = solve_rule(file.cake, rule);
  if (cmd.json)
    std::cout << serialize_solve_record(file.cake, rule, res);
  else
    print_solve_human(file.cake, rule, res);
  return kExitOk;
}

struct VerifyCmd {
  std::string cake_path;
  std::string allocation_path;
  std::string axioms = "all";
  std::optional<double> tol;
  bool json = false;
};

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_verify(const VerifyCmd& cmd) {
  const CakeFile file = load_cake(cmd.cake_path);
  const AllocationFile alloc_file = load_allocation(cmd.allocation_path);
  const double tol = resolve_tol(cmd.tol, 0);

  Allocation alloc = [&] {
    try {
      return Allocation(file.cake, alloc_file.fractions);
    } catch (const std::invalid_argument& e) {
      throw ParseError(cmd.allocation_path + ": " + e.what());
    }
  }();

  std::vector<std::string> names = split_list(cmd.axioms);
  if (names.empty()) throw ParseError("--axioms names no checks");
  if (names.size() == 1 && names[0] == "all")
    names = {"prop", "ef", "po", "weak-po", "ceei", "sceei"};

  // Price system for the equilibrium checks: the allocation file's prices
  // when given, otherwise the standard measure induced by the allocation.
  auto priced = [&]() -> std::optional<PriceVector> {
    if (alloc_file.prices) {
      if (alloc_file.prices->size() != file.cake.num_slices())
        throw ParseError(cmd.allocation_path + ": " +
                         std::to_string(alloc_file.prices->size()) + " prices for " +
                         std::to_string(file.cake.num_slices()) + " slices");
      PriceVector pv;
      pv.density = *alloc_file.prices;
      return pv;
    }
    try {
      return standard_price_measure(file.cake, alloc);
    } catch (const std::invalid_argument&) {
      return std::nullopt;  // some agent holds nothing of value
    }
  }();

  std::vector<AxiomReport> reports;
  for (const std::string& name : names) {
    if (name == "prop") {
      reports.push_back(check_proportional(file.cake, alloc, tol));
    } else if (name == "ef") {
      reports.push_back(check_envy_free(file.cake, alloc, tol));
    } else if (name == "po") {
      reports.push_back(check_pareto_optimal(file.cake, alloc, tol));
    } else if (name == "weak-po") {
      reports.push_back(check_weak_pareto_optimal(file.cake, alloc, tol));
    } else if (name == "ceei" || name == "sceei") {
      if (!priced) {
        AxiomReport r;
        r.axiom = name;
        r.pass = false;
        r.tolerance = tol;
        r.detail = "no price system: none in the allocation file, and the standard "
                   "measure is undefined because some agent holds nothing of value";
        reports.push_back(std::move(r));
      } else if (name == "ceei") {
        reports.push_back(verify_ceei(file.cake, alloc, *priced, tol));
      } else {
        reports.push_back(verify_sceei(file.cake, alloc, *priced, tol));
      }
    } else {
      throw ParseError("unknown axiom '" + name +
                       "' (expected prop, ef, po, weak-po, ceei, sceei, or all)");
    }
  }

  bool all_pass = true;
  for (const AxiomReport& r : reports) all_pass = all_pass && r.pass;

  if (cmd.json) {
    nlohmann::json out;
    out["cake"] = cmd.cake_path;
    out["allocation"] = cmd.allocation_path;
    out["tolerance"] = tol;
    out["pass"] = all_pass;
    out["checks"] = nlohmann::json::array();
    for (const AxiomReport& r : reports)
      out["checks"].push_back(nlohmann::json::parse(serialize_axiom_report(r)));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const AxiomReport& r : reports) {
      std::cout << (r.pass ? "[ ok ] " : "[FAIL] ") << r.axiom;
      if (!r.pass && !r.detail.empty()) std::cout << ": " << r.detail;
      std::cout << "\n";
    }
  }
  return all_pass ? kExitOk : kExitChecksFailed;
}

struct MonotonicityCmd {
  std::string cake_path;
  RuleOptions rule;
  std::string enlarge_path;
  std::string remove_agent_name;
  std::optional<double> tol;
  bool json = false;
};

int run_monotonicity(const MonotonicityCmd& cmd) {
  const CakeFile file = load_cake(cmd.cake_path);
  const Rule rule = make_rule(cmd.rule);
  const double tol = resolve_tol(cmd.tol, 0);

  MonotonicityReport report = [&] {
    if (!cmd.remove_agent_name.empty()) {
      const size_t agent = [&] {
        try {
          return file.cake.agent_index(cmd.remove_agent_name);
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what());
        }
      }();
      return pm_experiment(file.cake, agent, rule, tol);
    }
    std::vector<Slice> extra;
    if (!cmd.enlarge_path.empty())
      extra = load_slices(cmd.enlarge_path, file.cake.num_agents());
    else if (file.enlargement)
      extra = *file.enlargement;
    else
      throw ParseError("no experiment: pass --enlarge/--remove, or put an "
                       "\"enlargement\" block in the cake file");
    return rm_experiment(file.cake, extra, rule, tol);
  }();

  if (cmd.json) {
    std::cout << serialize_monotonicity_report(report);
  } else {
    std::cout << report.experiment << " under " << report.rule << ": "
              << (report.pass ? "pass" : "FAIL") << "\n";
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < file.cake.num_agents(); ++i)
      rows.push_back({file.cake.agent_name(i), "before",
                      format_rational(report.before_absolute[i]), "after",
                      format_rational(report.after_absolute[i])});
    print_table(std::cout, rows);
    if (!report.detail.empty()) std::cout << report.detail << "\n";
  }
  return report.pass ? kExitOk : kExitChecksFailed;
}

struct FuzzCmd {
  RuleOptions rule;
  FuzzConfig config;
  std::string checks = "rm,pm";
  std::optional<double> tol;
  bool json = false;
};

int run_fuzz(const FuzzCmd& cmd) {
  const Rule rule = make_rule(cmd.rule);
  FuzzConfig config = cmd.config;
  config.tol = resolve_tol(cmd.tol, 0);
  config.check_rm = config.check_pm = config.check_prop = config.check_ef = false;
  for (const std::string& name : split_list(cmd.checks)) {
    if (name == "rm") config.check_rm = true;
    else if (name == "pm") config.check_pm = true;
    else if (name == "prop") config.check_prop = true;
    else if (name == "ef") config.check_ef = true;
    else throw ParseError("unknown check '" + name + "' (expected rm, pm, prop, ef)");
  }
  if (!config.check_rm && !config.check_pm && !config.check_prop && !config.check_ef)
    throw ParseError("--checks names no checks");

  const FuzzReport report = fuzz(rule, config);

  if (cmd.json) {
    std::cout << serialize_fuzz_report(report);
  } else {
    std::cout << report.trials << " trials under " << rule_name(rule) << ", checks:";
    for (const auto& [name, runs] : report.checks_run)
      std::cout << " " << name << "=" << runs;
    std::cout << "\n";
    if (report.clean()) {
      std::cout << "no violations\n";
    } else {
      std::cout << "violations:";
      for (const auto& [name, count] : report.failure_counts)
        std::cout << " " << name << "=" << count;
      std::cout << "\n";
      constexpr size_t kShow = 5;
      for (size_t k = 0; k < report.failures.size() && k < kShow; ++k) {
        const FuzzFailure& f = report.failures[k];
        std::cout << "\n[" << f.check << "] trial " << f.trial << ": " << f.detail << "\n"
                  << "cake:\n"
                  << serialize_cake(f.cake,
                                    f.extra.empty()
                                        ? std::nullopt
                                        : std::make_optional(f.extra));
      }
      if (report.failures.size() > kShow)
        std::cout << "\n(" << report.failures.size() - kShow << " more not shown)\n";
    }
  }
  return report.clean() ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairslice: exact division of piecewise-homogeneous cakes"};
  app.require_subcommand(1);

  SolveCmd solve_cmd;
  CLI::App* solve = app.add_subcommand("solve", "Divide a cake under a rule");
  solve->add_option("cake", solve_cmd.cake_path, "Cake file (JSON)")->required();
  add_rule_options(solve, &solve_cmd.rule);
  solve->add_option("--tol", solve_cmd.rule.tol, "Solver convergence tolerance (default 1e-9)");
  solve->add_flag("--json", solve_cmd.json, "Emit a machine-readable record");

  VerifyCmd verify_cmd;
  CLI::App* verify = app.add_subcommand("verify", "Check axioms of a given division");
  verify->add_option("cake", verify_cmd.cake_path, "Cake file (JSON)")->required();
  verify->add_option("allocation", verify_cmd.allocation_path,
                     "Allocation file (JSON with \"fractions\", optional \"prices\")")
      ->required();
  verify->add_option("--axioms", verify_cmd.axioms,
                     "Comma-separated: prop, ef, po, weak-po, ceei, sceei, all");
  verify->add_option("--tol", verify_cmd.tol, "Comparison slack (default 0 = exact)");
  verify->add_flag("--json", verify_cmd.json, "Emit a machine-readable report");

  MonotonicityCmd mono_cmd;
  CLI::App* mono = app.add_subcommand(
      "monotonicity", "Re-solve after enlarging the cake or removing an agent");
  mono->add_option("cake", mono_cmd.cake_path, "Cake file (JSON)")->required();
  add_rule_options(mono, &mono_cmd.rule);
  CLI::Option* opt_enlarge = mono->add_option(
      "--enlarge", mono_cmd.enlarge_path,
      "Slice-list file appended at the right end (default: the cake file's "
      "\"enlargement\" block)");
  mono->add_option("--remove", mono_cmd.remove_agent_name, "Name of the departing agent")
      ->excludes(opt_enlarge);
  mono->add_option("--tol", mono_cmd.tol,
                   "Allowed utility drop as a fraction of each agent's total value "
                   "(default 0 = exact)");
  mono->add_flag("--json", mono_cmd.json, "Emit a machine-readable report");

  FuzzCmd fuzz_cmd;
  CLI::App* fz = app.add_subcommand(
      "fuzz", "Search random cakes for monotonicity/fairness violations");
  add_rule_options(fz, &fuzz_cmd.rule);
  fz->add_option("--trials", fuzz_cmd.config.trials, "Number of random cakes (default 100)");
  fz->add_option("--seed", fuzz_cmd.config.seed, "Stream seed (default 1)");
  fz->add_option("--max-agents", fuzz_cmd.config.max_agents, "Agents drawn from 2..N (default 4)");
  fz->add_option("--max-slices", fuzz_cmd.config.max_slices, "Slices drawn from 1..N (default 6)");
  fz->add_option("--max-density", fuzz_cmd.config.max_density,
                 "Densities drawn from 0..N (default 9)");
  fz->add_option("--max-extra", fuzz_cmd.config.max_extra_slices,
                 "Enlargement slices drawn from 1..N (default 2)");
  fz->add_option("--checks", fuzz_cmd.checks,
                 "Comma-separated: rm, pm, prop, ef (default rm,pm)");
  fz->add_option("--tol", fuzz_cmd.tol, "Comparison slack (default 0 = exact)");
  fz->add_flag("--json", fuzz_cmd.json, "Emit a machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(solve_cmd);
    if (app.got_subcommand(verify)) return run_verify(verify_cmd);
    if (app.got_subcommand(mono)) return run_monotonicity(mono_cmd);
    return run_fuzz(fuzz_cmd);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}
