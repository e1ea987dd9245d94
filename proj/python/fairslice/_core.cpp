// Python bindings: cakes, divisions, rules, axiom checks, equilibrium
// verification, and monotonicity experiments. Rationals cross the boundary
// as fractions.Fraction, so no precision is lost in either direction.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fairslice/cake_io.hpp"
#include "fairslice/ceei.hpp"
#include "fairslice/monotonicity.hpp"

namespace py = pybind11;
using namespace fairslice;

namespace pybind11 {
namespace detail {

// mpq_class <-> fractions.Fraction (ints accepted on the way in).
template <>
struct type_caster<mpq_class> {
 public:
  PYBIND11_TYPE_CASTER(mpq_class, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    object num, den;
    if (py::isinstance<py::int_>(src)) {
      num = py::reinterpret_borrow<object>(src);
      den = py::int_(1);
    } else if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator")) {
      num = src.attr("numerator");
      den = src.attr("denominator");
      if (!py::isinstance<py::int_>(num) || !py::isinstance<py::int_>(den)) return false;
    } else {
      return false;  // floats are ambiguous: pass Fraction or int
    }
    const std::string text =
        py::cast<std::string>(py::str(num)) + "/" + py::cast<std::string>(py::str(den));
    try {
      value = mpq_class(text);
    } catch (const std::invalid_argument&) {
      return false;
    }
    if (value.get_den() == 0) return false;
    value.canonicalize();
    return true;
  }

  static handle cast(const mpq_class& src, return_value_policy, handle) {
    object fraction = module_::import("fractions").attr("Fraction");
    return fraction(py::str(format_rational(src))).release();
  }
};

}  // namespace detail
}  // namespace pybind11

namespace {

Rule make_rule(const std::string& kind, double p, double tol) {
  auto parsed = parse_rule_kind(kind);
  if (!parsed) throw std::invalid_argument("unknown rule '" + kind + "'");
  Rule rule;
  rule.kind = *parsed;
  rule.p = p;
  rule.tol = tol;
  return rule;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact division of piecewise-homogeneous cakes";
  m.attr("__version__") = "0.1.0";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // --- model -----------------------------------------------------------------
  py::class_<Slice>(m, "Slice")
      .def(py::init([](Rational length, std::vector<Rational> densities) {
             return Slice{std::move(length), std::move(densities)};
           }),
           py::arg("length"), py::arg("densities"))
      .def_readwrite("length", &Slice::length)
      .def_readwrite("densities", &Slice::densities)
      .def("__repr__", [](const Slice& s) {
        std::string out = "Slice(length=" + format_rational(s.length) + ", densities=[";
        for (size_t i = 0; i < s.densities.size(); ++i)
          out += (i ? ", " : "") + format_rational(s.densities[i]);
        return out + "])";
      });

  py::class_<Cake>(m, "Cake")
      .def(py::init<std::vector<std::string>, std::vector<Slice>>(), py::arg("agents"),
           py::arg("slices"))
      .def_property_readonly("num_agents", &Cake::num_agents)
      .def_property_readonly("num_slices", &Cake::num_slices)
      .def_property_readonly("agents", &Cake::agents)
      .def_property_readonly("slices", &Cake::slices)
      .def("slice", &Cake::slice, py::arg("j"))
      .def("slice_value", &Cake::slice_value, py::arg("agent"), py::arg("j"))
      .def("total_value", &Cake::total_value, py::arg("agent"))
      .def("agent_index", &Cake::agent_index, py::arg("name"))
      .def("__repr__", [](const Cake& c) {
        return "Cake(" + std::to_string(c.num_agents()) + " agents, " +
               std::to_string(c.num_slices()) + " slices)";
      });

  py::class_<Allocation>(m, "Allocation")
      .def(py::init<const Cake&, std::vector<std::vector<Rational>>>(), py::arg("cake"),
           py::arg("fractions"))
      .def_property_readonly("fractions", &Allocation::fractions)
      .def("fraction", &Allocation::fraction, py::arg("agent"), py::arg("j"))
      .def_static("whole_cake_to", &Allocation::whole_cake_to, py::arg("cake"),
                  py::arg("agent"));

  py::class_<UtilityVector>(m, "UtilityVector")
      .def_readonly("absolute", &UtilityVector::absolute)
      .def_readonly("relative", &UtilityVector::relative);

  m.def("absolute_utility", &absolute_utility, py::arg("cake"), py::arg("allocation"),
        py::arg("agent"));
  m.def("relative_utility", &relative_utility, py::arg("cake"), py::arg("allocation"),
        py::arg("agent"));
  m.def("utilities", &utilities, py::arg("cake"), py::arg("allocation"));
  m.def("value_of_piece", &value_of_piece, py::arg("cake"), py::arg("allocation"),
        py::arg("observer"), py::arg("holder"));
  m.def("enlarge", &enlarge, py::arg("cake"), py::arg("extra"),
        "Append extra slices at the right end of the cake.");

  py::class_<ReducedCake>(m, "ReducedCake")
      .def_readonly("cake", &ReducedCake::cake)
      .def_readonly("kept_slices", &ReducedCake::kept_slices)
      .def_readonly("dropped_slices", &ReducedCake::dropped_slices);
  m.def("remove_agent", &remove_agent, py::arg("cake"), py::arg("agent"),
        "Remove one agent and prune slices worthless to everyone remaining.");

  // --- rules and solvers --------------------------------------------------------
  py::class_<Rule>(m, "Rule")
      .def(py::init(&make_rule), py::arg("kind"), py::arg("p") = 0.0,
           py::arg("tol") = 1e-9)
      .def_property_readonly("kind", [](const Rule& r) { return rule_name(r); })
      .def_readonly("p", &Rule::p)
      .def_readonly("tol", &Rule::tol)
      .def("__repr__", [](const Rule& r) { return "Rule('" + rule_name(r) + "')"; });

  py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
      .def_readonly("iterations", &SolveDiagnostics::iterations)
      .def_readonly("residual", &SolveDiagnostics::residual)
      .def_readonly("exact", &SolveDiagnostics::exact)
      .def_readonly("notes", &SolveDiagnostics::notes);

  py::class_<PriceVector>(m, "PriceVector")
      .def(py::init([](std::vector<Rational> density) {
             PriceVector pv;
             pv.density = std::move(density);
             return pv;
           }),
           py::arg("density"))
      .def_readonly("density", &PriceVector::density)
      .def_readonly("sub_density", &PriceVector::sub_density)
      .def("slice_price", &PriceVector::slice_price, py::arg("cake"), py::arg("j"))
      .def("total", &PriceVector::total, py::arg("cake"));

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("allocation", &SolveResult::allocation)
      .def_readonly("utility", &SolveResult::utility)
      .def_readonly("prices", &SolveResult::prices)
      .def_readonly("diagnostics", &SolveResult::diagnostics);

  m.def(
      "solve",
      [](const Cake& cake, const std::string& rule, double p, double tol) {
        return solve_rule(cake, make_rule(rule, p, tol));
      },
      py::arg("cake"), py::arg("rule"), py::arg("p") = 0.0, py::arg("tol") = 1e-9,
      "Divide a cake: nash, leximin-abs, leximin-rel, util-abs, util-rel, wp-abs, "
      "wp-rel, or cut-and-choose.");
  m.def("solve_nash", &solve_nash, py::arg("cake"), py::arg("tol") = 1e-9);
  m.def("solve_leximin_absolute", &solve_leximin_absolute, py::arg("cake"));
  m.def("solve_leximin_relative", &solve_leximin_relative, py::arg("cake"));
  m.def("solve_utilitarian_absolute", &solve_utilitarian_absolute, py::arg("cake"));
  m.def("solve_utilitarian_relative", &solve_utilitarian_relative, py::arg("cake"));
  m.def("solve_wp_absolute", &solve_wp_absolute, py::arg("cake"), py::arg("p"),
        py::arg("tol") = 1e-9);
  m.def("solve_wp_relative", &solve_wp_relative, py::arg("cake"), py::arg("p"),
        py::arg("tol") = 1e-9);
  m.def("cut_and_choose", &cut_and_choose, py::arg("cake"));
  m.def("nash_product", &nash_product, py::arg("utility"),
        "Product of relative utilities.");
  m.def("nash_brute_oracle", &nash_brute_oracle, py::arg("cake"), py::arg("grid"),
        "Best product of relative utilities over a discrete grid of divisions.");

  // --- axioms ----------------------------------------------------------------------
  py::class_<AxiomReport>(m, "AxiomReport")
      .def_readonly("axiom", &AxiomReport::axiom)
      .def_readonly("pass_", &AxiomReport::pass)
      .def_property_readonly("ok", [](const AxiomReport& r) { return r.pass; })
      .def_readonly("tolerance", &AxiomReport::tolerance)
      .def_readonly("detail", &AxiomReport::detail)
      .def_readonly("witness_agent", &AxiomReport::witness_agent)
      .def_readonly("witness_pair", &AxiomReport::witness_pair)
      .def_readonly("witness_fractions", &AxiomReport::witness_fractions)
      .def_readonly("witness_gains", &AxiomReport::witness_gains)
      .def("__bool__", [](const AxiomReport& r) { return r.pass; })
      .def("__repr__", [](const AxiomReport& r) {
        return "AxiomReport(" + r.axiom + (r.pass ? ": pass)" : ": FAIL)");
      });

  m.def("check_proportional", &check_proportional, py::arg("cake"), py::arg("allocation"),
        py::arg("tol") = 0.0);
  m.def("check_envy_free", &check_envy_free, py::arg("cake"), py::arg("allocation"),
        py::arg("tol") = 0.0);
  m.def("check_pareto_optimal", &check_pareto_optimal, py::arg("cake"),
        py::arg("allocation"), py::arg("tol") = 0.0);
  m.def("check_weak_pareto_optimal", &check_weak_pareto_optimal, py::arg("cake"),
        py::arg("allocation"), py::arg("tol") = 0.0);
  m.def("check_esv_probe", &check_esv_probe, py::arg("cake"), py::arg("rule"),
        py::arg("trials") = 10, py::arg("seed") = 1, py::arg("tol") = 0.0,
        "Re-solve under seeded agent/slice permutations; require identical utilities.");

  // --- equilibria ------------------------------------------------------------------
  m.def("standard_price_measure", &standard_price_measure, py::arg("cake"),
        py::arg("allocation"));
  m.def("verify_ceei", &verify_ceei, py::arg("cake"), py::arg("allocation"),
        py::arg("prices"), py::arg("tol") = 0.0);
  m.def("verify_sceei", &verify_sceei, py::arg("cake"), py::arg("allocation"),
        py::arg("prices"), py::arg("tol") = 0.0);
  m.def("nash_sceei_equivalence_check", &nash_sceei_equivalence_check, py::arg("cake"),
        py::arg("tol") = 1e-6);

  // --- monotonicity -------------------------------------------------------------
  py::class_<MonotonicityReport>(m, "MonotonicityReport")
      .def_readonly("experiment", &MonotonicityReport::experiment)
      .def_readonly("rule", &MonotonicityReport::rule)
      .def_readonly("pass_", &MonotonicityReport::pass)
      .def_property_readonly("ok", [](const MonotonicityReport& r) { return r.pass; })
      .def_readonly("tolerance", &MonotonicityReport::tolerance)
      .def_readonly("before_absolute", &MonotonicityReport::before_absolute)
      .def_readonly("after_absolute", &MonotonicityReport::after_absolute)
      .def_readonly("losers", &MonotonicityReport::losers)
      .def_readonly("removed_agent", &MonotonicityReport::removed_agent)
      .def_readonly("dropped_slices", &MonotonicityReport::dropped_slices)
      .def_readonly("detail", &MonotonicityReport::detail)
      .def("__bool__", [](const MonotonicityReport& r) { return r.pass; })
      .def("__repr__", [](const MonotonicityReport& r) {
        return "MonotonicityReport(" + r.experiment + (r.pass ? ": pass)" : ": FAIL)");
      });

  m.def("rm_experiment", &rm_experiment, py::arg("cake"), py::arg("extra"), py::arg("rule"),
        py::arg("tol") = 0.0,
        "Enlarge the cake and require no agent's absolute utility to drop.");
  m.def("pm_experiment", &pm_experiment, py::arg("cake"), py::arg("leaving_agent"),
        py::arg("rule"), py::arg("tol") = 0.0,
        "Remove an agent and require no survivor's absolute utility to drop.");

  py::class_<FuzzConfig>(m, "FuzzConfig")
      .def(py::init<>())
      .def_readwrite("seed", &FuzzConfig::seed)
      .def_readwrite("trials", &FuzzConfig::trials)
      .def_readwrite("max_agents", &FuzzConfig::max_agents)
      .def_readwrite("max_slices", &FuzzConfig::max_slices)
      .def_readwrite("max_density", &FuzzConfig::max_density)
      .def_readwrite("max_extra_slices", &FuzzConfig::max_extra_slices)
      .def_readwrite("tol", &FuzzConfig::tol)
      .def_readwrite("check_rm", &FuzzConfig::check_rm)
      .def_readwrite("check_pm", &FuzzConfig::check_pm)
      .def_readwrite("check_prop", &FuzzConfig::check_prop)
      .def_readwrite("check_ef", &FuzzConfig::check_ef);

  py::class_<FuzzFailure>(m, "FuzzFailure")
      .def_readonly("trial", &FuzzFailure::trial)
      .def_readonly("check", &FuzzFailure::check)
      .def_readonly("detail", &FuzzFailure::detail)
      .def_readonly("cake", &FuzzFailure::cake)
      .def_readonly("extra", &FuzzFailure::extra)
      .def_readonly("removed_agent", &FuzzFailure::removed_agent);

  py::class_<FuzzReport>(m, "FuzzReport")
      .def_readonly("trials", &FuzzReport::trials)
      .def_readonly("checks_run", &FuzzReport::checks_run)
      .def_readonly("failure_counts", &FuzzReport::failure_counts)
      .def_readonly("failures", &FuzzReport::failures)
      .def("clean", &FuzzReport::clean);

  m.def("fuzz", &fuzz, py::arg("rule"), py::arg("config") = FuzzConfig{},
        "Seeded random search for monotonicity/fairness violations.");

  // --- files -----------------------------------------------------------------------
  py::class_<CakeFile>(m, "CakeFile")
      .def_readonly("cake", &CakeFile::cake)
      .def_readonly("enlargement", &CakeFile::enlargement);

  py::class_<AllocationFile>(m, "AllocationFile")
      .def_readonly("fractions", &AllocationFile::fractions)
      .def_readonly("prices", &AllocationFile::prices);

  m.def("parse_cake", &parse_cake, py::arg("json_text"));
  m.def("load_cake", &load_cake, py::arg("path"));
  m.def("serialize_cake", &serialize_cake, py::arg("cake"),
        py::arg("enlargement") = std::nullopt);
  m.def("parse_slices", &parse_slices, py::arg("json_text"), py::arg("num_agents"));
  m.def("load_slices", &load_slices, py::arg("path"), py::arg("num_agents"));
  m.def("parse_allocation", &parse_allocation, py::arg("json_text"));
  m.def("load_allocation", &load_allocation, py::arg("path"));
  m.def("serialize_solve_record", &serialize_solve_record, py::arg("cake"), py::arg("rule"),
        py::arg("result"));
  m.def("serialize_axiom_report", &serialize_axiom_report, py::arg("report"));
  m.def("serialize_monotonicity_report", &serialize_monotonicity_report, py::arg("report"));
  m.def("serialize_fuzz_report", &serialize_fuzz_report, py::arg("report"));
}
