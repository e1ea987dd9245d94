#include "fairslice/cake_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fairslice {

using nlohmann::json;

namespace {

// Rationals travel as strings "a" / "a/b"; plain JSON integers are accepted
// as a convenience. Floats are rejected rather than silently rounded.
Rational rational_field(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (auto r = parse_rational(v.get<std::string>())) return *r;
    throw ParseError(where + ": '" + v.get<std::string>() +
                     "' is not a rational (expected \"a\" or \"a/b\")");
  }
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  if (v.is_number())
    throw ParseError(where + ": floats are ambiguous here; write the value as \"a/b\"");
  throw ParseError(where + ": expected a rational like \"2/3\"");
}

Slice slice_from_json(const json& v, size_t num_agents, const std::string& where) {
  if (!v.is_object()) throw ParseError(where + ": each slice must be an object");
  if (!v.contains("length")) throw ParseError(where + ": missing \"length\"");
  if (!v.contains("densities") || !v["densities"].is_array())
    throw ParseError(where + ": missing \"densities\" array");
  Slice s;
  s.length = rational_field(v["length"], where + ".length");
  const json& ds = v["densities"];
  if (ds.size() != num_agents)
    throw ParseError(where + ": " + std::to_string(ds.size()) + " densities for " +
                     std::to_string(num_agents) + " agents");
  s.densities.reserve(num_agents);
  for (size_t i = 0; i < ds.size(); ++i)
    s.densities.push_back(
        rational_field(ds[i], where + ".densities[" + std::to_string(i) + "]"));
  return s;
}

std::vector<Slice> slices_from_json(const json& v, size_t num_agents,
                                    const std::string& where) {
  if (!v.is_array() || v.empty())
    throw ParseError(where + ": expected a non-empty array of slices");
  std::vector<Slice> slices;
  slices.reserve(v.size());
  for (size_t j = 0; j < v.size(); ++j)
    slices.push_back(
        slice_from_json(v[j], num_agents, where + "[" + std::to_string(j) + "]"));
  return slices;
}

json rationals_to_json(const std::vector<Rational>& xs) {
  json arr = json::array();
  for (const Rational& x : xs) arr.push_back(format_rational(x));
  return arr;
}

json slices_to_json(const std::vector<Slice>& slices) {
  json arr = json::array();
  for (const Slice& s : slices) {
    json v;
    v["length"] = format_rational(s.length);
    v["densities"] = rationals_to_json(s.densities);
    arr.push_back(std::move(v));
  }
  return arr;
}

json cake_to_json(const Cake& cake, const std::optional<std::vector<Slice>>& enlargement) {
  json v;
  v["agents"] = cake.agents();
  v["slices"] = slices_to_json(cake.slices());
  if (enlargement) v["enlargement"] = slices_to_json(*enlargement);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CakeFile parse_cake(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("top level must be an object");
  if (!root.contains("agents") || !root["agents"].is_array())
    throw ParseError("missing \"agents\" array");
  std::vector<std::string> agents;
  for (const json& a : root["agents"]) {
    if (!a.is_string() || a.get<std::string>().empty())
      throw ParseError("agent names must be non-empty strings");
    agents.push_back(a.get<std::string>());
  }
  if (!root.contains("slices")) throw ParseError("missing \"slices\" array");
  std::vector<Slice> slices = slices_from_json(root["slices"], agents.size(), "slices");

  std::optional<std::vector<Slice>> enlargement;
  if (root.contains("enlargement"))
    enlargement = slices_from_json(root["enlargement"], agents.size(), "enlargement");

  try {
    return CakeFile{Cake(std::move(agents), std::move(slices)), std::move(enlargement)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

CakeFile load_cake(const std::string& path) {
  try {
    return parse_cake(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_cake(const Cake& cake,
                           const std::optional<std::vector<Slice>>& enlargement) {
  return cake_to_json(cake, enlargement).dump(2) + "\n";
}

std::vector<Slice> parse_slices(const std::string& json_text, size_t num_agents) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (root.is_array()) return slices_from_json(root, num_agents, "slices");
  if (root.is_object()) {
    if (root.contains("enlargement"))
      return slices_from_json(root["enlargement"], num_agents, "enlargement");
    if (root.contains("slices"))
      return slices_from_json(root["slices"], num_agents, "slices");
  }
  throw ParseError("expected a slice array, or an object with \"slices\" or \"enlargement\"");
}

std::vector<Slice> load_slices(const std::string& path, size_t num_agents) {
  try {
    return parse_slices(read_file(path), num_agents);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

AllocationFile parse_allocation(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("fractions") || !root["fractions"].is_array())
    throw ParseError("expected an object with a \"fractions\" array");
  AllocationFile out;
  const json& rows = root["fractions"];
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ParseError("\"fractions\" rows must be arrays");
    std::vector<Rational> row;
    for (size_t j = 0; j < rows[i].size(); ++j)
      row.push_back(rational_field(
          rows[i][j], "fractions[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    out.fractions.push_back(std::move(row));
  }
  if (root.contains("prices")) {
    if (!root["prices"].is_array()) throw ParseError("\"prices\" must be an array");
    std::vector<Rational> prices;
    for (size_t j = 0; j < root["prices"].size(); ++j)
      prices.push_back(rational_field(root["prices"][j], "prices[" + std::to_string(j) + "]"));
    out.prices = std::move(prices);
  }
  return out;
}

AllocationFile load_allocation(const std::string& path) {
  try {
    return parse_allocation(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_solve_record(const Cake& cake, const Rule& rule,
                                   const SolveResult& result) {
  json v;
  v["rule"] = rule_name(rule);
  if (rule.kind == RuleKind::PowerAbsolute || rule.kind == RuleKind::PowerRelative)
    v["p"] = rule.p;
  v["agents"] = cake.agents();
  json rows = json::array();
  for (const auto& row : result.allocation.fractions()) rows.push_back(rationals_to_json(row));
  v["fractions"] = std::move(rows);
  v["utilities"]["absolute"] = rationals_to_json(result.utility.absolute);
  v["utilities"]["relative"] = rationals_to_json(result.utility.relative);
  if (result.prices) {
    v["prices"] = rationals_to_json(result.prices->density);
    if (result.prices->sub_density) {
      json sub = json::array();
      for (const auto& row : *result.prices->sub_density) sub.push_back(rationals_to_json(row));
      v["sub_prices"] = std::move(sub);
    }
  }
  v["diagnostics"] = {{"iterations", result.diagnostics.iterations},
                      {"residual", result.diagnostics.residual},
                      {"exact", result.diagnostics.exact},
                      {"notes", result.diagnostics.notes}};
  return v.dump(2) + "\n";
}

std::string serialize_axiom_report(const AxiomReport& report) {
  json v;
  v["axiom"] = report.axiom;
  v["pass"] = report.pass;
  v["tolerance"] = report.tolerance;
  v["detail"] = report.detail;
  if (report.witness_agent) v["witness_agent"] = *report.witness_agent;
  if (report.witness_pair)
    v["witness_pair"] = {report.witness_pair->first, report.witness_pair->second};
  if (report.witness_fractions) {
    json rows = json::array();
    for (const auto& row : *report.witness_fractions) rows.push_back(rationals_to_json(row));
    v["witness_fractions"] = std::move(rows);
  }
  if (report.witness_gains) v["witness_gains"] = rationals_to_json(*report.witness_gains);
  return v.dump(2) + "\n";
}

std::string serialize_monotonicity_report(const MonotonicityReport& report) {
  json v;
  v["experiment"] = report.experiment;
  v["rule"] = report.rule;
  v["pass"] = report.pass;
  v["tolerance"] = report.tolerance;
  v["before_absolute"] = rationals_to_json(report.before_absolute);
  v["after_absolute"] = rationals_to_json(report.after_absolute);
  v["losers"] = report.losers;
  if (report.removed_agent) v["removed_agent"] = *report.removed_agent;
  if (!report.dropped_slices.empty()) v["dropped_slices"] = report.dropped_slices;
  v["detail"] = report.detail;
  return v.dump(2) + "\n";
}

std::string serialize_fuzz_report(const FuzzReport& report) {
  constexpr size_t kMaxFailuresShown = 20;
  json v;
  v["trials"] = report.trials;
  v["checks_run"] = report.checks_run;
  v["failure_counts"] = report.failure_counts;
  v["clean"] = report.clean();
  json fails = json::array();
  for (size_t k = 0; k < report.failures.size() && k < kMaxFailuresShown; ++k) {
    const FuzzFailure& f = report.failures[k];
    json g;
    g["trial"] = f.trial;
    g["check"] = f.check;
    g["detail"] = f.detail;
    g["cake"] = cake_to_json(f.cake, std::nullopt);
    if (!f.extra.empty()) g["enlargement"] = slices_to_json(f.extra);
    if (f.removed_agent) g["removed_agent"] = *f.removed_agent;
    fails.push_back(std::move(g));
  }
  v["failures"] = std::move(fails);
  if (report.failures.size() > kMaxFailuresShown)
    v["failures_omitted"] = report.failures.size() - kMaxFailuresShown;
  return v.dump(2) + "\n";
}

}  // namespace fairslice
