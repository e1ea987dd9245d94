#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairslice/axioms.hpp"
#include "fairslice/cake.hpp"
#include "fairslice/ceei.hpp"
#include "fairslice/monotonicity.hpp"
#include "fairslice/welfare.hpp"

namespace fairslice {

/// Malformed input: unreadable file, bad JSON, bad rationals, or data that
/// violates the cake/allocation invariants.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk cake description. JSON object with:
///   "agents":      ["name", ...]
///   "slices":      [{"length": "a/b", "densities": ["a/b", ...]}, ...]
///   "enlargement": optional extra slices in the same shape
/// Rationals are strings "a" or "a/b" (plain JSON integers also accepted).
struct CakeFile {
  Cake cake;
  std::optional<std::vector<Slice>> enlargement;
};

CakeFile parse_cake(const std::string& json_text);
CakeFile load_cake(const std::string& path);
std::string serialize_cake(const Cake& cake,
                           const std::optional<std::vector<Slice>>& enlargement = std::nullopt);

/// Parse a bare slice list (for enlargements): either a JSON array of slice
/// objects or an object wrapping one under "slices" / "enlargement".
std::vector<Slice> parse_slices(const std::string& json_text, size_t num_agents);
std::vector<Slice> load_slices(const std::string& path, size_t num_agents);

/// On-disk allocation (+ optional prices), e.g. a solve record to verify:
///   "fractions": [[...row per agent...], ...]
///   "prices":    optional per-slice price densities
struct AllocationFile {
  std::vector<std::vector<Rational>> fractions;
  std::optional<std::vector<Rational>> prices;
};

AllocationFile parse_allocation(const std::string& json_text);
AllocationFile load_allocation(const std::string& path);

/// Machine-readable solve record: rule, fractions, both utility gauges,
/// prices when present, diagnostics. Verifiable by parse_allocation.
std::string serialize_solve_record(const Cake& cake, const Rule& rule,
                                   const SolveResult& result);

std::string serialize_axiom_report(const AxiomReport& report);
std::string serialize_monotonicity_report(const MonotonicityReport& report);
std::string serialize_fuzz_report(const FuzzReport& report);

}  // namespace fairslice
