#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace fairslice {

/// Exact rational number. All cake data, LP arithmetic and reported utilities
/// use this type; floating point is confined to the iterative solvers.
using Rational = mpq_class;

/// Parse "a" or "a/b" (optional leading '-', b > 0 after canonicalization).
/// Returns std::nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

/// Serialize canonically: "a" when the denominator is 1, else "a/b".
std::string format_rational(const Rational& q);

/// Exact conversion of a finite double (doubles are dyadic rationals).
Rational rational_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Sum of a rational vector.
Rational sum(const std::vector<Rational>& xs);

}  // namespace fairslice
