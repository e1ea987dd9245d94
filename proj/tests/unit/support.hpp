// Small constructors shared by the unit tests.
#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "fairslice/cake.hpp"

namespace testsupport {

inline fairslice::Rational Q(const std::string& text) {
  auto r = fairslice::parse_rational(text);
  REQUIRE_MESSAGE(r.has_value(), "bad rational literal: " << text);
  return *r;
}

inline fairslice::Rational Q(long num, long den = 1) {
  fairslice::Rational r(num, den);
  r.canonicalize();
  return r;
}

inline fairslice::Slice sl(const std::string& length,
                           const std::vector<std::string>& densities) {
  fairslice::Slice s;
  s.length = Q(length);
  for (const auto& d : densities) s.densities.push_back(Q(d));
  return s;
}

inline std::vector<std::string> names(size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back("a" + std::to_string(i + 1));
  return out;
}

// Cake from unit-length slices given as density rows (one row per slice).
inline fairslice::Cake grid_cake(const std::vector<std::vector<std::string>>& slice_rows) {
  std::vector<fairslice::Slice> slices;
  for (const auto& row : slice_rows) slices.push_back(sl("1", row));
  return fairslice::Cake(names(slice_rows.empty() ? 0 : slice_rows[0].size()),
                         std::move(slices));
}

}  // namespace testsupport
