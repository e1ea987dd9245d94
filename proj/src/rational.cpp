#include "fairslice/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fairslice {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  const size_t slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) return std::nullopt;
    return Rational(text);
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  // Sign belongs to the numerator; a signed denominator is rejected as malformed.
  if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-' || den[0] == '+')
    return std::nullopt;
  if (mpz_class(den) == 0) return std::nullopt;
  Rational q(text);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  return Rational(x);
}

Rational sum(const std::vector<Rational>& xs) {
  Rational s = 0;
  for (const auto& x : xs) s += x;
  return s;
}

}  // namespace fairslice
