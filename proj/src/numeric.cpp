#include "lexvor/numeric.hpp"

#include <cstdlib>
#include <sstream>

namespace lexvor {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw ValidationError("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in rational literal: " + s);
    return Rational(num, den);
  }
  auto dot = s.find('.');
  auto exp = s.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) return Rational(Integer(s));
  // Decimal literal: mantissa digits over a power of ten, then scale by 10^exponent.
  std::string mant = exp == std::string::npos ? s : s.substr(0, exp);
  long e10 = exp == std::string::npos ? 0 : std::stol(s.substr(exp + 1));
  std::string digits;
  long frac_digits = 0;
  bool neg = false;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    char c = mant[i];
    if (c == '-' && i == 0) { neg = true; continue; }
    if (c == '+' && i == 0) continue;
    if (c == '.') { frac_digits = static_cast<long>(mant.size() - i - 1); continue; }
    if (c < '0' || c > '9') throw ValidationError("bad rational literal: " + s);
    digits += c;
  }
  if (digits.empty()) throw ValidationError("bad rational literal: " + s);
  Rational r{Integer(digits)};
  long shift = e10 - frac_digits;
  Integer ten(10);
  if (shift > 0) r *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(shift)));
  if (shift < 0) r /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-shift)));
  return neg ? -r : r;
}

std::string rational_to_string(const Rational& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::optional<Rational> rationalize(double x, std::uint64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  double v = x;
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    if (fl > 9e18 || fl < -9e18) break;
    Integer a = static_cast<long long>(fl);
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > Integer(max_den)) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = v - fl;
    if (rem < 1e-15 * std::max(1.0, std::abs(x))) break;
    v = 1.0 / rem;
  }
  if (q1 == 0) return std::nullopt;
  Rational cand(p1, q1);
  double err = std::abs(to_double(cand) - x);
  if (err <= tol * std::max(1.0, std::abs(x))) return cand;
  return std::nullopt;
}

LexOrder lex_compare(const VecQ& a, const VecQ& b) {
  if (a.size() != b.size()) throw ValidationError("lex_compare: size mismatch");
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return LexOrder::Less;
    if (a(i) > b(i)) return LexOrder::Greater;
  }
  return LexOrder::Equal;
}

LexOrder lex_compare(const VecD& a, const VecD& b, double tau_tie) {
  if (a.size() != b.size()) throw ValidationError("lex_compare: size mismatch");
  bool saw_near_tie = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = a(i) - b(i);
    if (std::abs(d) <= tau_tie) {
      // Treated as equal at this coordinate; remember that the call was not clean.
      if (d != 0.0) saw_near_tie = true;
      continue;
    }
    return d < 0 ? LexOrder::Less : LexOrder::Greater;
  }
  return saw_near_tie ? LexOrder::Ambiguous : LexOrder::Equal;
}

std::size_t enumeration_budget(std::size_t default_value) {
  if (const char* env = std::getenv("LEXVOR_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return default_value;
}

}  // namespace lexvor
