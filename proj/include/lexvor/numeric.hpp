#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexvor {

using Rational = boost::multiprecision::mpq_rational;
using Integer  = boost::multiprecision::mpz_int;

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatD = Mat<double>;
using VecD = Vec<double>;
using MatQ = Mat<Rational>;
using VecQ = Vec<Rational>;
using VecZ = Vec<Integer>;
using MatZ = Mat<Integer>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

inline MatD to_double(const MatQ& A) {
  MatD B(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) B(i, j) = to_double(A(i, j));
  return B;
}
inline VecD to_double(const VecQ& v) {
  VecD w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = to_double(v(i));
  return w;
}

/// Parse "p/q", "p", or a decimal string into an exact rational.
Rational parse_rational(const std::string& s);
std::string rational_to_string(const Rational& x);

/// Best rational approximation of x with denominator <= max_den (continued fractions).
/// Returns nothing when |x - p/q| > tol for every admissible p/q.
std::optional<Rational> rationalize(double x, std::uint64_t max_den, double tol);

// Lexicographic comparison on value vectors (Lambda = R^r).
// Exact entries compare exactly; the double overload treats |a_i - b_i| <= tau_tie
// as a tie at coordinate i and can therefore report an ambiguous outcome.
enum class LexOrder { Less, Equal, Greater, Ambiguous };

LexOrder lex_compare(const VecQ& a, const VecQ& b);
LexOrder lex_compare(const VecD& a, const VecD& b, double tau_tie);

inline bool lex_less(const VecQ& a, const VecQ& b) { return lex_compare(a, b) == LexOrder::Less; }
inline bool lex_leq(const VecQ& a, const VecQ& b) {
  auto c = lex_compare(a, b);
  return c == LexOrder::Less || c == LexOrder::Equal;
}

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Float-mode tie that cannot be resolved without exact arithmetic.
struct TieAmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : NumericError {
  using NumericError::NumericError;
};

/// Enumeration budget override (env LEXVOR_BUDGET), default per-site values otherwise.
std::size_t enumeration_budget(std::size_t default_value);

}  // namespace lexvor
