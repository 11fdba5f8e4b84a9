#pragma once

#include "lexvor/numeric.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <vector>

namespace lexvor {

/// Degeneration parameters t -> L_t in R_+^r.
/// power kind: L_{t,j} = c_j t^{a_j} with strictly decreasing exponents, so the
/// consecutive ratios L_{t,j}/L_{t,j+1} diverge. table kind: explicit rows.
class ParamSchedule {
 public:
  static ParamSchedule power(std::vector<double> exponents, std::vector<double> coeffs);
  static ParamSchedule table(std::vector<std::pair<double, VecD>> rows);

  int r() const { return r_; }
  bool is_power() const { return kind_ == Kind::Power; }

  VecD eval(double t) const;
  /// Exact value, available for power schedules with integer exponents and
  /// rational coefficients (the common (t,1)-style grids). Rational t only.
  std::optional<VecQ> eval_exact(const Rational& t) const;

  static ParamSchedule from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<double>& exponents() const { return exponents_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  enum class Kind { Power, Table };
  Kind kind_ = Kind::Power;
  int r_ = 0;
  std::vector<double> exponents_, coeffs_;
  std::vector<std::optional<Rational>> exact_coeffs_;
  std::vector<std::pair<double, VecD>> rows_;
};

/// Default diagnostic grid: 8 log-spaced points per decade over [10, 10^6].
std::vector<double> default_t_grid();

}  // namespace lexvor
