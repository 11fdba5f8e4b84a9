#include "lexvor/schedule.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace lexvor {

ParamSchedule ParamSchedule::power(std::vector<double> exponents, std::vector<double> coeffs) {
  ParamSchedule s;
  s.kind_ = Kind::Power;
  s.r_ = static_cast<int>(exponents.size());
  if (s.r_ < 1 || coeffs.size() != exponents.size())
    throw ValidationError("schedule: need matching exponents and coeffs, r >= 1");
  for (int j = 0; j + 1 < s.r_; ++j)
    if (!(exponents[j] > exponents[j + 1]))
      throw ValidationError("schedule: exponents must be strictly decreasing");
  for (double c : coeffs)
    if (!(c > 0)) throw ValidationError("schedule: coefficients must be positive");
  s.exponents_ = std::move(exponents);
  s.coeffs_ = std::move(coeffs);
  for (double c : s.coeffs_) s.exact_coeffs_.push_back(rationalize(c, 1000000, 1e-12));
  return s;
}

ParamSchedule ParamSchedule::table(std::vector<std::pair<double, VecD>> rows) {
  ParamSchedule s;
  s.kind_ = Kind::Table;
  if (rows.empty()) throw ValidationError("schedule: empty table");
  s.r_ = static_cast<int>(rows[0].second.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (auto& [t, L] : rows) {
    if (static_cast<int>(L.size()) != s.r_) throw ValidationError("schedule: ragged table row");
    if (!(t > prev)) throw ValidationError("schedule: table rows must have increasing t");
    prev = t;
    for (int j = 0; j < s.r_; ++j)
      if (!(L(j) > 0)) throw ValidationError("schedule: parameters must be positive");
  }
  s.rows_ = std::move(rows);
  return s;
}

VecD ParamSchedule::eval(double t) const {
  if (kind_ == Kind::Power) {
    VecD L(r_);
    for (int j = 0; j < r_; ++j) L(j) = coeffs_[j] * std::pow(t, exponents_[j]);
    return L;
  }
  for (const auto& [tt, L] : rows_)
    if (tt == t) return L;
  throw ValidationError("schedule: t not present in table");
}

std::optional<VecQ> ParamSchedule::eval_exact(const Rational& t) const {
  if (kind_ != Kind::Power) return std::nullopt;
  VecQ L(r_);
  for (int j = 0; j < r_; ++j) {
    double e = exponents_[j];
    if (e != std::floor(e) || std::abs(e) > 64) return std::nullopt;
    if (!exact_coeffs_[j]) return std::nullopt;
    long k = static_cast<long>(e);
    Rational p = 1;
    Rational base = k >= 0 ? t : Rational(1) / t;
    for (long i = 0; i < std::abs(k); ++i) p *= base;
    L(j) = *exact_coeffs_[j] * p;
  }
  return L;
}

ParamSchedule ParamSchedule::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    return power(j.at("exponents").get<std::vector<double>>(),
                 j.at("coeffs").get<std::vector<double>>());
  }
  if (kind == "table") {
    std::vector<std::pair<double, VecD>> rows;
    for (const auto& row : j.at("rows")) {
      if (row.size() < 2) throw ValidationError("schedule: table row needs t and parameters");
      VecD L(static_cast<int>(row.size()) - 1);
      for (int k = 1; k < static_cast<int>(row.size()); ++k) L(k - 1) = row[k].get<double>();
      rows.emplace_back(row[0].get<double>(), std::move(L));
    }
    return table(std::move(rows));
  }
  throw ValidationError("schedule: unknown kind " + kind);
}

nlohmann::json ParamSchedule::to_json() const {
  nlohmann::json j;
  if (kind_ == Kind::Power) {
    j["kind"] = "power";
    j["exponents"] = exponents_;
    j["coeffs"] = coeffs_;
  } else {
    j["kind"] = "table";
    auto rows = nlohmann::json::array();
    for (const auto& [t, L] : rows_) {
      auto row = nlohmann::json::array();
      row.push_back(t);
      for (int k = 0; k < L.size(); ++k) row.push_back(L(k));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
  }
  return j;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int decade = 1; decade < 6; ++decade)
    for (int k = 0; k < 8; ++k) g.push_back(std::pow(10.0, decade + k / 8.0));
  g.push_back(1e6);
  return g;
}

}  // namespace lexvor
