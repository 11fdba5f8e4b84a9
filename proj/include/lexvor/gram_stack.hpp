#pragma once

#include "lexvor/numeric.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <vector>

namespace lexvor {

/// A rank-r symmetric bilinear form on R^n, stored as r symmetric n x n matrices.
/// Carries exact rational copies whenever the input was rational; structural
/// decisions (ranks, spans, ties) then run exactly, numeric diagnostics in double.
class GramStack {
 public:
  GramStack(std::vector<MatD> mats);         // float mode
  explicit GramStack(std::vector<MatQ> exact_mats);    // rational mode

  int n() const { return n_; }
  int r() const { return r_; }
  bool exact() const { return exact_.has_value(); }

  const MatD& mat(int j) const { return mats_[j]; }               // j = 0..r-1
  const MatQ& exact_mat(int j) const { return (*exact_)[j]; }
  const std::vector<MatD>& mats() const { return mats_; }
  const std::vector<MatQ>& exact_mats() const { return *exact_; }

  static GramStack from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  void validate(double sym_tol) const;
  int n_ = 0, r_ = 0;
  std::vector<MatD> mats_;
  std::optional<std::vector<MatQ>> exact_;
};

}  // namespace lexvor
