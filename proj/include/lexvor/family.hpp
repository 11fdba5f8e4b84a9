#pragma once

#include "lexvor/gram_stack.hpp"
#include "lexvor/schedule.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lexvor {

/// Time-indexed family of symmetric matrices M_t (Gram matrices of <.,.>_t).
/// Positive definiteness is checked lazily by the consumers and reported per t.
struct ScalarFamily {
  int n = 0;
  std::string provenance;  // "pullback" | "graph" | "table" | "custom"
  std::function<MatD(double)> eval_d;
  std::function<std::optional<MatQ>(const Rational&)> eval_q;  // may be empty

  MatD operator()(double t) const;
  std::optional<MatQ> exact_at(const Rational& t) const;
};

ScalarFamily pullback_family(const GramStack& G, const ParamSchedule& schedule);
ScalarFamily table_family(std::vector<std::pair<double, MatD>> rows);

}  // namespace lexvor
