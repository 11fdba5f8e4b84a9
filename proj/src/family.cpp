#include "lexvor/family.hpp"

#include "lexvor/core_linear.hpp"

namespace lexvor {

MatD ScalarFamily::operator()(double t) const {
  MatD M = eval_d(t);
  if (M.rows() != n || M.cols() != n) throw NumericError("family: wrong matrix size");
  double scale = std::max(1.0, M.norm());
  if ((M - MatD(M.transpose())).norm() > 1e-12 * scale)
    throw NumericError("family: matrix not symmetric at sampled t");
  return 0.5 * (M + MatD(M.transpose()));
}

std::optional<MatQ> ScalarFamily::exact_at(const Rational& t) const {
  if (!eval_q) return std::nullopt;
  return eval_q(t);
}

ScalarFamily pullback_family(const GramStack& G, const ParamSchedule& schedule) {
  if (schedule.r() != G.r()) throw ValidationError("pullback family: schedule rank mismatch");
  ScalarFamily f;
  f.n = G.n();
  f.provenance = "pullback";
  f.eval_d = [G, schedule](double t) { return pullback(G, schedule.eval(t)); };
  if (G.exact()) {
    f.eval_q = [G, schedule](const Rational& t) -> std::optional<MatQ> {
      auto L = schedule.eval_exact(t);
      if (!L) return std::nullopt;
      return pullback_exact(G, *L);
    };
  }
  return f;
}

ScalarFamily table_family(std::vector<std::pair<double, MatD>> rows) {
  if (rows.empty()) throw ValidationError("table family: no rows");
  ScalarFamily f;
  f.n = static_cast<int>(rows[0].second.rows());
  f.provenance = "table";
  f.eval_d = [rows = std::move(rows)](double t) -> MatD {
    for (const auto& [tt, M] : rows)
      if (tt == t) return M;
    throw ValidationError("table family: t not present in table");
  };
  return f;
}

}  // namespace lexvor
