#include "lexvor/enumerate.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace lexvor {

namespace {

struct BallEnum {
  const MatD& R;  // upper-triangular Cholesky factor, N = R^T R
  const VecD& c;
  double r2;
  const std::function<void(const VecI&, double)>& visit;
  std::size_t budget;
  std::size_t nodes = 0;
  int n;
  VecI u;

  void run() {
    u = VecI::Zero(n);
    rec(n - 1, 0.0);
  }

  // partial[i] accumulated from levels > i: sum over j>i of R(i,j)(u_j - c_j)
  double partial(int i) const {
    double s = 0;
    for (int j = i + 1; j < n; ++j) s += R(i, j) * (static_cast<double>(u(j)) - c(j));
    return s;
  }

  void rec(int i, double used) {
    if (++nodes > budget) throw BudgetError("lattice enumeration budget exceeded");
    double rem = r2 - used;
    if (rem < -1e-12 * std::max(1.0, r2)) return;
    rem = std::max(rem, 0.0);
    double s = partial(i);
    double rii = R(i, i);
    double half = std::sqrt(rem) / rii;
    double center = c(i) - s / rii;
    long long lo = static_cast<long long>(std::ceil(center - half - 1e-9));
    long long hi = static_cast<long long>(std::floor(center + half + 1e-9));
    for (long long v = lo; v <= hi; ++v) {
      u(i) = v;
      double term = rii * (static_cast<double>(v) - c(i)) + s;
      double used2 = used + term * term;
      if (used2 > r2 * (1.0 + 1e-9) + 1e-12) continue;
      if (i == 0)
        visit(u, used2);
      else
        rec(i - 1, used2);
    }
  }
};

Rational quad_exact_at(const MatQ& N, const VecI& u, const VecQ* shift) {
  const int n = static_cast<int>(u.size());
  VecQ y(n);
  for (int i = 0; i < n; ++i) y(i) = Rational(static_cast<long long>(u(i)));
  if (shift) y -= *shift;
  return Rational((y.transpose() * N * y)(0, 0));
}

}  // namespace

void enumerate_ball(const MatD& N, const VecD& c, double r2,
                    const std::function<void(const VecI&, double)>& visit, std::size_t budget) {
  const int n = static_cast<int>(N.rows());
  if (n == 0) return;
  Eigen::LLT<MatD> llt(N);
  if (llt.info() != Eigen::Success)
    throw NumericError("enumerate_ball: gram matrix is not positive definite");
  MatD R = llt.matrixU();
  if (budget == 0) budget = enumeration_budget(5'000'000);
  BallEnum e{R, c, std::max(r2, 0.0), visit, budget, 0, n, {}};
  e.run();
}

CosetMinima coset_minima(const MatD& N, const std::vector<int>& parity, const MatQ* exact) {
  const int n = static_cast<int>(N.rows());
  // Initial bound: coordinates in {-1, 0, 1} matching the parity.
  double bound = std::numeric_limits<double>::infinity();
  int ones = 0;
  for (int v : parity) ones += v != 0;
  if (ones == 0) throw ValidationError("coset_minima: zero parity class");
  for (int mask = 0; mask < (1 << ones); ++mask) {
    VecD y(n);
    int bit = 0;
    for (int i = 0; i < n; ++i) {
      if (parity[static_cast<std::size_t>(i)] == 0) {
        y(i) = 0;
      } else {
        y(i) = (mask >> bit) & 1 ? -1.0 : 1.0;
        ++bit;
      }
    }
    bound = std::min(bound, y.dot(N * y));
  }
  // Enumerate the coset u = p + 2v inside the bound: q(u) = 4 (v - c')^T N (v - c').
  VecD cp(n);
  for (int i = 0; i < n; ++i) cp(i) = -parity[static_cast<std::size_t>(i)] / 2.0;
  CosetMinima out;
  double best = bound * (1.0 + 1e-9);
  std::vector<std::pair<VecI, double>> hits;
  enumerate_ball(N, cp, best / 4.0, [&](const VecI& v, double q4) {
    VecI u(n);
    for (int i = 0; i < n; ++i) u(i) = parity[static_cast<std::size_t>(i)] + 2 * v(i);
    hits.emplace_back(u, 4.0 * q4);
  });
  if (hits.empty()) throw NumericError("coset_minima: enumeration missed the initial bound");
  if (exact) {
    Rational bq;
    bool first = true;
    std::vector<VecI> mins;
    std::vector<Rational> vals;
    for (auto& [u, q] : hits) vals.push_back(quad_exact_at(*exact, u, nullptr));
    for (std::size_t k = 0; k < hits.size(); ++k) {
      if (first || vals[k] < bq) {
        bq = vals[k];
        first = false;
      }
    }
    for (std::size_t k = 0; k < hits.size(); ++k)
      if (vals[k] == bq) mins.push_back(hits[k].first);
    out.vectors = std::move(mins);
    out.value = to_double(bq);
    return out;
  }
  double bmin = std::numeric_limits<double>::infinity();
  for (auto& [u, q] : hits) bmin = std::min(bmin, q);
  for (auto& [u, q] : hits)
    if (q <= bmin * (1.0 + 1e-9)) out.vectors.push_back(u);
  out.value = bmin;
  return out;
}

std::vector<VecI> relevant_vector_candidates(const MatD& N, const MatQ* exact) {
  const int n = static_cast<int>(N.rows());
  if (n > 20) throw BudgetError("relevant_vector_candidates: dimension over budget");
  std::vector<VecI> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> parity(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parity[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    CosetMinima cm = coset_minima(N, parity, exact);
    // Keep one representative per +- pair.
    for (const VecI& u : cm.vectors) {
      bool neg_seen = false;
      for (const VecI& w : out)
        if (w == -u) neg_seen = true;
      if (!neg_seen) out.push_back(u);
    }
  }
  return out;
}

CvpResult cvp_enumerate(const MatD& N, const VecD& w, double margin, double tau_tie,
                        const MatQ* exact, const VecQ* w_exact) {
  const int n = static_cast<int>(N.rows());
  CvpResult out;
  if (n == 0) {
    out.minimizers.push_back(VecI());
    if (exact) out.dist2_exact = Rational(0);
    return out;
  }
  VecI u0(n);
  for (int i = 0; i < n; ++i) u0(i) = static_cast<long long>(std::llround(w(i)));
  VecD y0 = u0.cast<double>() - w;
  double q0 = y0.dot(N * y0);
  double radius2 = q0 * (1.0 + margin) * (1.0 + margin) + 1e-12;
  std::vector<std::pair<VecI, double>> hits;
  enumerate_ball(N, w, radius2, [&](const VecI& u, double q) { hits.emplace_back(u, q); });
  if (hits.empty()) hits.emplace_back(u0, q0);
  if (exact && w_exact) {
    Rational best;
    bool first = true;
    std::vector<Rational> vals;
    vals.reserve(hits.size());
    for (auto& [u, q] : hits) vals.push_back(quad_exact_at(*exact, u, w_exact));
    for (const auto& v : vals)
      if (first || v < best) {
        best = v;
        first = false;
      }
    for (std::size_t k = 0; k < hits.size(); ++k)
      if (vals[k] == best) out.minimizers.push_back(hits[k].first);
    out.dist2_exact = best;
    out.dist2 = to_double(best);
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto& [u, q] : hits) best = std::min(best, q);
  for (auto& [u, q] : hits)
    if (q <= best + tau_tie) out.minimizers.push_back(u);
  out.dist2 = best;
  return out;
}

}  // namespace lexvor
