#pragma once

#include "lexvor/numeric.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace lexvor {

using VecI = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Visit every u in Z^n with (u - c)^T N (u - c) <= r2 (N positive definite).
/// Fincke-Pohst style recursion on the Cholesky factor; throws BudgetError when
/// more than `budget` nodes are visited.
void enumerate_ball(const MatD& N, const VecD& c, double r2,
                    const std::function<void(const VecI&, double)>& visit,
                    std::size_t budget = 0);

/// Minima of q(u) = u^T N u over the nonzero parity class u = parity (mod 2).
/// With exact gram supplied, minimality and ties are decided exactly.
struct CosetMinima {
  std::vector<VecI> vectors;  // all minimizers (comes in +- pairs)
  double value = 0.0;
};

CosetMinima coset_minima(const MatD& N, const std::vector<int>& parity,
                         const MatQ* exact = nullptr);

/// Voronoi-relevant vector candidates of the lattice Z^n under the gram N:
/// for each of the 2^n - 1 nonzero parity classes, the strict coset minima
/// (one representative per +- pair). Classes with more than one +- pair of
/// minima contribute all of their minima (their halfspaces are then redundant
/// but harmless).
std::vector<VecI> relevant_vector_candidates(const MatD& N, const MatQ* exact = nullptr);

/// All nearest lattice points to w in basis coordinates: minimizers of
/// (u - w)^T N (u - w). Enumeration radius ||u0 - w||_N (1 + margin) from the
/// rounding warm start u0; ties within tau_tie are all returned.
struct CvpResult {
  std::vector<VecI> minimizers;
  double dist2 = 0.0;
  std::optional<Rational> dist2_exact;
};

CvpResult cvp_enumerate(const MatD& N, const VecD& w, double margin = 0.5,
                        double tau_tie = 1e-9, const MatQ* exact = nullptr,
                        const VecQ* w_exact = nullptr);

}  // namespace lexvor
