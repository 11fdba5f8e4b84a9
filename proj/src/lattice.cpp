#include "lexvor/lattice.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace lexvor {

LatticeModel::LatticeModel(MatQ b) : basis(std::move(b)) {
  if (basis.rows() != basis.cols() || basis.rows() < 1)
    throw ValidationError("lattice: basis must be square, n >= 1");
  if (rank_q(basis) != basis.rows()) throw ValidationError("lattice: basis is singular");
  basis_d = to_double(basis);
}

LatticeModel LatticeModel::from_json(const nlohmann::json& j) {
  const auto& rows = j.at("basis");
  int n = static_cast<int>(rows.size());
  MatQ B(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw ValidationError("lattice: ragged basis");
    for (int k = 0; k < n; ++k) {
      const auto& e = rows[i][k];
      B(i, k) = e.is_string() ? parse_rational(e.get<std::string>())
                              : Rational(e.get<long long>());
    }
  }
  return LatticeModel(std::move(B));
}

nlohmann::json LatticeModel::to_json() const {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < basis.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < basis.cols(); ++k) row.push_back(rational_to_string(basis(i, k)));
    rows.push_back(std::move(row));
  }
  j["basis"] = std::move(rows);
  return j;
}

LatticeModel rationalize_lattice(const MatD& basis, std::uint64_t max_den, double tol) {
  MatQ B(basis.rows(), basis.cols());
  for (int i = 0; i < basis.rows(); ++i)
    for (int k = 0; k < basis.cols(); ++k) {
      auto q = rationalize(basis(i, k), max_den, tol);
      if (!q) {
        std::ostringstream os;
        os << "lattice: entry (" << i << "," << k << ") = " << basis(i, k)
           << " is not rational within denominator bound " << max_den;
        throw ValidationError(os.str());
      }
      B(i, k) = *q;
    }
  return LatticeModel(std::move(B));
}

namespace {

// Constraint matrix whose kernel (in lattice coordinates) is Lambda^j.
MatQ level_constraints(const GramStack& G, const MatQ& basis, int j) {
  const int n = G.n();
  MatQ C((j - 1) * n, n);
  for (int i = 0; i < j - 1; ++i) C.middleRows(i * n, n) = G.exact_mat(i) * basis;
  return C;
}

}  // namespace

AdmissibleResult admissible_lattice(const StackModel& M, const LatticeModel& L) {
  if (!M.G.exact())
    throw ValidationError("admissible_lattice: rational gram stack required (float stacks must be rationalized or rejected)");
  if (L.n() != M.n()) throw ValidationError("admissible_lattice: dimension mismatch");
  const int n = M.n(), r = M.r();
  AdmissibleResult res;
  // Lambda^j = integer kernel of the leading constraints; saturated by construction.
  std::vector<MatZ> kernels(static_cast<std::size_t>(r));
  kernels[0] = MatZ::Identity(n, n);
  for (int j = 2; j <= r; ++j) {
    kernels[static_cast<std::size_t>(j) - 1] =
        integer_kernel_of_rational(level_constraints(M.G, L.basis, j));
    int rk = static_cast<int>(kernels[static_cast<std::size_t>(j) - 1].cols());
    if (rk != M.filt.dims[static_cast<std::size_t>(j) - 1]) {
      res.admissible = false;
      res.fail_level = j;
      std::ostringstream os;
      os << "rank(Lambda^" << j << ") = " << rk << " < dim F^" << j << " = "
         << M.filt.dims[static_cast<std::size_t>(j) - 1];
      res.reason = os.str();
      return res;
    }
  }
  // Nested adapted basis: complete Lambda^{j+1} inside Lambda^j downward.
  MatZ adapted = kernels[static_cast<std::size_t>(r) - 1];
  for (int j = r - 1; j >= 1; --j)
    adapted = complete_to_basis(kernels[static_cast<std::size_t>(j) - 1], adapted);
  // adapted now lists deepest-level vectors first; regroup as I_1 | ... | I_r.
  GradedLatticeData data;
  data.level_dims.resize(static_cast<std::size_t>(r));
  for (int k = 1; k <= r; ++k) {
    int dk = M.filt.dims[static_cast<std::size_t>(k) - 1];
    int dk1 = k < r ? M.filt.dims[static_cast<std::size_t>(k)] : 0;
    data.level_dims[static_cast<std::size_t>(k) - 1] = dk - dk1;
  }
  MatZ grouped(n, n);
  int at = 0;
  for (int k = 1; k <= r; ++k) {
    data.level_offsets.push_back(at);
    int nk = data.level_dims[static_cast<std::size_t>(k) - 1];
    int dk1 = k < r ? M.filt.dims[static_cast<std::size_t>(k)] : 0;
    // Columns of `adapted` are ordered [Lambda^r | completions of r-1 | ... | completions of 1];
    // the level-k block sits right after the Lambda^{k+1} part.
    if (nk > 0) grouped.middleCols(at, nk) = adapted.middleCols(dk1, nk);
    at += nk;
  }
  data.adapted_coords = grouped;
  data.adapted_ambient = L.basis * to_rational(grouped);
  // Graded lattice bases in rep_basis coordinates: block coordinates of the
  // level-k adapted vectors (their classes form a basis of gr^k Lambda).
  for (int k = 1; k <= r; ++k) {
    int nk = data.level_dims[static_cast<std::size_t>(k) - 1];
    MatQ Gk(nk, nk);
    for (int c = 0; c < nk; ++c) {
      VecQ e = data.adapted_ambient.col(data.level_offsets[static_cast<std::size_t>(k) - 1] + c);
      Gk.col(c) = M.block_coords_exact(e, k);
    }
    if (nk > 0 && rank_q(Gk) != nk)
      throw NumericError("admissible_lattice: graded basis degenerate (internal)");
    data.graded_bases.push_back(std::move(Gk));
  }
  res.admissible = true;
  res.data = std::move(data);
  return res;
}

AdmissibleResult admissible_lattice(const GramStack& G, const LatticeModel& L, double tol) {
  return admissible_lattice(analyze(G, tol), L);
}

AdmissibleResult admissible_lattice_float(const GramStack& G, const MatD& basis,
                                          std::uint64_t max_den, double tol) {
  try {
    LatticeModel L = rationalize_lattice(basis, max_den, tol);
    GramStack Gq = G;
    if (!G.exact()) {
      std::vector<MatQ> mats;
      for (int j = 0; j < G.r(); ++j) {
        MatQ A(G.n(), G.n());
        for (int a = 0; a < G.n(); ++a)
          for (int b = 0; b < G.n(); ++b) {
            auto q = rationalize(G.mat(j)(a, b), max_den, tol);
            if (!q) throw ValidationError("admissible_lattice: gram entry not rational within bound");
            A(a, b) = *q;
          }
        // Exact symmetrization of the rationalized matrix.
        A = (A + MatQ(A.transpose())) / Rational(2);
        mats.push_back(std::move(A));
      }
      Gq = GramStack(std::move(mats));
    }
    return admissible_lattice(Gq, L, tol);
  } catch (const ValidationError&) {
    // Irrational data: certify the deficit level by probing the float kernel of
    // the constraints for rationalizable integer directions.
  }
  StackModel M = analyze(G, tol);
  const int n = G.n();
  for (int j = 2; j <= G.r(); ++j) {
    MatD C((j - 1) * n, n);
    for (int i = 0; i < j - 1; ++i) C.middleRows(i * n, n) = G.mat(i) * basis;
    MatD K = nullspace_d(C, tol);
    // Count kernel directions that rationalize to genuine rational kernel
    // vectors: entry-wise continued fractions, then a residual check (the
    // rounded vector must still annihilate the constraints).
    int found = 0;
    double cscale = std::max(C.norm(), 1e-300);
    for (int c = 0; c < K.cols(); ++c) {
      VecD v = K.col(c);
      double scale = v.cwiseAbs().maxCoeff();
      if (scale == 0) continue;
      v /= scale;
      VecD w = v;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        auto q = rationalize(v(i), max_den, 1e-5);
        if (!q)
          ok = false;
        else
          w(i) = to_double(*q);
      }
      if (ok && (C * w).norm() <= 1e-9 * cscale * w.norm()) ++found;
    }
    int want = M.filt.dims[static_cast<std::size_t>(j) - 1];
    if (found < want) {
      AdmissibleResult res;
      res.admissible = false;
      res.fail_level = j;
      std::ostringstream os;
      os << "irrational basis: only " << found << " rationalizable directions in Lambda^" << j
         << " but dim F^" << j << " = " << want << " (denominator bound " << max_den << ")";
      res.reason = os.str();
      return res;
    }
  }
  AdmissibleResult res;
  res.admissible = false;
  res.fail_level = 0;
  res.reason = "basis could not be rationalized within the denominator bound";
  return res;
}

}  // namespace lexvor
