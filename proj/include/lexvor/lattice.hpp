#pragma once

#include "lexvor/core_linear.hpp"
#include "lexvor/intlat.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>

namespace lexvor {

/// Full-rank lattice with a rational basis (columns generate).
struct LatticeModel {
  MatQ basis;
  MatD basis_d;

  explicit LatticeModel(MatQ b);
  int n() const { return static_cast<int>(basis.rows()); }

  static LatticeModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Rationalize a float basis with a declared denominator bound; throws
/// ValidationError naming the first entry that fails.
LatticeModel rationalize_lattice(const MatD& basis, std::uint64_t max_den = 1000000,
                                 double tol = 1e-9);

/// Lattice-adapted data produced by a successful admissibility check:
/// a unimodular change of basis grouped by filtration level, the graded
/// lattices gr^j Lambda in rep_basis coordinates, and the index blocks I_k.
struct GradedLatticeData {
  MatZ adapted_coords;              // columns: adapted basis in lattice coordinates
  MatQ adapted_ambient;             // basis * adapted_coords, grouped I_1 | I_2 | ... | I_r
  std::vector<int> level_dims;      // n_k = dim gr^k H = rk gr^k Lambda
  std::vector<int> level_offsets;   // start of I_k inside the adapted basis
  std::vector<MatQ> graded_bases;   // per level: basis of gr^k Lambda in rep_basis coords
};

struct AdmissibleResult {
  bool admissible = false;
  int fail_level = 0;       // 1-based when not admissible
  std::string reason;
  std::optional<GradedLatticeData> data;
};

/// Decides admissibility of Lambda for the inner product: computes
/// Lambda^j = Lambda cap F^j as integer kernels (Hermite/Smith over Z) and
/// checks rk(Lambda^j) = dim F^j for every level. Requires a rational stack.
AdmissibleResult admissible_lattice(const StackModel& M, const LatticeModel& L);
AdmissibleResult admissible_lattice(const GramStack& G, const LatticeModel& L,
                                    double tol = kDefaultTol);

/// Float-basis variant: tries to rationalize with the declared bound first; on
/// failure certifies the rank deficit by probing the float kernel of each level
/// for rationalizable integer directions (the pathology-style refusal).
AdmissibleResult admissible_lattice_float(const GramStack& G, const MatD& basis,
                                          std::uint64_t max_den = 1000000,
                                          double tol = kDefaultTol);

}  // namespace lexvor
