#pragma once

#include "ipme/core.hpp"

namespace ipme {

/// Smooth cutoff equal to |z| for |z| >= c and to the C^1 blend
/// c/2 + z^2/(2c) inside, so beta_c >= c/2 everywhere.
template <typename Scalar>
Scalar beta_c(Scalar z, Scalar c) {
  if (!(c > Scalar(0))) throw DomainError("beta_c needs c > 0");
  const Scalar a = z < Scalar(0) ? -z : z;
  if (a >= c) return a;
  return c / Scalar(2) + z * z / (Scalar(2) * c);
}

/// beta_c with the c = 0 convention beta_0(z) = |z| (no positivity floor).
template <typename Scalar>
Scalar beta_or_abs(Scalar z, Scalar c) {
  if (c > Scalar(0)) return beta_c(z, c);
  return z < Scalar(0) ? -z : z;
}

/// δ-regularized 1-homogeneous infinity-Laplacian from discrete derivatives:
///   (<D²u Du, Du> + δ² Δu/d) / (|Du|² + δ²).
/// The δ² Δu/d term fills in the value at critical points with the mean
/// Hessian eigenvalue, which lies in [λ(D²u), Λ(D²u)]; it vanishes as δ -> 0
/// wherever Du != 0.
template <typename Scalar>
Scalar regularized_inf_laplacian(Scalar quad, Scalar grad2, Scalar lap, int dim, Scalar delta) {
  const Scalar d2 = delta * delta;
  const Scalar denom = grad2 + d2;
  if (denom == Scalar(0)) throw SingularPointError("infinity-Laplacian undefined at a critical point with delta = 0");
  return (quad + d2 * lap / Scalar(dim)) / denom;
}

struct StencilEval {
  Point grad;
  SmallMatrix hess;
  double lap = 0.0;
  double inf_lap_reg = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
};

/// Centered second-order derivatives at an interior node.
StencilEval stencil_eval(const ScalarField& u, Index node, double delta = 0.0);

/// ε Δu + k β_c(u) <D²u Du, Du>/(|Du|² + δ²), with the critical-point fill-in above.
double L_eps_delta(const ScalarField& u, Index node, const Params& params);

/// L_eps_delta + |Du|².
double rhs_full(const ScalarField& u, Index node, const Params& params);

/// eps_mix Δw + (1 - eps_mix) Δ∞w.
double interpolated_op(const ScalarField& w, Index node, double eps_mix, double delta = 0.0);

namespace testing {
/// Flips the sign of the mixed second differences; used by `verify --inject-fault`.
void set_stencil_fault(bool on);
bool stencil_fault();
}  // namespace testing

}  // namespace ipme
