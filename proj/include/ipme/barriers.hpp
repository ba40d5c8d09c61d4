#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ipme/core.hpp"
#include "ipme/solver.hpp"

namespace ipme {

enum class BarrierKind { TimeLipschitz, Hoelder, CauchyV };

/// Upper barrier evaluated on a sub-cylinder of the run.
struct Barrier {
  BarrierKind kind = BarrierKind::TimeLipschitz;
  std::function<double(const Point&, double)> value;
  /// Points of the cylinder where the inequality is asserted.
  std::function<bool(const Point&, double)> region;
  /// Constants, for reports.
  double lambda = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  double rho = 0.0;
};

/// Sup-norm data of a smooth g0 dominating the initial/lateral data.
struct DataNorms {
  std::function<double(const Point&)> g0;
  double sup_g = 0.0;
  double sup_Dg = 0.0;
  double sup_D2g = 0.0;
  double sup_gt = 0.0;
};

/// Smallest lambda for which g0 + lambda (e^{lambda t} - 1) is a
/// supersolution of u_t = eps Δu + k beta_c(u) Δ∞_δ u + |Du|^2 dominating
/// g on the lateral boundary:
///   lambda >= k |D²g0|,
///   lambda^2 >= eps d |D²g0| + k (|g0| + c) |D²g0| + |Dg0|^2,
///   lambda^2 >= |g_t|.
double time_lipschitz_lambda(const DataNorms& data, const Params& params, int dim);

/// v+ = g0 + lambda (e^{lambda t} - 1) on the whole run; lambda <= 0 picks
/// time_lipschitz_lambda.
Barrier time_lipschitz_barrier(const DataNorms& data, const Params& params, int dim, double lambda = 0.0);

/// v+ = g(x0, t0) + K |x - x0|^alpha + lambda (t0 - t) on
/// (B_rho(x0)) x (t0 - min(1, t0), t0], with lambda = max(|g_t|, |g|),
/// rho < min(|g| / |Dg|, k c / 16), alpha = min(1/2, k c sqrt(rho) / (16 |g|)),
/// K = |g| / rho. Needs c > 0.
Barrier hoelder_barrier(const DataNorms& data, const Params& params, const Point& x0, double t0, double g_x0t0);

/// V = N + b |x|^2 / (2T - t) + lambda t with b = eps, N = M + eps and
/// lambda = max(8 k M eps / T, 2 k N b / (T (1 - 2 k b))) (times 1 + 1e-9);
/// requires 1 > 2 (k + 2) b.
Barrier cauchy_barrier(const Params& params, double M, double T, double eps);

/// True iff every snapshot stays below the barrier (+ slack) on its region.
bool barrier_check(const std::vector<ScalarField>& snapshots, const Barrier& barrier, double slack = 1e-3);
bool barrier_check(const SolveReport& report, const Barrier& barrier, double slack = 1e-3);

}  // namespace ipme
