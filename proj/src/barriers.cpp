#include "ipme/barriers.hpp"

#include <algorithm>
#include <cmath>

namespace ipme {

double time_lipschitz_lambda(const DataNorms& data, const Params& params, int dim) {
  const double d2 = data.sup_D2g;
  const double need = params.eps() * dim * d2 + params.k() * (data.sup_g + params.c()) * d2 + data.sup_Dg * data.sup_Dg;
  return std::max({params.k() * d2, std::sqrt(need), std::sqrt(data.sup_gt)});
}

Barrier time_lipschitz_barrier(const DataNorms& data, const Params& params, int dim, double lambda) {
  if (!data.g0) throw ParameterError("barrier needs g0");
  Barrier b;
  b.kind = BarrierKind::TimeLipschitz;
  b.lambda = lambda > 0.0 ? lambda : time_lipschitz_lambda(data, params, dim);
  const double lam = b.lambda;
  auto g0 = data.g0;
  b.value = [g0, lam](const Point& x, double t) { return g0(x) + lam * std::expm1(lam * t); };
  b.region = [](const Point&, double) { return true; };
  return b;
}

Barrier hoelder_barrier(const DataNorms& data, const Params& params, const Point& x0, double t0, double g_x0t0) {
  if (!(params.c() > 0.0)) throw ParameterError("Hoelder barrier needs c > 0");
  if (!(data.sup_g > 0.0)) throw ParameterError("Hoelder barrier needs |g| > 0");
  Barrier b;
  b.kind = BarrierKind::Hoelder;
  b.lambda = std::max(data.sup_gt, data.sup_g);
  const double kc = params.k() * params.c();
  const double rho_cap = data.sup_Dg > 0.0 ? data.sup_g / data.sup_Dg : kc / 16.0;
  b.rho = 0.99 * std::min(rho_cap, kc / 16.0);
  b.alpha = std::min(0.5, kc * std::sqrt(b.rho) / (16.0 * data.sup_g));
  b.K = data.sup_g / b.rho;
  const double lam = b.lambda, K = b.K, alpha = b.alpha, rho = b.rho;
  const double t_lo = t0 - std::min(1.0, t0);
  b.value = [=](const Point& x, double t) { return g_x0t0 + K * std::pow((x - x0).norm(), alpha) + lam * (t0 - t); };
  b.region = [=](const Point& x, double t) { return (x - x0).norm() < rho && t > t_lo && t <= t0; };
  return b;
}

Barrier cauchy_barrier(const Params& params, double M, double T, double eps) {
  const double k = params.k();
  const double b_ = eps;
  if (!(1.0 > 2.0 * (k + 2.0) * b_)) throw ParameterError("Cauchy barrier needs 1 > 2 (k + 2) b");
  if (!(T > 0.0)) throw ParameterError("Cauchy barrier needs T > 0");
  const double N = M + eps;
  Barrier bar;
  bar.kind = BarrierKind::CauchyV;
  bar.lambda = (1.0 + 1e-9) * std::max(8.0 * k * M * eps / T, 2.0 * k * N * b_ / (T * (1.0 - 2.0 * k * b_)));
  const double lam = bar.lambda;
  bar.value = [=](const Point& x, double t) { return N + b_ * x.squaredNorm() / (2.0 * T - t) + lam * t; };
  bar.region = [=](const Point&, double t) { return t <= T; };
  return bar;
}

bool barrier_check(const std::vector<ScalarField>& snapshots, const Barrier& barrier, double slack) {
  for (const auto& f : snapshots) {
    const GridSpec& grid = f.grid();
    for (Index i = 0; i < grid.size(); ++i) {
      const Point x = grid.coords(i);
      if (!barrier.region(x, f.t())) continue;
      if (f[i] > barrier.value(x, f.t()) + slack) return false;
    }
  }
  return true;
}

bool barrier_check(const SolveReport& report, const Barrier& barrier, double slack) {
  std::vector<ScalarField> all = report.snapshots;
  all.push_back(report.final_field);
  return barrier_check(all, barrier, slack);
}

}  // namespace ipme
