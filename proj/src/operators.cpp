#include "ipme/operators.hpp"

#include <atomic>

namespace ipme {

namespace testing {
namespace {
std::atomic<bool> g_stencil_fault{false};
}
void set_stencil_fault(bool on) { g_stencil_fault.store(on); }
bool stencil_fault() { return g_stencil_fault.load(); }
}  // namespace testing

StencilEval stencil_eval(const ScalarField& u, Index node, double delta) {
  const GridSpec& grid = u.grid();
  if (node < 0 || node >= grid.size() || grid.is_boundary(node)) throw RangeError("stencil needs an interior node");
  const int d = grid.dim();
  const auto& v = u.values();
  const double cross_sign = testing::stencil_fault() ? -1.0 : 1.0;

  StencilEval e;
  e.grad.resize(d);
  e.hess.resize(d, d);
  for (int i = 0; i < d; ++i) {
    const Index si = grid.stride(i);
    const double hi = grid.h(i);
    e.grad[i] = (v[node + si] - v[node - si]) / (2.0 * hi);
    e.hess(i, i) = (v[node + si] - 2.0 * v[node] + v[node - si]) / (hi * hi);
    for (int j = i + 1; j < d; ++j) {
      const Index sj = grid.stride(j);
      const double hij = cross_sign *
                         (v[node + si + sj] - v[node + si - sj] - v[node - si + sj] + v[node - si - sj]) /
                         (4.0 * hi * grid.h(j));
      e.hess(i, j) = hij;
      e.hess(j, i) = hij;
    }
  }
  e.lap = e.hess.trace();
  const double grad2 = e.grad.squaredNorm();
  const double quad = e.grad.dot(e.hess * e.grad);
  e.inf_lap_reg = regularized_inf_laplacian(quad, grad2, e.lap, d, delta);

  Eigen::SelfAdjointEigenSolver<SmallMatrix> eig(e.hess, Eigen::EigenvaluesOnly);
  e.lambda_min = eig.eigenvalues().minCoeff();
  e.lambda_max = eig.eigenvalues().maxCoeff();
  return e;
}

double L_eps_delta(const ScalarField& u, Index node, const Params& params) {
  const StencilEval e = stencil_eval(u, node, params.delta());
  return params.eps() * e.lap + params.k() * beta_or_abs(u[node], params.c()) * e.inf_lap_reg;
}

double rhs_full(const ScalarField& u, Index node, const Params& params) {
  const StencilEval e = stencil_eval(u, node, params.delta());
  return params.eps() * e.lap + params.k() * beta_or_abs(u[node], params.c()) * e.inf_lap_reg + e.grad.squaredNorm();
}

double interpolated_op(const ScalarField& w, Index node, double eps_mix, double delta) {
  if (!(eps_mix >= 0.0 && eps_mix <= 1.0)) throw DomainError("interpolation weight must lie in [0, 1]");
  const StencilEval e = stencil_eval(w, node, delta);
  return eps_mix * e.lap + (1.0 - eps_mix) * e.inf_lap_reg;
}

}  // namespace ipme
