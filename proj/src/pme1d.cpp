#include "ipme/pme1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ipme {

void RadialProblem::validate() const {
  if (!(m > 1.0)) throw ParameterError("m must exceed 1");
  if (grid.dim() != 1) throw ParameterError("the 1-d oracle needs a 1-d grid");
  if (initial.size() != grid.size()) throw ParameterError("initial profile length does not match the grid");
  if ((initial < 0.0).any()) throw DomainError("initial density must be nonnegative");
  if (left == Left::Dirichlet && !left_value) throw ParameterError("Dirichlet left end needs a value");
}

Pme1dState pme1d_initial(const RadialProblem& problem) {
  problem.validate();
  // Boundary values enter at t0 so the first stable step already sees them.
  Pme1dState s{problem.initial, problem.t0, 0.0};
  if (problem.left == RadialProblem::Left::Dirichlet) s.rho[0] = problem.left_value(problem.t0);
  if (problem.right_value) s.rho[s.rho.size() - 1] = problem.right_value(problem.t0);
  if ((s.rho < 0.0).any()) throw DomainError("boundary density must be nonnegative");
  return s;
}

double pme1d_stable_dt(const RadialProblem& problem, const Pme1dState& state) {
  const double h = problem.grid.h(0);
  const double diff = problem.m * state.rho.pow(problem.m - 1.0).maxCoeff();
  if (!(diff > 0.0)) return std::numeric_limits<double>::infinity();
  return h * h / (2.0 * diff);
}

Pme1dState pme1d_step(const RadialProblem& problem, const Pme1dState& state, double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  if (dt > pme1d_stable_dt(problem, state) * (1.0 + 1e-12)) throw ParameterError("time step violates the stability bound");
  const Index n = state.rho.size();
  const double h = problem.grid.h(0);
  const double r = dt / (h * h);
  const Array phi = state.rho.pow(problem.m);

  Pme1dState next;
  next.t = state.t + dt;
  next.clipped_mass = state.clipped_mass;
  next.rho.resize(n);
  next.rho.segment(1, n - 2) =
      state.rho.segment(1, n - 2) + r * (phi.segment(2, n - 2) - 2.0 * phi.segment(1, n - 2) + phi.segment(0, n - 2));
  if (problem.left == RadialProblem::Left::Symmetry)
    next.rho[0] = state.rho[0] + 2.0 * r * (phi[1] - phi[0]);
  else
    next.rho[0] = problem.left_value(next.t);
  next.rho[n - 1] = problem.right_value ? problem.right_value(next.t) : 0.0;

  for (Index i = 0; i < n; ++i) {
    if (next.rho[i] < 0.0) {
      next.clipped_mass -= next.rho[i] * h;
      next.rho[i] = 0.0;
    }
  }
  return next;
}

std::vector<ScalarField> pme1d_solve(const RadialProblem& problem, double t_end, std::vector<double> snapshot_times,
                                     double safety) {
  if (!(t_end > problem.t0)) throw ParameterError("t_end must exceed the initial time");
  if (!(safety > 0.0 && safety <= 1.0)) throw ParameterError("safety factor must lie in (0, 1]");
  if (snapshot_times.empty()) snapshot_times.push_back(t_end);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double ts : snapshot_times)
    if (ts < problem.t0 || ts > t_end) throw ParameterError("snapshot time outside the run interval");

  Pme1dState state = pme1d_initial(problem);
  std::vector<ScalarField> out;
  out.reserve(snapshot_times.size());
  std::size_t next = 0;
  auto flush = [&] {
    while (next < snapshot_times.size() && snapshot_times[next] <= state.t) {
      out.emplace_back(problem.grid, state.rho, state.t);
      ++next;
    }
  };
  flush();
  while (next < snapshot_times.size()) {
    const double target = snapshot_times[next];
    double dt = safety * pme1d_stable_dt(problem, state);
    bool landing = false;
    if (!std::isfinite(dt) || state.t + dt >= target) {
      dt = target - state.t;
      landing = true;
    }
    state = pme1d_step(problem, state, dt);
    if (landing) state.t = target;
    flush();
  }
  return out;
}

double pme1d_mass(const GridSpec& grid, const Array& rho) {
  const Index n = rho.size();
  return grid.h(0) * (0.5 * rho[0] + rho.segment(1, n - 2).sum() + 0.5 * rho[n - 1]);
}

}  // namespace ipme
