#pragma once

#include <functional>
#include <vector>

#include "ipme/core.hpp"

namespace ipme {

/// rho_t = (rho^m)_rr on a 1-d node grid. Works on the density, in
/// conservative form, and shares no code with the pressure solver.
struct RadialProblem {
  enum class Left { Symmetry, Dirichlet };

  double m = 2.0;
  GridSpec grid = GridSpec::line(3, 0.0, 1.0);
  Array initial;
  double t0 = 0.0;
  Left left = Left::Symmetry;
  /// Dirichlet values as functions of time; the right end is always Dirichlet.
  std::function<double(double)> left_value;
  std::function<double(double)> right_value;

  void validate() const;
};

struct Pme1dState {
  Array rho;
  double t = 0.0;
  /// Mass removed by clipping negative values (should stay at rounding level).
  double clipped_mass = 0.0;
};

Pme1dState pme1d_initial(const RadialProblem& problem);

/// Largest stable step h^2 / (2 max m rho^{m-1}) (infinite for rho = 0).
double pme1d_stable_dt(const RadialProblem& problem, const Pme1dState& state);

/// One explicit conservative step. Throws ParameterError if dt exceeds the
/// stable step.
Pme1dState pme1d_step(const RadialProblem& problem, const Pme1dState& state, double dt);

/// Steps with dt = safety * stable dt, landing exactly on each snapshot time.
/// Returns one profile per requested time (as 1-d density fields); an empty
/// list means t_end only.
std::vector<ScalarField> pme1d_solve(const RadialProblem& problem, double t_end, std::vector<double> snapshot_times,
                                     double safety = 0.9);

/// h (rho_0 / 2 + rho_1 + ... + rho_{N-2} + rho_{N-1} / 2) on a symmetry grid
/// this is the mass of the half line.
double pme1d_mass(const GridSpec& grid, const Array& rho);

}  // namespace ipme
