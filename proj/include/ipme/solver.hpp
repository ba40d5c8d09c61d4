#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ipme/core.hpp"

namespace ipme {

/// Computational domain inside the grid box. Ball domains keep the nodes at
/// or beyond `radius` from `center` fixed at the boundary data.
struct DomainMask {
  enum class Shape { Box, Ball };

  Shape shape = Shape::Box;
  Point center;
  double radius = 0.0;

  static DomainMask box() { return {}; }
  static DomainMask ball(Point center, double radius);
  bool inside(const Point& x) const;
};

/// How |Du|^2 is discretized. Centered is the default; Upwind is the Godunov
/// flux max(max(D-u, 0)^2, min(D+u, 0)^2) per axis.
enum class GradientScheme { Centered, Upwind };

struct SolverOptions {
  double safety = 0.4;
  GradientScheme gradient = GradientScheme::Centered;
  /// Interior values below -negative_tol * (1 + max u) abort the run.
  double negative_tol = 1e-6;
  std::size_t max_steps = 200'000'000;
};

struct DirichletProblem {
  GridSpec grid = GridSpec::cube(1, 3, 0.0, 1.0);
  Params params{2.0};
  BoundaryData boundary;
  DomainMask domain;
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  /// Replaces boundary.initial when set (must live on `grid`).
  std::optional<Array> initial_values;
};

struct CauchyProblem {
  GridSpec grid = GridSpec::cube(1, 3, 0.0, 1.0);
  Params params{2.0};
  std::function<double(const Point&)> u0;
  /// Radius of the region where the data is kept; the domain is |x| < 2r.
  double r = 1.0;
  /// Lateral value on |x| = 2r; must dominate u0.
  double M = 1.0;
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
};

/// One (eps, delta, n) stage of a continuation or ladder.
struct StageRecord {
  double eps = 0.0;
  double delta = 0.0;
  double c = 0.0;
  int n = 0;
  /// Max-norm distance of the final field to the previous stage's (NaN for the first).
  double diff_prev = 0.0;
  std::size_t steps = 0;
};

struct SolveReport {
  ScalarField final_field{GridSpec::cube(1, 3, 0.0, 1.0)};
  std::vector<ScalarField> snapshots;
  DtRecord dt;
  double max_u = 0.0;
  double min_interior = 0.0;
  std::vector<StageRecord> stages;
  bool continuation_warning = false;
  bool truncation_warning = false;
  RunManifest manifest;
};

/// Largest admissible step for the current field:
/// safety * min(h^2 / (2 (eps d + k max beta_c(u))), h / (2 max |Du| + tiny)).
double cfl_dt(const ScalarField& u, const Params& params, double safety = 0.4,
              const DomainMask& domain = DomainMask::box());

/// One explicit Euler step of u_t = L^{eps,delta} u + |Du|^2. Boundary (and
/// masked) nodes are set to g(x, t + dt).
ScalarField step_explicit(const ScalarField& u, double dt, const Params& params, const BoundaryData& boundary,
                          const DomainMask& domain = DomainMask::box(), const SolverOptions& options = {});

/// Single run at fixed params from t_start to t_end.
SolveReport solve_fixed(const DirichletProblem& problem, const SolverOptions& options = {});

/// Continuation: eps descending at the largest delta, then delta descending
/// at the smallest eps; every stage restarts from the same data.
SolveReport solve_dirichlet(const DirichletProblem& problem, const RegularizationSchedule& schedule,
                            const SolverOptions& options = {});

/// Ladder over data g + 1/n with floor c = 1/(2n), each stage run through the
/// eps/delta continuation. Asserts u^n <= u^l + 1e-8 + allowance for l < n.
SolveReport solve_maximal(const DirichletProblem& problem, const RegularizationSchedule& schedule,
                          double allowance = 1e-3, const SolverOptions& options = {});

/// Truncated-data run on |x| < 2r. An empty ladder runs the continuation
/// directly with params.c. The support component grown from the initial
/// support is tracked: reaching |x| = r records a warning, 1.5 r throws.
SolveReport solve_cauchy(const CauchyProblem& problem, const RegularizationSchedule& schedule,
                         const SolverOptions& options = {});

/// u_0^r: u0 on |x| <= r, M on |x| >= 2r, and
/// max{u0(x), M + lambda (u0(r x/|x|) - M)} at |x| = 2r - lambda r.
double truncated_data(const std::function<double(const Point&)>& u0, double r, double M, const Point& x);

/// Nodes with u > theta connected (face neighbours) to the seeds.
std::vector<Index> support_component(const ScalarField& u, double theta, const std::vector<Index>& seeds);

/// Largest |x - center| over the given nodes (0 for an empty list).
double max_radius(const GridSpec& grid, const std::vector<Index>& nodes, const Point& center = Point());

}  // namespace ipme
