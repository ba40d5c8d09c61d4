#include "ipme/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "ipme/operators.hpp"

namespace ipme {

DomainMask DomainMask::ball(Point center, double radius) {
  if (!(radius > 0.0)) throw ParameterError("ball radius must be positive");
  DomainMask d;
  d.shape = Shape::Ball;
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

bool DomainMask::inside(const Point& x) const {
  if (shape == Shape::Box) return true;
  const double r = center.size() == 0 ? x.norm() : (x - center).norm();
  return r < radius;
}

namespace {

// Nodes that are updated (interior of the box and inside the domain) and the
// rest, which carry boundary data.
struct Layout {
  std::vector<Index> active;
  std::vector<Index> fixed;
  std::vector<Point> fixed_x;
};

Layout make_layout(const GridSpec& grid, const DomainMask& domain) {
  Layout lay;
  for (Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.coords(i);
    if (!grid.is_boundary(i) && domain.inside(x)) {
      lay.active.push_back(i);
    } else {
      lay.fixed.push_back(i);
      lay.fixed_x.push_back(x);
    }
  }
  return lay;
}

struct KernelStats {
  double max_beta = 0.0;
  double max_grad = 0.0;
};

// rhs = eps Δu + k beta_c(u) Δ∞_δ u + |Du|^2 at every active node.
template <int Dim>
KernelStats evaluate_rhs(const GridSpec& grid, const double* u, double* rhs, const std::vector<Index>& active,
                         const Params& params, GradientScheme scheme) {
  Index s[Dim];
  double ih[Dim], ih2[Dim], i2h[Dim];
  for (int a = 0; a < Dim; ++a) {
    s[a] = grid.stride(a);
    ih[a] = 1.0 / grid.h(a);
    ih2[a] = ih[a] * ih[a];
    i2h[a] = 0.5 * ih[a];
  }
  const double cross = testing::stencil_fault() ? -1.0 : 1.0;
  const double eps = params.eps(), k = params.k(), c = params.c();
  const double d2 = params.delta() * params.delta();
  const double inv_dim = 1.0 / Dim;
  const bool upwind = scheme == GradientScheme::Upwind;

  KernelStats st;
  const std::size_t n = active.size();
  for (std::size_t q = 0; q < n; ++q) {
    const Index i = active[q];
    const double u0 = u[i];
    double g[Dim], hd[Dim];
    double hx[Dim][Dim];
    double grad2 = 0.0, lap = 0.0, up2 = 0.0;
    for (int a = 0; a < Dim; ++a) {
      const double up = u[i + s[a]], dn = u[i - s[a]];
      g[a] = (up - dn) * i2h[a];
      hd[a] = (up - 2.0 * u0 + dn) * ih2[a];
      grad2 += g[a] * g[a];
      lap += hd[a];
      if (upwind) {
        const double dm = std::max((u0 - dn) * ih[a], 0.0);
        const double dp = std::min((up - u0) * ih[a], 0.0);
        up2 += std::max(dm * dm, dp * dp);
      }
    }
    double quad = 0.0;
    for (int a = 0; a < Dim; ++a) {
      quad += g[a] * g[a] * hd[a];
      for (int b = a + 1; b < Dim; ++b) {
        hx[a][b] = cross * (u[i + s[a] + s[b]] - u[i + s[a] - s[b]] - u[i - s[a] + s[b]] + u[i - s[a] - s[b]]) *
                   (0.25 * ih[a] * ih[b]);
        quad += 2.0 * g[a] * g[b] * hx[a][b];
      }
    }
    const double denom = grad2 + d2;
    if (denom == 0.0) throw SingularPointError("infinity-Laplacian undefined at a critical point with delta = 0");
    const double inf_lap = (quad + d2 * lap * inv_dim) / denom;
    const double beta = beta_or_abs(u0, c);
    const double adv = upwind ? up2 : grad2;
    rhs[q] = eps * lap + k * beta * inf_lap + adv;
    st.max_beta = std::max(st.max_beta, beta);
    st.max_grad = std::max(st.max_grad, std::max(grad2, adv));
  }
  st.max_grad = std::sqrt(st.max_grad);
  return st;
}

KernelStats evaluate(const GridSpec& grid, const double* u, double* rhs, const std::vector<Index>& active,
                     const Params& params, GradientScheme scheme) {
  switch (grid.dim()) {
    case 1: return evaluate_rhs<1>(grid, u, rhs, active, params, scheme);
    case 2: return evaluate_rhs<2>(grid, u, rhs, active, params, scheme);
    default: return evaluate_rhs<3>(grid, u, rhs, active, params, scheme);
  }
}

double dt_from_stats(const GridSpec& grid, const Params& params, const KernelStats& st, double safety) {
  const double h = grid.min_h();
  const double diff = params.eps() * grid.dim() + params.k() * st.max_beta;
  const double dt_diff = diff > 0.0 ? h * h / (2.0 * diff) : std::numeric_limits<double>::infinity();
  const double dt_adv = h / (2.0 * st.max_grad + 1e-300);
  return safety * std::min(dt_diff, dt_adv);
}

void apply_boundary(ScalarField& u, const Layout& lay, const BoundaryData& bd, double t) {
  for (std::size_t q = 0; q < lay.fixed.size(); ++q) u[lay.fixed[q]] = bd.value(lay.fixed_x[q], lay.fixed[q], t);
}

void check_params(const Params& params) {
  if (!(params.delta() > 0.0)) throw ParameterError("the solver needs delta > 0");
}

Array initial_values(const DirichletProblem& problem) {
  if (problem.initial_values) {
    if (problem.initial_values->size() != problem.grid.size())
      throw ParameterError("initial values do not match the grid");
    return *problem.initial_values;
  }
  if (!problem.boundary.initial) throw ParameterError("problem has no initial data");
  Array v(problem.grid.size());
  for (Index i = 0; i < problem.grid.size(); ++i) v[i] = problem.boundary.initial(problem.grid.coords(i));
  return v;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) { return (a.values() - b.values()).abs().maxCoeff(); }

void fill_manifest(SolveReport& rep, const DirichletProblem& problem, ProblemKind kind,
                   const RegularizationSchedule& schedule) {
  RunManifest& man = rep.manifest;
  man.params = problem.params;
  man.grid = problem.grid;
  man.problem = kind;
  man.schedule = schedule;
  man.dt = rep.dt;
  man.stopping_reason = "reached t_end";
  man.metrics["max_u"] = rep.max_u;
  man.metrics["min_interior"] = rep.min_interior;
  man.metrics["t_end"] = problem.t_end;
  man.metrics["steps"] = static_cast<double>(rep.dt.steps);
}

}  // namespace

double cfl_dt(const ScalarField& u, const Params& params, double safety, const DomainMask& domain) {
  const Layout lay = make_layout(u.grid(), domain);
  std::vector<double> rhs(lay.active.size());
  const KernelStats st = evaluate(u.grid(), u.values().data(), rhs.data(), lay.active, params, GradientScheme::Centered);
  return dt_from_stats(u.grid(), params, st, safety);
}

ScalarField step_explicit(const ScalarField& u, double dt, const Params& params, const BoundaryData& boundary,
                          const DomainMask& domain, const SolverOptions& options) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  const GridSpec& grid = u.grid();
  const Layout lay = make_layout(grid, domain);
  std::vector<double> rhs(lay.active.size());
  const KernelStats st = evaluate(grid, u.values().data(), rhs.data(), lay.active, params, options.gradient);
  const double limit = dt_from_stats(grid, params, st, options.safety);
  if (dt > limit * (1.0 + 1e-12)) throw ParameterError("time step violates the CFL bound");

  ScalarField next = u;
  const double tol = options.negative_tol * (1.0 + u.values().abs().maxCoeff());
  for (std::size_t q = 0; q < lay.active.size(); ++q) {
    const double v = u[lay.active[q]] + dt * rhs[q];
    if (!(v >= -tol)) throw InstabilityError("explicit step produced a negative or non-finite value");
    next[lay.active[q]] = v;
  }
  next.set_t(u.t() + dt);
  apply_boundary(next, lay, boundary, next.t());
  return next;
}

SolveReport solve_fixed(const DirichletProblem& problem, const SolverOptions& options) {
  check_params(problem.params);
  if (!(problem.t_end > problem.t_start)) throw ParameterError("t_end must exceed t_start");
  std::vector<double> times = problem.snapshot_times;
  if (times.empty()) times.push_back(problem.t_end);
  std::sort(times.begin(), times.end());
  for (double t : times)
    if (t < problem.t_start || t > problem.t_end) throw ParameterError("snapshot time outside the run interval");
  if (times.back() < problem.t_end) times.push_back(problem.t_end);

  const auto clock0 = std::chrono::steady_clock::now();
  const GridSpec& grid = problem.grid;
  const Params& params = problem.params;
  const Layout lay = make_layout(grid, problem.domain);
  if (lay.active.empty()) throw ParameterError("domain has no interior nodes");

  ScalarField u(grid, initial_values(problem), problem.t_start);
  apply_boundary(u, lay, problem.boundary, u.t());
  const bool moving_boundary = problem.boundary.kind == BoundaryData::Kind::Function && problem.boundary.time_dependent;

  SolveReport rep;
  rep.dt.safety = options.safety;
  rep.dt.dt_min = std::numeric_limits<double>::infinity();
  rep.max_u = u.values().maxCoeff();
  rep.min_interior = std::numeric_limits<double>::infinity();
  for (Index i : lay.active) rep.min_interior = std::min(rep.min_interior, u[i]);

  std::vector<double> rhs(lay.active.size());
  double* uv = u.values().data();
  std::size_t next = 0;
  const std::size_t requested = problem.snapshot_times.size();
  auto flush = [&] {
    while (next < times.size() && times[next] <= u.t()) {
      if (next < requested || requested == 0) rep.snapshots.push_back(u);
      ++next;
    }
  };
  flush();

  while (next < times.size()) {
    const double target = times[next];
    const KernelStats st = evaluate(grid, uv, rhs.data(), lay.active, params, options.gradient);
    double dt = dt_from_stats(grid, params, st, options.safety);
    bool landing = false;
    if (!(u.t() + dt < target)) {
      dt = target - u.t();
      landing = true;
    }
    double umax = 0.0;
    for (std::size_t q = 0; q < lay.active.size(); ++q) umax = std::max(umax, std::abs(uv[lay.active[q]]));
    const double tol = options.negative_tol * (1.0 + umax);
    double step_min = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < lay.active.size(); ++q) {
      const Index i = lay.active[q];
      const double v = uv[i] + dt * rhs[q];
      if (!(v >= -tol)) {
        std::ostringstream os;
        os << "explicit step produced " << v << " at node " << i << " (t = " << u.t() << ")";
        throw InstabilityError(os.str());
      }
      uv[i] = v;
      step_min = std::min(step_min, v);
    }
    u.set_t(landing ? target : u.t() + dt);
    if (moving_boundary) apply_boundary(u, lay, problem.boundary, u.t());

    rep.dt.steps += 1;
    rep.dt.dt_min = std::min(rep.dt.dt_min, dt);
    rep.dt.dt_max = std::max(rep.dt.dt_max, dt);
    rep.min_interior = std::min(rep.min_interior, step_min);
    rep.max_u = std::max(rep.max_u, u.values().maxCoeff());
    if (rep.dt.steps > options.max_steps) throw InstabilityError("step limit exceeded");
    flush();
  }
  if (rep.dt.steps == 0) rep.dt.dt_min = 0.0;

  rep.final_field = u;
  StageRecord stage;
  stage.eps = params.eps();
  stage.delta = params.delta();
  stage.c = params.c();
  stage.diff_prev = std::numeric_limits<double>::quiet_NaN();
  stage.steps = rep.dt.steps;
  rep.stages.push_back(stage);
  fill_manifest(rep, problem, ProblemKind::Dirichlet, RegularizationSchedule::single(params.eps(), params.delta()));
  rep.manifest.wall_seconds.push_back(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count());
  return rep;
}

SolveReport solve_dirichlet(const DirichletProblem& problem, const RegularizationSchedule& schedule,
                            const SolverOptions& options) {
  schedule.validate();
  if (schedule.eps.empty() || schedule.delta.empty()) throw ParameterError("schedule needs eps and delta entries");
  std::vector<std::pair<double, double>> pairs;
  for (double e : schedule.eps) pairs.emplace_back(e, schedule.delta.front());
  for (std::size_t j = 1; j < schedule.delta.size(); ++j) pairs.emplace_back(schedule.eps.back(), schedule.delta[j]);

  SolveReport out;
  std::vector<StageRecord> stages;
  std::vector<double> walls;
  DtRecord dt_all;
  dt_all.safety = options.safety;
  dt_all.dt_min = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double min_int = std::numeric_limits<double>::infinity();
  std::vector<std::string> warnings;

  for (std::size_t s = 0; s < pairs.size(); ++s) {
    DirichletProblem stage_problem = problem;
    stage_problem.params = problem.params.with_eps(pairs[s].first).with_delta(pairs[s].second);
    SolveReport rep = solve_fixed(stage_problem, options);
    StageRecord rec = rep.stages.front();
    if (s > 0) {
      rec.diff_prev = max_abs_diff(rep.final_field, out.final_field);
      if (s > 1 && !(rec.diff_prev < stages.back().diff_prev)) {
        out.continuation_warning = true;
        std::ostringstream os;
        os << "continuation differences not decreasing at stage " << s << " (eps = " << rec.eps
           << ", delta = " << rec.delta << "): " << rec.diff_prev << " after " << stages.back().diff_prev;
        warnings.push_back(os.str());
      }
    }
    stages.push_back(rec);
    walls.insert(walls.end(), rep.manifest.wall_seconds.begin(), rep.manifest.wall_seconds.end());
    dt_all.steps += rep.dt.steps;
    dt_all.dt_min = std::min(dt_all.dt_min, rep.dt.dt_min);
    dt_all.dt_max = std::max(dt_all.dt_max, rep.dt.dt_max);
    max_u = std::max(max_u, rep.max_u);
    min_int = std::min(min_int, rep.min_interior);
    out.final_field = std::move(rep.final_field);
    out.snapshots = std::move(rep.snapshots);
  }
  out.stages = std::move(stages);
  out.dt = dt_all;
  out.max_u = max_u;
  out.min_interior = min_int;
  DirichletProblem last = problem;
  last.params = problem.params.with_eps(pairs.back().first).with_delta(pairs.back().second);
  fill_manifest(out, last, ProblemKind::Dirichlet, schedule);
  out.manifest.wall_seconds = walls;
  out.manifest.warnings = warnings;
  out.manifest.metrics["continuation_warning"] = out.continuation_warning ? 1.0 : 0.0;
  if (out.stages.size() > 1) out.manifest.metrics["last_continuation_diff"] = out.stages.back().diff_prev;
  return out;
}

SolveReport solve_maximal(const DirichletProblem& problem, const RegularizationSchedule& schedule, double allowance,
                          const SolverOptions& options) {
  schedule.validate();
  if (schedule.n.empty()) throw ParameterError("ladder needs at least one n");
  const Array base = initial_values(problem);
  if ((base < 0.0).any()) throw DomainError("data must be nonnegative");

  SolveReport out;
  std::vector<StageRecord> stages;
  std::vector<std::vector<ScalarField>> history;
  std::vector<double> walls;
  std::vector<std::string> warnings;
  DtRecord dt_all;
  dt_all.safety = options.safety;
  dt_all.dt_min = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double min_int = std::numeric_limits<double>::infinity();
  const double tol = 1e-8 + allowance;

  for (int n : schedule.n) {
    const double lift = 1.0 / n;
    DirichletProblem stage_problem = problem;
    stage_problem.boundary = problem.boundary.lifted(lift);
    stage_problem.initial_values = base + lift;
    stage_problem.params = problem.params.with_c(0.5 * lift);
    SolveReport rep = solve_dirichlet(stage_problem, schedule, options);

    // u^n <= u^l for every earlier stage l, snapshot by snapshot.
    std::vector<ScalarField> current = rep.snapshots;
    current.push_back(rep.final_field);
    for (std::size_t l = 0; l < history.size(); ++l) {
      for (std::size_t j = 0; j < current.size() && j < history[l].size(); ++j) {
        const double excess = (current[j].values() - history[l][j].values()).maxCoeff();
        if (excess > tol) {
          std::ostringstream os;
          os << "ladder ordering violated: u^" << n << " exceeds u^" << stages[l].n << " by " << excess << " at t = "
             << current[j].t();
          throw OrderingViolation(os.str());
        }
      }
    }

    StageRecord rec = rep.stages.back();
    rec.n = n;
    rec.c = 0.5 * lift;
    rec.diff_prev = history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : max_abs_diff(rep.final_field, out.final_field);
    stages.push_back(rec);
    history.push_back(std::move(current));
    walls.insert(walls.end(), rep.manifest.wall_seconds.begin(), rep.manifest.wall_seconds.end());
    warnings.insert(warnings.end(), rep.manifest.warnings.begin(), rep.manifest.warnings.end());
    out.continuation_warning = out.continuation_warning || rep.continuation_warning;
    dt_all.steps += rep.dt.steps;
    dt_all.dt_min = std::min(dt_all.dt_min, rep.dt.dt_min);
    dt_all.dt_max = std::max(dt_all.dt_max, rep.dt.dt_max);
    max_u = std::max(max_u, rep.max_u);
    min_int = std::min(min_int, rep.min_interior);
    out.final_field = std::move(rep.final_field);
    out.snapshots = std::move(rep.snapshots);
  }
  out.stages = std::move(stages);
  out.dt = dt_all;
  out.max_u = max_u;
  out.min_interior = min_int;
  fill_manifest(out, problem, ProblemKind::Maximal, schedule);
  out.manifest.wall_seconds = walls;
  out.manifest.warnings = warnings;
  out.manifest.metrics["continuation_warning"] = out.continuation_warning ? 1.0 : 0.0;
  return out;
}

double truncated_data(const std::function<double(const Point&)>& u0, double r, double M, const Point& x) {
  const double rad = x.norm();
  if (rad <= r) return u0(x);
  if (rad >= 2.0 * r) return M;
  const double lambda = (2.0 * r - rad) / r;
  const Point xr = (r / rad) * x;
  return std::max(u0(x), M + lambda * (u0(xr) - M));
}

std::vector<Index> support_component(const ScalarField& u, double theta, const std::vector<Index>& seeds) {
  const GridSpec& grid = u.grid();
  std::vector<char> seen(static_cast<std::size_t>(grid.size()), 0);
  std::deque<Index> queue;
  std::vector<Index> out;
  for (Index s : seeds) {
    if (s < 0 || s >= grid.size()) throw RangeError("seed node outside the grid");
    if (u[s] > theta && !seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    out.push_back(i);
    const auto ijk = grid.multi_index(i);
    for (int a = 0; a < grid.dim(); ++a) {
      if (ijk[a] > 0) {
        const Index j = i - grid.stride(a);
        if (!seen[j] && u[j] > theta) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
      if (ijk[a] < grid.n(a) - 1) {
        const Index j = i + grid.stride(a);
        if (!seen[j] && u[j] > theta) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double max_radius(const GridSpec& grid, const std::vector<Index>& nodes, const Point& center) {
  double r = 0.0;
  for (Index i : nodes) {
    const Point x = grid.coords(i);
    r = std::max(r, center.size() == 0 ? x.norm() : (x - center).norm());
  }
  return r;
}

SolveReport solve_cauchy(const CauchyProblem& problem, const RegularizationSchedule& schedule,
                         const SolverOptions& options) {
  if (!problem.u0) throw ParameterError("Cauchy problem needs initial data");
  if (!(problem.r > 0.0)) throw ParameterError("truncation radius must be positive");
  const GridSpec& grid = problem.grid;
  for (int a = 0; a < grid.dim(); ++a) {
    const double lo = grid.origin(a), hi = grid.coord(a, grid.n(a) - 1);
    if (lo > -2.0 * problem.r || hi < 2.0 * problem.r) throw ParameterError("grid must cover |x| <= 2r");
  }

  Array init(grid.size());
  double max_u0 = 0.0;
  std::vector<Index> seeds;
  for (Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.coords(i);
    if (x.norm() <= problem.r) max_u0 = std::max(max_u0, problem.u0(x));
  }
  if (max_u0 < 0.0) throw DomainError("initial data must be nonnegative");
  if (problem.M < max_u0) throw ParameterError("truncation level M must dominate the initial data");
  for (Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.coords(i);
    init[i] = truncated_data(problem.u0, problem.r, problem.M, x);
    if (x.norm() < problem.r && init[i] > 1e-6 * max_u0) seeds.push_back(i);
  }

  DirichletProblem dp;
  dp.grid = grid;
  dp.params = problem.params;
  dp.boundary = BoundaryData::constant(problem.M);
  dp.domain = DomainMask::ball(Point::Zero(grid.dim()), 2.0 * problem.r);
  dp.t_start = problem.t_start;
  dp.t_end = problem.t_end;
  dp.snapshot_times = problem.snapshot_times;
  dp.initial_values = init;

  SolveReport rep = schedule.n.empty() ? solve_dirichlet(dp, schedule, options)
                                        : solve_maximal(dp, schedule, 1e-3, options);
  const double floor = schedule.n.empty() ? 0.0 : 1.0 / schedule.n.back();

  std::vector<const ScalarField*> fields;
  for (const auto& s : rep.snapshots) fields.push_back(&s);
  fields.push_back(&rep.final_field);
  double reach = 0.0;
  for (const ScalarField* f : fields) {
    const double theta = floor + 1e-6 * (f->values().maxCoeff() - floor);
    const auto comp = support_component(*f, theta, seeds);
    const double rad = max_radius(grid, comp);
    reach = std::max(reach, rad);
    if (rad >= 1.5 * problem.r) {
      std::ostringstream os;
      os << "support reached |x| = " << rad << " >= 1.5 r at t = " << f->t() << "; enlarge r";
      throw TruncationError(os.str());
    }
  }
  if (reach >= problem.r) {
    rep.truncation_warning = true;
    rep.manifest.warnings.push_back("support reached the truncation radius r");
  }
  rep.manifest.problem = ProblemKind::Cauchy;
  rep.manifest.metrics["support_reach"] = reach;
  rep.manifest.metrics["M"] = problem.M;
  rep.manifest.metrics["r"] = problem.r;
  return rep;
}

}  // namespace ipme
