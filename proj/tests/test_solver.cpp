#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ipme/exact.hpp"
#include "ipme/solver.hpp"

using namespace ipme;

namespace {

DirichletProblem data_problem(const GridSpec& g, const Array& data, double t_end, double eps = 1e-3,
                              double delta = 1e-3) {
  DirichletProblem p;
  p.grid = g;
  p.params = Params(2.0, 0.0, eps, delta);
  p.initial_values = data;
  p.boundary = BoundaryData::sampled(data, {});
  p.t_end = t_end;
  return p;
}

Array bump(const GridSpec& g, double amplitude, double radius, double cx = 0.0) {
  Array v(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    Point x = g.coords(i);
    x[0] -= cx;
    v[i] = amplitude * std::max(0.0, 1.0 - x.squaredNorm() / (radius * radius));
  }
  return v;
}

// C^1 bump: the centered scheme is not monotone across kinks.
Array smooth_bump(const GridSpec& g, double amplitude, double radius, double cx) {
  return bump(g, 1.0, radius, cx).square() * amplitude;
}

}  // namespace

TEST(Solver, ConstantDataIsStationary) {
  const GridSpec g = GridSpec::cube(2, 17, 0.0, 1.0);
  const SolveReport r = solve_fixed(data_problem(g, Array::Constant(g.size(), 0.7), 0.3));
  EXPECT_LT((r.final_field.values() - 0.7).abs().maxCoeff(), 1e-14);
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_DOUBLE_EQ(r.snapshots[0].t(), 0.3);
}

TEST(Solver, LinearSolutionIsReproduced) {
  // u = a.x + b + |a|^2 t solves the equation for any eps, delta.
  const GridSpec g = GridSpec::cube(2, 21, -1.0, 1.0);
  auto f = [](const Point& x, double t) { return 0.3 * x[0] - 0.4 * x[1] + 1.0 + 0.25 * t; };
  DirichletProblem p;
  p.grid = g;
  p.params = Params(3.0, 0.0, 1e-2, 1e-2);
  p.boundary = BoundaryData::from_function(f);
  p.t_end = 0.5;
  const SolveReport r = solve_fixed(p);
  double err = 0.0;
  for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r.final_field[i] - f(g.coords(i), 0.5)));
  EXPECT_LT(err, 1e-12);
}

TEST(Solver, BarenblattConvergesUnderRefinement) {
  std::vector<double> err;
  for (Index n : {33, 65}) {
    const GridSpec g = GridSpec::cube(2, n, -1.5, 1.5);
    ExactSolutionSpec s;
    s.kind = ExactKind::BarenblattU;
    s.params = Params(2.0);
    const auto sol = std::make_shared<ExactSolution>(s);
    DirichletProblem p;
    p.grid = g;
    p.params = Params(2.0, 0.0, 1e-4, 1e-3);
    p.t_start = 1.0;
    p.t_end = 2.0;
    p.boundary = BoundaryData::from_function([sol](const Point& x, double t) { return sol->u(x, t); });
    p.initial_values = sample_exact(*sol, g, 1.0).values();
    const SolveReport r = solve_fixed(p);
    err.push_back((r.final_field.values() - sample_exact(*sol, g, 2.0).values()).abs().maxCoeff());
  }
  EXPECT_LT(err[1], err[0]);
  EXPECT_LT(err[1], 0.02);
}

TEST(Solver, RequiresPositiveDelta) {
  const GridSpec g = GridSpec::cube(1, 9, 0.0, 1.0);
  EXPECT_THROW(solve_fixed(data_problem(g, Array::Ones(g.size()), 0.1, 1e-3, 0.0)), ParameterError);
}

TEST(Solver, ExplicitStepEnforcesCfl) {
  const GridSpec g = GridSpec::cube(2, 17, -1.0, 1.0);
  const ScalarField u(g, bump(g, 1.0, 0.6));
  const Params p(2.0, 0.0, 1e-3, 1e-3);
  const double dt = cfl_dt(u, p);
  EXPECT_GT(dt, 0.0);
  EXPECT_NO_THROW(step_explicit(u, dt, p, BoundaryData::constant(0.0)));
  EXPECT_THROW(step_explicit(u, 2.0 * dt, p, BoundaryData::constant(0.0)), ParameterError);
}

TEST(Solver, SnapshotsAtRequestedTimes) {
  const GridSpec g = GridSpec::cube(1, 33, -1.0, 1.0);
  DirichletProblem p = data_problem(g, bump(g, 1.0, 0.5), 0.2);
  p.snapshot_times = {0.05, 0.1, 0.2};
  const SolveReport r = solve_fixed(p);
  ASSERT_EQ(r.snapshots.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r.snapshots[i].t(), p.snapshot_times[i]);
  p.snapshot_times = {0.5};
  EXPECT_THROW(solve_fixed(p), ParameterError);
}

TEST(Solver, OrderedDataStayOrdered) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const GridSpec g = GridSpec::cube(2, 17, -1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Array lo = smooth_bump(g, U(rng), 0.3 + 0.5 * U(rng), 0.4 * U(rng) - 0.2);
    const Array hi = lo + smooth_bump(g, 0.5 * U(rng), 0.3 + 0.5 * U(rng), 0.4 * U(rng) - 0.2) + 0.01 * U(rng);
    DirichletProblem a = data_problem(g, lo, 0.1), b = data_problem(g, hi, 0.1);
    a.snapshot_times = b.snapshot_times = {0.02, 0.05, 0.1};
    const SolveReport ra = solve_fixed(a), rb = solve_fixed(b);
    for (std::size_t j = 0; j < ra.snapshots.size(); ++j)
      EXPECT_LE((ra.snapshots[j].values() - rb.snapshots[j].values()).maxCoeff(), 1e-8 + 1e-3);
  }
}

TEST(Continuation, StageOrder) {
  const GridSpec g = GridSpec::cube(1, 17, -1.0, 1.0);
  const DirichletProblem p = data_problem(g, bump(g, 1.0, 0.5), 0.05);
  const RegularizationSchedule s{{1e-2, 1e-3}, {1e-2, 1e-3}, {}};
  const SolveReport r = solve_dirichlet(p, s);
  ASSERT_EQ(r.stages.size(), 3u);
  EXPECT_EQ(r.stages[0].eps, 1e-2);
  EXPECT_EQ(r.stages[0].delta, 1e-2);
  EXPECT_EQ(r.stages[1].eps, 1e-3);
  EXPECT_EQ(r.stages[1].delta, 1e-2);
  EXPECT_EQ(r.stages[2].eps, 1e-3);
  EXPECT_EQ(r.stages[2].delta, 1e-3);
  EXPECT_GT(r.stages[1].diff_prev, 0.0);
}

TEST(MaximalLadder, MonotoneInN) {
  const GridSpec g = GridSpec::cube(1, 33, -1.0, 1.0);
  DirichletProblem p = data_problem(g, bump(g, 1.0, 0.5), 0.1);
  p.snapshot_times = {0.05, 0.1};
  const RegularizationSchedule s{{1e-3}, {1e-3}, {1, 2, 4, 8}};
  const SolveReport r = solve_maximal(p, s);
  ASSERT_EQ(r.stages.size(), 4u);
  EXPECT_DOUBLE_EQ(r.stages[3].c, 1.0 / 16.0);
  // Successive differences shrink as the lift 1/n does.
  EXPECT_LT(r.stages[3].diff_prev, r.stages[1].diff_prev);
  EXPECT_FALSE(r.continuation_warning);
}

TEST(Cauchy, TruncatedDataShape) {
  auto u0 = [](const Point& x) { return std::max(0.0, 0.5 - x.norm()); };
  Point x(2);
  x << 0.2, 0.0;
  EXPECT_DOUBLE_EQ(truncated_data(u0, 1.0, 2.0, x), 0.3);
  x << 2.5, 0.0;
  EXPECT_DOUBLE_EQ(truncated_data(u0, 1.0, 2.0, x), 2.0);
  // |x| = 2r - lambda r with lambda = 1/2: M + (u0(r x/|x|) - M)/2 = 1.
  x << 0.0, 1.5;
  EXPECT_DOUBLE_EQ(truncated_data(u0, 1.0, 2.0, x), 1.0);
}

TEST(Cauchy, BoundedByDataAndLevel) {
  CauchyProblem p;
  p.grid = GridSpec::cube(2, 49, -1.5, 1.5);
  p.params = Params(2.0, 0.0, 1e-3, 1e-3);
  p.u0 = [](const Point& x) { return 0.8 * std::max(0.0, 1.0 - x.squaredNorm() / 0.09); };
  p.r = 0.75;
  p.M = 0.8;
  p.t_end = 0.05;
  p.snapshot_times = {0.01, 0.03, 0.05};
  const SolveReport r = solve_cauchy(p, RegularizationSchedule::single(1e-3, 1e-3));
  for (const auto& s : r.snapshots) EXPECT_LE(s.values().maxCoeff(), 0.8 + 1e-6);
  EXPECT_FALSE(r.truncation_warning);
}

TEST(Cauchy, TruncationDetected) {
  CauchyProblem p;
  p.grid = GridSpec::cube(1, 81, -1.0, 1.0);
  p.params = Params(2.0, 0.0, 1e-3, 1e-3);
  p.u0 = [](const Point& x) { return std::max(0.0, 1.0 - std::abs(x[0]) / 0.2); };
  p.r = 0.5;
  p.M = 1.0;
  p.t_end = 2.0;
  EXPECT_THROW(solve_cauchy(p, RegularizationSchedule::single(1e-3, 1e-3)), TruncationError);
  p.grid = GridSpec::cube(1, 41, -0.5, 0.5);
  EXPECT_THROW(solve_cauchy(p, RegularizationSchedule::single(1e-3, 1e-3)), ParameterError);
}

TEST(Support, FloodFillFollowsFaceNeighbours) {
  const GridSpec g = GridSpec::cube(2, 5, 0.0, 4.0);
  Array v = Array::Zero(g.size());
  v[g.linear_index({1, 1, 0})] = 1.0;
  v[g.linear_index({1, 2, 0})] = 1.0;
  v[g.linear_index({3, 3, 0})] = 1.0;  // separate component
  const auto comp = support_component(ScalarField(g, v), 0.5, {g.linear_index({1, 1, 0})});
  EXPECT_EQ(comp.size(), 2u);
  Point c(2);
  c << 1.0, 1.0;
  EXPECT_DOUBLE_EQ(max_radius(g, comp, c), 1.0);
}

TEST(Domain, BallMaskHoldsOutsideNodes) {
  const GridSpec g = GridSpec::cube(2, 21, -1.0, 1.0);
  DirichletProblem p = data_problem(g, Array::Zero(g.size()), 0.1);
  p.domain = DomainMask::ball(Point::Zero(2), 0.5);
  p.boundary = BoundaryData::constant(0.3);
  const SolveReport r = solve_fixed(p);
  for (Index i = 0; i < g.size(); ++i)
    if (g.coords(i).norm() >= 0.5) EXPECT_DOUBLE_EQ(r.final_field[i], 0.3);
  EXPECT_GT(r.final_field[g.nearest(Point::Zero(2))], 0.0);
}
