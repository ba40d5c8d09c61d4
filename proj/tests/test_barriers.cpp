#include <gtest/gtest.h>

#include <cmath>

#include "ipme/barriers.hpp"

using namespace ipme;

namespace {

// u = s x + 1 + s^2 t solves the equation exactly.
SolveReport linear_run(double s) {
  DirichletProblem p;
  p.grid = GridSpec::cube(1, 41, 0.0, 1.0);
  p.params = Params(2.0, 0.0, 1e-3, 1e-3);
  p.boundary = BoundaryData::from_function([s](const Point& x, double t) { return s * x[0] + 1.0 + s * s * t; });
  p.t_end = 0.5;
  p.snapshot_times = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  return solve_fixed(p);
}

DataNorms linear_norms(double s) {
  DataNorms d;
  d.g0 = [s](const Point& x) { return s * x[0] + 1.0; };
  d.sup_g = s + 1.0;
  d.sup_Dg = s;
  d.sup_D2g = 0.0;
  d.sup_gt = s * s;
  return d;
}

}  // namespace

TEST(TimeLipschitz, LambdaFormula) {
  DataNorms d;
  d.sup_g = 2.0;
  d.sup_Dg = 1.0;
  d.sup_D2g = 3.0;
  d.sup_gt = 0.5;
  const Params p(3.0, 0.1, 0.01, 0.1);
  // max{k|D2g|, sqrt(eps d |D2g| + k(|g| + c)|D2g| + |Dg|^2), sqrt|g_t|}
  const double want = std::max({6.0, std::sqrt(0.01 * 2 * 3.0 + 2.0 * 2.1 * 3.0 + 1.0), std::sqrt(0.5)});
  EXPECT_DOUBLE_EQ(time_lipschitz_lambda(d, p, 2), want);
}

TEST(TimeLipschitz, BarrierDominatesLinearSolution) {
  const double s = 2.0;
  const SolveReport r = linear_run(s);
  const Params p(2.0, 0.0, 1e-3, 1e-3);
  EXPECT_TRUE(barrier_check(r, time_lipschitz_barrier(linear_norms(s), p, 1)));
}

TEST(TimeLipschitz, UndersizedLambdaIsCaught) {
  const double s = 2.0;
  const SolveReport r = linear_run(s);
  const Params p(2.0, 0.0, 1e-3, 1e-3);
  EXPECT_FALSE(barrier_check(r, time_lipschitz_barrier(linear_norms(s), p, 1, 0.5 * s)));
}

TEST(TimeLipschitz, BarrierDominatesBumpRun) {
  DirichletProblem p;
  p.grid = GridSpec::cube(2, 33, -1.0, 1.0);
  p.params = Params(2.0, 0.0, 1e-3, 1e-3);
  Array v(p.grid.size());
  for (Index i = 0; i < p.grid.size(); ++i) v[i] = std::max(0.0, 1.0 - p.grid.coords(i).squaredNorm() / 0.25);
  p.initial_values = v;
  p.boundary = BoundaryData::constant(0.0);
  p.t_end = 0.2;
  p.snapshot_times = {0.05, 0.1, 0.2};
  const SolveReport r = solve_fixed(p);
  // Smooth g0 = 1 + |x|^2 / 2 dominates the bump; sup norms over the square.
  DataNorms d;
  d.g0 = [](const Point& x) { return 1.0 + 0.5 * x.squaredNorm(); };
  d.sup_g = 2.0;
  d.sup_Dg = std::sqrt(2.0);
  d.sup_D2g = 1.0;
  EXPECT_TRUE(barrier_check(r, time_lipschitz_barrier(d, p.params, 2)));
}

TEST(Hoelder, NeedsPositiveFloor) {
  DataNorms d = linear_norms(1.0);
  EXPECT_THROW(hoelder_barrier(d, Params(2.0), Point::Zero(1), 1.0, 1.0), ParameterError);
  const Barrier b = hoelder_barrier(d, Params(2.0, 0.5), Point::Zero(1), 1.0, 1.0);
  EXPECT_GT(b.rho, 0.0);
  EXPECT_LE(b.alpha, 0.5);
  EXPECT_DOUBLE_EQ(b.K, d.sup_g / b.rho);
  Point x(1);
  x << 0.5 * b.rho;
  EXPECT_TRUE(b.region(x, 0.5));
  EXPECT_FALSE(b.region(x, 1.5));
}

TEST(Hoelder, BarrierHoldsNearLinearBoundaryPoint) {
  const double s = 1.0;
  const SolveReport r = linear_run(s);
  const Params p(2.0, 0.5, 1e-3, 1e-3);
  const double t0 = 0.5;
  const Barrier b = hoelder_barrier(linear_norms(s), p, Point::Zero(1), t0, 1.0 + s * s * t0);
  EXPECT_TRUE(barrier_check(r, b));
}

TEST(CauchyBarrier, Constants) {
  const Params p(2.0);
  EXPECT_THROW(cauchy_barrier(p, 1.0, 1.0, 0.2), ParameterError);
  const Barrier b = cauchy_barrier(p, 1.0, 1.0, 0.05);
  EXPECT_GT(b.lambda, 0.0);
  EXPECT_NEAR(b.value(Point::Zero(2), 0.0), 1.05, 1e-15);
}

TEST(CauchyBarrier, DominatesCauchyRun) {
  CauchyProblem c;
  c.grid = GridSpec::cube(2, 81, -1.0, 1.0);
  c.params = Params(2.0, 0.0, 1e-3, 1e-3);
  c.u0 = [](const Point& x) { return std::max(0.0, 0.25 - x.norm()); };
  c.r = 0.5;
  c.M = 0.5;
  c.t_end = 0.03;
  c.snapshot_times = {0.015, 0.03};
  const SolveReport r = solve_cauchy(c, RegularizationSchedule::single(1e-3, 1e-3));
  EXPECT_TRUE(barrier_check(r, cauchy_barrier(c.params, c.M, 0.03, 0.05)));
}
