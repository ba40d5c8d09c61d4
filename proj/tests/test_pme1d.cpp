#include <gtest/gtest.h>

#include <cmath>

#include "ipme/exact.hpp"
#include "ipme/pme1d.hpp"

using namespace ipme;

namespace {

RadialProblem barenblatt_problem(double m, Index nodes, double t0) {
  RadialProblem p;
  p.m = m;
  p.grid = GridSpec::line(nodes, 0.0, 3.0);
  p.t0 = t0;
  p.initial = Array(nodes);
  for (Index i = 0; i < nodes; ++i) {
    Point x(1);
    x << p.grid.coord(0, i);
    p.initial[i] = barenblatt_rho(x, t0, m, 1.0);
  }
  p.right_value = [](double) { return 0.0; };
  return p;
}

double max_error(const ScalarField& rho, double m) {
  double e = 0.0;
  for (Index i = 0; i < rho.grid().size(); ++i)
    e = std::max(e, std::abs(rho[i] - barenblatt_rho(rho.grid().coords(i), rho.t(), m, 1.0)));
  return e;
}

}  // namespace

TEST(Pme1d, ConservesHalfLineMass) {
  const RadialProblem p = barenblatt_problem(2.0, 301, 1.0);
  const double m0 = pme1d_mass(p.grid, p.initial);
  const auto out = pme1d_solve(p, 2.0, {1.5, 2.0});
  for (const auto& f : out) EXPECT_NEAR(pme1d_mass(f.grid(), f.values()), m0, 1e-12 * m0);
}

TEST(Pme1d, ConvergesToBarenblatt) {
  for (double m : {2.0, 3.0}) {
    std::vector<double> err;
    for (Index n : {151, 301, 601}) {
      const RadialProblem p = barenblatt_problem(m, n, 1.0);
      err.push_back(max_error(pme1d_solve(p, 3.0, {}).back(), m));
    }
    EXPECT_LT(err[1], err[0]);
    EXPECT_LT(err[2], err[1]);
    EXPECT_LT(err[2], 0.02 * barenblatt_rho(Point::Zero(1), 3.0, m, 1.0));
  }
}

TEST(Pme1d, LandsOnSnapshotTimes) {
  const RadialProblem p = barenblatt_problem(2.0, 101, 1.0);
  const auto out = pme1d_solve(p, 2.0, {1.25, 1.5});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].t(), 1.25);
  EXPECT_DOUBLE_EQ(out[1].t(), 1.5);
}

TEST(Pme1d, StabilityBoundEnforced) {
  const RadialProblem p = barenblatt_problem(2.0, 101, 1.0);
  const Pme1dState s = pme1d_initial(p);
  const double dt = pme1d_stable_dt(p, s);
  EXPECT_NO_THROW(pme1d_step(p, s, dt));
  EXPECT_THROW(pme1d_step(p, s, 1.5 * dt), ParameterError);
}

TEST(Pme1d, NonnegativeAndClipMassNegligible) {
  RadialProblem p = barenblatt_problem(3.0, 201, 0.5);
  Pme1dState s = pme1d_initial(p);
  const double total = pme1d_mass(p.grid, s.rho);
  for (int i = 0; i < 500; ++i) s = pme1d_step(p, s, 0.9 * pme1d_stable_dt(p, s));
  EXPECT_GE(s.rho.minCoeff(), 0.0);
  EXPECT_LE(s.clipped_mass, 1e-12 * total);
}

TEST(Pme1d, DirichletLeftEnd) {
  RadialProblem p;
  p.m = 2.0;
  p.grid = GridSpec::line(41, 0.0, 1.0);
  p.initial = Array::Zero(41);
  p.left = RadialProblem::Left::Dirichlet;
  p.left_value = [](double) { return 1.0; };
  p.right_value = [](double) { return 0.0; };
  const auto out = pme1d_solve(p, 0.1, {});
  EXPECT_DOUBLE_EQ(out.back()[0], 1.0);
  EXPECT_GT(out.back()[5], 0.0);
}

TEST(Pme1d, ValidatesInput) {
  RadialProblem p = barenblatt_problem(2.0, 11, 1.0);
  p.initial[3] = -1.0;
  EXPECT_THROW(pme1d_initial(p), DomainError);
  p = barenblatt_problem(2.0, 11, 1.0);
  p.left = RadialProblem::Left::Dirichlet;
  EXPECT_THROW(pme1d_initial(p), ParameterError);
}
