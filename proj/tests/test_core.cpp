#include <gtest/gtest.h>

#include <random>

#include "ipme/core.hpp"

using namespace ipme;

TEST(Params, DerivedConstants) {
  const Params p(3.0, 0.1, 1e-3, 1e-2);
  EXPECT_DOUBLE_EQ(p.k(), 2.0);
  EXPECT_DOUBLE_EQ(p.p(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.with_eps(0.5).eps(), 0.5);
  EXPECT_DOUBLE_EQ(p.with_eps(0.5).m(), 3.0);
}

TEST(Params, RejectsBadValues) {
  EXPECT_THROW(Params(1.0), ParameterError);
  EXPECT_THROW(Params(0.5), ParameterError);
  EXPECT_THROW(Params(2.0, -1.0), ParameterError);
  EXPECT_THROW(Params(2.0, 0.0, -1e-3), ParameterError);
  EXPECT_THROW(Params(2.0, 0.0, 0.0, -1.0), ParameterError);
  try {
    Params bad(0.5);
  } catch (const ParameterError& e) {
    EXPECT_STREQ(e.what(), "m must exceed 1");
  }
}

TEST(GridSpec, RowMajorIndexing) {
  const GridSpec g = GridSpec::cube(3, 5, -1.0, 1.0);
  EXPECT_EQ(g.size(), 125);
  EXPECT_EQ(g.stride(2), 1);
  EXPECT_EQ(g.stride(1), 5);
  EXPECT_EQ(g.stride(0), 25);
  for (Index i = 0; i < g.size(); ++i) EXPECT_EQ(g.linear_index(g.multi_index(i)), i);
  const Point x = g.coords(g.linear_index({4, 0, 2}));
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], -1.0);
  EXPECT_DOUBLE_EQ(x[2], 0.0);
}

TEST(GridSpec, BoundaryAndNearest) {
  const GridSpec g = GridSpec::cube(2, 9, 0.0, 1.0);
  Index boundary = 0;
  for (Index i = 0; i < g.size(); ++i) boundary += g.is_boundary(i);
  EXPECT_EQ(boundary, 32);
  Point x(2);
  x << 0.26, 2.0;
  EXPECT_EQ(g.multi_index(g.nearest(x))[0], 2);
  EXPECT_EQ(g.multi_index(g.nearest(x))[1], 8);
}

TEST(GridSpec, RejectsTooFewNodes) { EXPECT_THROW(GridSpec::cube(2, 2, 0.0, 1.0), ParameterError); }

TEST(ScalarField, InterpolationIsExactForBilinear) {
  const GridSpec g = GridSpec::cube(2, 7, -1.0, 2.0);
  auto f = [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1]; };
  const ScalarField u = ScalarField::sample(g, f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Point x(2);
    x << U(rng), U(rng);
    EXPECT_NEAR(u.interpolate(x), f(x), 1e-12);
  }
}

TEST(Transforms, PressureDensityInverse) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 5.0), M(1.05, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double rho = U(rng), m = M(rng);
    const double u = pressure_from_density(rho, m);
    EXPECT_NEAR(density_from_pressure(u, m), rho, 1e-12 * (1.0 + rho));
  }
  const GridSpec g = GridSpec::line(5, 0.0, 1.0);
  const ScalarField rho(g, Array::LinSpaced(5, 0.0, 1.0));
  const ScalarField back = density_from_pressure(pressure_from_density(rho, Params(2.0)), Params(2.0));
  EXPECT_TRUE(back.values().isApprox(rho.values(), 1e-14));
}

TEST(Schedule, ValidatesEntries) {
  RegularizationSchedule s = RegularizationSchedule::single(1e-3, 1e-3);
  EXPECT_NO_THROW(s.validate());
  s.delta = {};
  EXPECT_THROW(s.validate(), ParameterError);
  s = {{1e-3}, {0.0}, {}};
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(BoundaryData, LiftedAddsConstant) {
  const BoundaryData g = BoundaryData::from_function([](const Point& x, double t) { return x[0] + t; });
  Point x(1);
  x << 0.25;
  EXPECT_DOUBLE_EQ(g.lifted(0.5).value(x, 0, 1.0), 1.75);
}
