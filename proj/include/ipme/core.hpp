#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipme/errors.hpp"

namespace ipme {

using Index = Eigen::Index;

// Points and small matrices live on the stack; d is at most 3.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Array = Eigen::ArrayXd;

/// Model and regularization constants.
///
/// k = m - 1 and p = 1/m are derived, never set independently. p = 1/m is the
/// exponent of the radial profile equation g'' + g^p = 0 obtained by writing
/// g = lambda^{-m/(m-1)} F^m in -Δ∞(F^m) = lambda F.
class Params {
 public:
  explicit Params(double m, double c = 0.0, double eps = 0.0, double delta = 0.0);

  double m() const { return m_; }
  double k() const { return k_; }
  double p() const { return p_; }
  double c() const { return c_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }

  Params with_c(double c) const { return Params(m_, c, eps_, delta_); }
  Params with_eps(double eps) const { return Params(m_, c_, eps, delta_); }
  Params with_delta(double delta) const { return Params(m_, c_, eps_, delta); }

 private:
  double m_, k_, p_, c_, eps_, delta_;
};

/// Uniform tensor grid. Nodes sit at cell corners, boundary included; `n`
/// holds node counts per axis and node i along axis a is at origin[a] + i*h[a].
class GridSpec {
 public:
  GridSpec(int dim, std::array<Index, 3> n, std::array<double, 3> h, std::array<double, 3> origin);

  /// Grid with `nodes` nodes per axis spanning [lo, hi]^dim.
  static GridSpec cube(int dim, Index nodes, double lo, double hi);
  /// 1-d grid on [lo, hi].
  static GridSpec line(Index nodes, double lo, double hi) { return cube(1, nodes, lo, hi); }

  int dim() const { return dim_; }
  Index n(int axis) const { return n_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  const std::array<Index, 3>& n() const { return n_; }
  const std::array<double, 3>& h() const { return h_; }
  const std::array<double, 3>& origin() const { return origin_; }
  double min_h() const;

  Index size() const;
  /// Row-major: the last axis varies fastest.
  Index stride(int axis) const { return stride_[axis]; }
  std::array<Index, 3> multi_index(Index node) const;
  Index linear_index(const std::array<Index, 3>& ijk) const;
  Point coords(Index node) const;
  double coord(int axis, Index i) const { return origin_[axis] + static_cast<double>(i) * h_[axis]; }
  bool is_boundary(Index node) const;
  /// Node nearest to x (clamped to the grid).
  Index nearest(const Point& x) const;

  bool operator==(const GridSpec& other) const;

 private:
  int dim_;
  std::array<Index, 3> n_;
  std::array<double, 3> h_;
  std::array<double, 3> origin_;
  std::array<Index, 3> stride_;
};

/// Time-stamped nodal samples of u (or rho, v, G) on a grid.
class ScalarField {
 public:
  ScalarField(GridSpec grid, Array values, double t = 0.0);
  /// Zero field.
  explicit ScalarField(GridSpec grid, double t = 0.0);

  static ScalarField sample(const GridSpec& grid, const std::function<double(const Point&)>& f, double t = 0.0);

  const GridSpec& grid() const { return grid_; }
  const Array& values() const { return values_; }
  Array& values() { return values_; }
  double t() const { return t_; }
  void set_t(double t) { t_ = t; }

  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }

  /// Multilinear interpolation; x outside the grid is clamped.
  double interpolate(const Point& x) const;

 private:
  GridSpec grid_;
  Array values_;
  double t_;
};

/// Lateral/initial data for the Dirichlet problem. Boundary values are either
/// a function g(x, t) or a time-independent nodal table.
struct BoundaryData {
  enum class Kind { Function, Sampled };

  Kind kind = Kind::Function;
  std::function<double(const Point&, double)> g;
  Array table;
  bool time_dependent = true;
  std::function<double(const Point&)> initial;

  static BoundaryData constant(double value);
  static BoundaryData from_function(std::function<double(const Point&, double)> g, bool time_dependent = true);
  static BoundaryData sampled(Array table, std::function<double(const Point&)> initial);

  double value(const Point& x, Index node, double t) const;
  /// Same data lifted by a constant (the g + 1/n ladder).
  BoundaryData lifted(double shift) const;
};

/// epsilon continuation, delta continuation and the maximal-solution ladder.
struct RegularizationSchedule {
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<int> n;

  static RegularizationSchedule defaults();
  static RegularizationSchedule single(double eps, double delta) { return {{eps}, {delta}, {}}; }
  void validate() const;
};

enum class ProblemKind { Dirichlet, Cauchy, Maximal };
std::string to_string(ProblemKind kind);

struct DtRecord {
  double safety = 0.4;
  double dt_min = 0.0;
  double dt_max = 0.0;
  std::size_t steps = 0;
};

struct RunManifest {
  Params params{2.0};
  GridSpec grid = GridSpec::cube(1, 3, 0.0, 1.0);
  ProblemKind problem = ProblemKind::Dirichlet;
  RegularizationSchedule schedule;
  DtRecord dt;
  std::vector<double> wall_seconds;
  std::vector<std::string> output_files;
  std::string stopping_reason;
  std::vector<std::string> warnings;
  std::map<std::string, double> metrics;
};

// Pressure/density transform u = m/(m-1) rho^{m-1} and its inverse, written
// against Eigen arrays so they compose as expressions.
template <typename Derived>
auto pressure_from_density(const Eigen::ArrayBase<Derived>& rho, double m) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(m) / Scalar(m - 1)) * rho.pow(Scalar(m - 1));
}

template <typename Derived>
auto density_from_pressure(const Eigen::ArrayBase<Derived>& u, double m) {
  using Scalar = typename Derived::Scalar;
  return ((Scalar(m - 1) / Scalar(m)) * u).pow(Scalar(1) / Scalar(m - 1));
}

template <std::floating_point Scalar>
Scalar pressure_from_density(Scalar rho, double m) {
  return Scalar(m) / Scalar(m - 1) * std::pow(rho, Scalar(m - 1));
}

template <std::floating_point Scalar>
Scalar density_from_pressure(Scalar u, double m) {
  return std::pow(Scalar(m - 1) / Scalar(m) * u, Scalar(1) / Scalar(m - 1));
}

ScalarField pressure_from_density(const ScalarField& rho, const Params& params);
ScalarField density_from_pressure(const ScalarField& u, const Params& params);

}  // namespace ipme
