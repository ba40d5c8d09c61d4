#include "ipme/core.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ipme {

Params::Params(double m, double c, double eps, double delta)
    : m_(m), k_(m - 1.0), p_(1.0 / m), c_(c), eps_(eps), delta_(delta) {
  if (!(m > 1.0) || !std::isfinite(m)) throw ParameterError("m must exceed 1");
  if (!(c >= 0.0)) throw ParameterError("c must be nonnegative");
  if (!(eps >= 0.0)) throw ParameterError("eps must be nonnegative");
  if (!(delta >= 0.0)) throw ParameterError("delta must be nonnegative");
}

GridSpec::GridSpec(int dim, std::array<Index, 3> n, std::array<double, 3> h, std::array<double, 3> origin)
    : dim_(dim), n_(n), h_(h), origin_(origin) {
  if (dim < 1 || dim > 3) throw ParameterError("grid dimension must be 1, 2 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (n_[a] < 3) throw ParameterError("every axis needs at least 3 nodes");
      if (!(h_[a] > 0.0)) throw ParameterError("grid spacing must be positive");
    } else {
      n_[a] = 1;
      h_[a] = 1.0;
      origin_[a] = 0.0;
    }
  }
  // The last used axis is contiguous.
  if (dim_ == 1) stride_ = {1, 0, 0};
  if (dim_ == 2) stride_ = {n_[1], 1, 0};
  if (dim_ == 3) stride_ = {n_[1] * n_[2], n_[2], 1};
}

GridSpec GridSpec::cube(int dim, Index nodes, double lo, double hi) {
  if (!(hi > lo)) throw ParameterError("grid extent must be positive");
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  return GridSpec(dim, {nodes, nodes, nodes}, {h, h, h}, {lo, lo, lo});
}

double GridSpec::min_h() const {
  double r = h_[0];
  for (int a = 1; a < dim_; ++a) r = std::min(r, h_[a]);
  return r;
}

Index GridSpec::size() const {
  Index s = 1;
  for (int a = 0; a < dim_; ++a) s *= n_[a];
  return s;
}

std::array<Index, 3> GridSpec::multi_index(Index node) const {
  std::array<Index, 3> ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    ijk[a] = node / stride_[a];
    node -= ijk[a] * stride_[a];
  }
  return ijk;
}

Index GridSpec::linear_index(const std::array<Index, 3>& ijk) const {
  Index node = 0;
  for (int a = 0; a < dim_; ++a) node += ijk[a] * stride_[a];
  return node;
}

Point GridSpec::coords(Index node) const {
  const auto ijk = multi_index(node);
  Point x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = coord(a, ijk[a]);
  return x;
}

bool GridSpec::is_boundary(Index node) const {
  const auto ijk = multi_index(node);
  for (int a = 0; a < dim_; ++a)
    if (ijk[a] == 0 || ijk[a] == n_[a] - 1) return true;
  return false;
}

Index GridSpec::nearest(const Point& x) const {
  std::array<Index, 3> ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double s = std::round((x[a] - origin_[a]) / h_[a]);
    ijk[a] = std::clamp<Index>(static_cast<Index>(s), 0, n_[a] - 1);
  }
  return linear_index(ijk);
}

bool GridSpec::operator==(const GridSpec& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && h_ == other.h_ && origin_ == other.origin_;
}

ScalarField::ScalarField(GridSpec grid, Array values, double t)
    : grid_(std::move(grid)), values_(std::move(values)), t_(t) {
  if (values_.size() != grid_.size()) {
    std::ostringstream os;
    os << "field has " << values_.size() << " values but the grid has " << grid_.size() << " nodes";
    throw ParameterError(os.str());
  }
}

ScalarField::ScalarField(GridSpec grid, double t) : grid_(std::move(grid)), values_(Array::Zero(grid_.size())), t_(t) {}

ScalarField ScalarField::sample(const GridSpec& grid, const std::function<double(const Point&)>& f, double t) {
  Array v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = f(grid.coords(i));
  return ScalarField(grid, std::move(v), t);
}

double ScalarField::interpolate(const Point& x) const {
  const int d = grid_.dim();
  std::array<Index, 3> base{0, 0, 0};
  std::array<double, 3> frac{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    double s = (x[a] - grid_.origin(a)) / grid_.h(a);
    s = std::clamp(s, 0.0, static_cast<double>(grid_.n(a) - 1));
    Index i = std::min<Index>(static_cast<Index>(std::floor(s)), grid_.n(a) - 2);
    base[a] = i;
    frac[a] = s - static_cast<double>(i);
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::array<Index, 3> ijk = base;
    for (int a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1;
      ijk[a] += up ? 1 : 0;
      w *= up ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) acc += w * values_[grid_.linear_index(ijk)];
  }
  return acc;
}

BoundaryData BoundaryData::constant(double value) {
  BoundaryData b;
  b.kind = Kind::Function;
  b.g = [value](const Point&, double) { return value; };
  b.initial = [value](const Point&) { return value; };
  b.time_dependent = false;
  return b;
}

BoundaryData BoundaryData::from_function(std::function<double(const Point&, double)> g, bool time_dependent) {
  BoundaryData b;
  b.kind = Kind::Function;
  b.g = g;
  b.initial = [g](const Point& x) { return g(x, 0.0); };
  b.time_dependent = time_dependent;
  return b;
}

BoundaryData BoundaryData::sampled(Array table, std::function<double(const Point&)> initial) {
  BoundaryData b;
  b.kind = Kind::Sampled;
  b.table = std::move(table);
  b.initial = std::move(initial);
  b.time_dependent = false;
  return b;
}

double BoundaryData::value(const Point& x, Index node, double t) const {
  if (kind == Kind::Sampled) return table[node];
  return g(x, t);
}

BoundaryData BoundaryData::lifted(double shift) const {
  BoundaryData b = *this;
  if (kind == Kind::Sampled) {
    b.table = table + shift;
  } else {
    auto g0 = g;
    b.g = [g0, shift](const Point& x, double t) { return g0(x, t) + shift; };
  }
  auto init0 = initial;
  b.initial = [init0, shift](const Point& x) { return init0(x) + shift; };
  return b;
}

RegularizationSchedule RegularizationSchedule::defaults() {
  return {{1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, {1e-1, 1e-2, 1e-3}, {1, 2, 4, 8, 16}};
}

void RegularizationSchedule::validate() const {
  auto strictly_decreasing = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) throw ParameterError(std::string(name) + " entries must be positive");
      if (i > 0 && !(v[i] < v[i - 1])) throw ParameterError(std::string(name) + " must be strictly decreasing");
    }
  };
  if (eps.empty() || delta.empty()) throw ParameterError("eps and delta schedules need at least one entry");
  strictly_decreasing(eps, "eps schedule");
  strictly_decreasing(delta, "delta schedule");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] <= 0) throw ParameterError("ladder entries must be positive");
    if (i > 0 && n[i] <= n[i - 1]) throw ParameterError("ladder must be strictly increasing");
  }
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Dirichlet: return "dirichlet";
    case ProblemKind::Cauchy: return "cauchy";
    case ProblemKind::Maximal: return "maximal";
  }
  return "unknown";
}

ScalarField pressure_from_density(const ScalarField& rho, const Params& params) {
  if ((rho.values() < 0.0).any()) throw DomainError("density must be nonnegative");
  return ScalarField(rho.grid(), pressure_from_density(rho.values(), params.m()), rho.t());
}

ScalarField density_from_pressure(const ScalarField& u, const Params& params) {
  if ((u.values() < 0.0).any()) throw DomainError("pressure must be nonnegative");
  return ScalarField(u.grid(), density_from_pressure(u.values(), params.m()), u.t());
}

}  // namespace ipme
