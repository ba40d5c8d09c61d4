#include "ipme/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ipme/exact.hpp"
#include "ipme/operators.hpp"
#include "ipme/solver.hpp"

namespace ipme {

namespace {

double radius_of(const GridSpec& grid, Index i, const Point& center) {
  const Point x = grid.coords(i);
  return center.size() == 0 ? x.norm() : (x - center).norm();
}

}  // namespace

bool FreeBoundaryTrace::any_degenerate() const {
  return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
}

FreeBoundaryTrace track_support(const std::vector<ScalarField>& snapshots, const SupportOptions& options) {
  FreeBoundaryTrace tr;
  for (const auto& f : snapshots) {
    const GridSpec& grid = f.grid();
    const double top = f.values().maxCoeff();
    const double theta = options.floor + options.theta_rel * (top - options.floor);
    std::vector<char> in(static_cast<std::size_t>(grid.size()), 0);
    if (options.seeds.empty()) {
      for (Index i = 0; i < grid.size(); ++i) in[i] = f[i] > theta;
    } else {
      for (Index i : support_component(f, theta, options.seeds)) in[i] = 1;
    }
    double r_out = 0.0, r_gap = std::numeric_limits<double>::infinity();
    bool empty = true;
    for (Index i = 0; i < grid.size(); ++i) {
      const double r = radius_of(grid, i, options.center);
      if (in[i]) {
        empty = false;
        r_out = std::max(r_out, r);
      } else {
        r_gap = std::min(r_gap, r);
      }
    }
    // r_inner: the largest node radius below the first node outside the support.
    double r_in = 0.0;
    if (!empty) {
      for (Index i = 0; i < grid.size(); ++i) {
        const double r = radius_of(grid, i, options.center);
        if (r < r_gap) r_in = std::max(r_in, r);
      }
    }
    tr.times.push_back(f.t());
    tr.r_outer.push_back(empty ? 0.0 : r_out);
    tr.r_inner.push_back(r_in);
    tr.threshold.push_back(theta);
    tr.degenerate.push_back(empty || !(top > theta));
  }
  return tr;
}

double front_position_1d(const ScalarField& u, double theta_rel) {
  if (u.grid().dim() != 1) throw ParameterError("front position needs a 1-d field");
  const double theta = theta_rel * u.values().maxCoeff();
  double x = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < u.grid().size(); ++i)
    if (u[i] > theta) x = u.grid().coord(0, i);
  if (!std::isfinite(x)) throw FitError("empty support");
  return x;
}

RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r) {
  if (t.size() != r.size()) throw FitError("time and radius series differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 0.0 && r[i] > 0.0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(r[i]));
    }
  }
  if (lx.size() < 3) throw FitError("fewer than 3 usable samples");
  Eigen::MatrixXd A(lx.size(), 2);
  Eigen::VectorXd b(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = lx[i];
    b[i] = ly[i];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  RateFit fit;
  fit.exponent = coef[1];
  fit.amplitude = std::exp(coef[0]);
  fit.residual = std::sqrt((A * coef - b).squaredNorm() / static_cast<double>(lx.size()));
  fit.t_lo = std::exp(lx.front());
  fit.t_hi = std::exp(lx.back());
  fit.samples = lx.size();
  return fit;
}

RateFit fit_rate(const FreeBoundaryTrace& trace, bool use_outer) {
  const std::size_t n = trace.times.size();
  if (n < 6) throw FitError("rate fit needs at least 6 samples");
  if (!(trace.times.front() > 0.0) || trace.times.back() < 4.0 * trace.times.front())
    throw FitError("rate fit needs samples spanning a factor 4 in time");
  const std::size_t skip = n / 5;
  const auto& r = use_outer ? trace.r_outer : trace.r_inner;
  std::vector<double> t, y;
  for (std::size_t i = skip; i < n; ++i) {
    if (trace.degenerate[i]) continue;
    t.push_back(trace.times[i]);
    y.push_back(r[i]);
  }
  return fit_power_law(t, y);
}

double benilan_crandall_check(const std::vector<ScalarField>& snapshots) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < snapshots.size(); ++j) {
    const ScalarField& a = snapshots[j];
    const ScalarField& b = snapshots[j + 1];
    if (!(a.t() > 0.0) || !(b.t() > a.t())) throw DomainError("snapshots need increasing positive times");
    const Array stat = (b.values() - a.values()) / (b.t() - a.t()) + a.values() / a.t();
    worst = std::min(worst, stat.minCoeff());
  }
  return worst;
}

ScalarField rescale_v(const ScalarField& u, const Params& params) {
  const double t = u.t();
  if (!(t > 0.0)) throw DomainError("rescaling needs t > 0");
  const double k = params.k();
  const double alpha = k * k / params.m();
  Array v = (alpha * t * u.values().max(0.0)).pow(1.0 / k);
  return ScalarField(u.grid(), std::move(v), std::log(t) / k);
}

ScalarField rescale_v_inverse(const ScalarField& v, const Params& params) {
  const double k = params.k();
  const double alpha = k * k / params.m();
  const double t = std::exp(k * v.t());
  Array u = v.values().max(0.0).pow(k) / (alpha * t);
  return ScalarField(v.grid(), std::move(u), t);
}

FriendlyGiantResult friendly_giant(const std::vector<ScalarField>& snapshots, const Params& params, double ball_radius,
                                   const Point& center) {
  FriendlyGiantResult res;
  res.has_target = ball_radius > 0.0;
  Array target;
  double target_max = 0.0;
  if (res.has_target && !snapshots.empty()) {
    const ExactSolution U = ball_profile(params.m(), ball_radius, center);
    target = sample_exact(U, snapshots.front().grid(), 1.0).values();
    target_max = target.maxCoeff();
  }
  for (const auto& f : snapshots) {
    if (!(f.t() > 0.0)) throw DomainError("Friendly Giant extraction needs t > 0");
    ScalarField tu(f.grid(), f.t() * f.values(), f.t());
    double err, scale;
    if (res.has_target) {
      err = (tu.values() - target).abs().maxCoeff();
      scale = target_max;
    } else {
      err = res.profiles.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : (tu.values() - res.profiles.back().values()).abs().maxCoeff();
      scale = tu.values().maxCoeff();
    }
    res.times.push_back(f.t());
    res.errors.push_back(err);
    res.relative_errors.push_back(scale > 0.0 ? err / scale : err);
    res.profiles.push_back(std::move(tu));
  }
  std::vector<double> tail = res.errors;
  if (!res.has_target && !tail.empty()) tail.erase(tail.begin());
  res.decreasing = strictly_decreasing(tail);
  return res;
}

double eigen_residual(const ScalarField& G, const Params& params, double delta) {
  const GridSpec& grid = G.grid();
  const ScalarField Gm(grid, G.values().max(0.0).pow(params.m()), G.t());
  // Filter on G^m, the differentiated field: G^m vanishes linearly at the free
  // boundary, so G itself exceeds any fixed fraction within O(h) of it.
  const double top = Gm.values().maxCoeff();
  if (!(top > 0.0)) return 0.0;
  double worst = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    if (grid.is_boundary(i) || !(Gm[i] > 0.05 * top)) continue;
    const StencilEval e = stencil_eval(Gm, i, delta);
    worst = std::max(worst, std::abs(e.inf_lap_reg + G[i]));
  }
  return worst;
}

double aleksandrov_check(const ScalarField& rho, double R0, const Point& center) {
  const GridSpec& grid = rho.grid();
  const double h = grid.min_h();
  double inscribed = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.dim(); ++a) {
    const double c = center.size() == 0 ? 0.0 : center[a];
    inscribed = std::min({inscribed, c - grid.origin(a), grid.coord(a, grid.n(a) - 1) - c});
  }
  // Shell index -> (min, max) of rho.
  std::map<long, std::pair<double, double>> shells;
  for (Index i = 0; i < grid.size(); ++i) {
    const double r = radius_of(grid, i, center);
    const long s = std::lround(r / h);
    auto it = shells.find(s);
    if (it == shells.end()) {
      shells.emplace(s, std::make_pair(rho[i], rho[i]));
    } else {
      it->second.first = std::min(it->second.first, rho[i]);
      it->second.second = std::max(it->second.second, rho[i]);
    }
  }
  const long shift = std::lround(2.0 * R0 / h);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [s, mm] : shells) {
    const double r = s * h;
    if (!(r > R0)) continue;
    if (r + 2.0 * R0 + 0.5 * h > inscribed) continue;
    auto far = shells.find(s + shift);
    if (far == shells.end()) continue;
    worst = std::min(worst, mm.first - far->second.second);
  }
  return worst;
}

double barenblatt_R_estimate(const FreeBoundaryTrace& trace, double m) {
  for (std::size_t i = trace.times.size(); i-- > 0;) {
    if (!trace.degenerate[i] && trace.times[i] > 0.0)
      return trace.r_outer[i] / std::pow(trace.times[i], 1.0 / (m + 1.0));
  }
  throw FitError("no usable sample for the radius estimate");
}

std::vector<double> barenblatt_convergence(const std::vector<ScalarField>& rho_snapshots, double m, double R) {
  std::vector<double> e;
  for (const auto& f : rho_snapshots) {
    const GridSpec& grid = f.grid();
    double worst = 0.0;
    for (Index i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(f[i] - barenblatt_rho(grid.coords(i), f.t(), m, R)));
    e.push_back(std::pow(f.t(), 1.0 / (m + 1.0)) * worst);
  }
  return e;
}

double line_mass(const ScalarField& rho, const Point& center) {
  const GridSpec& g = rho.grid();
  std::array<Index, 3> ijk{0, 0, 0};
  if (g.dim() > 1) {
    Point c = center.size() == 0 ? Point::Zero(g.dim()) : center;
    ijk = g.multi_index(g.nearest(c));
  }
  double sum = 0.0;
  for (Index i = 0; i < g.n(0); ++i) {
    ijk[0] = i;
    const double w = (i == 0 || i == g.n(0) - 1) ? 0.5 : 1.0;
    sum += w * rho[g.linear_index(ijk)];
  }
  return sum * g.h(0);
}

double barenblatt_line_mass(double m, double R) {
  // ∫_{-R}^{R} gamma (R^2 - x^2)^a dx = gamma R^{2a+1} sqrt(pi) Γ(a+1)/Γ(a+3/2), a = 1/(m-1).
  const double a = 1.0 / (m - 1.0);
  const double gamma = std::pow((m - 1.0) / (2.0 * m * (m + 1.0)), a);
  return gamma * std::pow(R, 2.0 * a + 1.0) * std::sqrt(M_PI) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
}

double barenblatt_R_for_line_mass(double mass, double m) {
  if (!(mass > 0.0)) throw DomainError("line mass must be positive");
  const double a = 1.0 / (m - 1.0);
  return std::pow(mass / barenblatt_line_mass(m, 1.0), 1.0 / (2.0 * a + 1.0));
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace ipme
