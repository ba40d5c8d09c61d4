#include "ipme/exact.hpp"

#include <algorithm>
#include <cmath>

namespace ipme {

namespace {

struct KindName {
  ExactKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExactKind::BarenblattRho, "barenblatt-rho"},
    {ExactKind::BarenblattU, "barenblatt-u"},
    {ExactKind::TravelingWaveRho, "traveling-wave-rho"},
    {ExactKind::TravelingWaveU, "traveling-wave-u"},
    {ExactKind::SeparableBall, "separable-ball"},
    {ExactKind::SeparableAnnulus, "separable-annulus"},
    {ExactKind::NegLambdaAPos, "neg-lambda-a-pos"},
    {ExactKind::NegLambdaAZero, "neg-lambda-a-zero"},
    {ExactKind::NegLambdaANeg, "neg-lambda-a-neg"},
};

bool is_barenblatt(ExactKind k) { return k == ExactKind::BarenblattRho || k == ExactKind::BarenblattU; }
bool is_wave(ExactKind k) { return k == ExactKind::TravelingWaveRho || k == ExactKind::TravelingWaveU; }
bool is_forward(ExactKind k) { return k == ExactKind::SeparableBall || k == ExactKind::SeparableAnnulus; }

}  // namespace

std::string to_string(ExactKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

ExactKind exact_kind_from_string(const std::string& name) {
  for (const auto& kn : kKindNames)
    if (name == kn.name) return kn.kind;
  throw ConfigError("unknown exact solution kind '" + name + "'");
}

void ExactSolutionSpec::validate() const {
  if (is_barenblatt(kind) && !(R > 0.0)) throw ParameterError("Barenblatt radius R must be positive");
  if (is_wave(kind) && !(c_speed > 0.0)) throw ParameterError("wave speed must be positive");
  if (is_forward(kind)) {
    if (!(lambda > 0.0)) throw ParameterError("ball and annulus solutions need lambda > 0");
    if (!(a_const > 0.0)) throw ParameterError("ball and annulus solutions need a > 0");
  }
  if (kind == ExactKind::NegLambdaAPos || kind == ExactKind::NegLambdaAZero || kind == ExactKind::NegLambdaANeg) {
    if (!(lambda < 0.0)) throw ParameterError("this branch needs lambda < 0");
    if (kind == ExactKind::NegLambdaAPos && !(a_const > 0.0)) throw ParameterError("branch needs a > 0");
    if (kind == ExactKind::NegLambdaANeg && !(a_const < 0.0)) throw ParameterError("branch needs a < 0");
    if (!(max_radius > 0.0)) throw ParameterError("max_radius must be positive");
  }
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +1 or -1");
  if (x0.size() > 3) throw ParameterError("shift has more than 3 components");
}

double barenblatt_radius(double t, double m, double R) {
  if (!(t > 0.0)) throw DomainError("Barenblatt solutions need t > 0");
  return R * std::pow(t, 1.0 / (m + 1.0));
}

double barenblatt_rho(const Point& x, double t, double m, double R) {
  const double rt = barenblatt_radius(t, m, R);
  const double gap = rt * rt - x.squaredNorm();
  if (gap <= 0.0) return 0.0;
  const double gamma = std::pow((m - 1.0) / (2.0 * m * (m + 1.0)), 1.0 / (m - 1.0));
  return gamma / std::pow(t, 1.0 / (m - 1.0)) * std::pow(gap, 1.0 / (m - 1.0));
}

double barenblatt_u(const Point& x, double t, double m, double R) {
  const double rt = barenblatt_radius(t, m, R);
  const double gap = rt * rt - x.squaredNorm();
  if (gap <= 0.0) return 0.0;
  return gap / (2.0 * (m + 1.0) * t);
}

double traveling_wave_u(const Point& x, double t, double /*m*/, double c, double a) {
  return c * std::max(0.0, a + c * t - x[0]);
}

double traveling_wave_rho(const Point& x, double t, double m, double c, double a) {
  const double s = std::max(0.0, a + c * t - x[0]);
  return std::pow((m - 1.0) / m * c * s, 1.0 / (m - 1.0));
}

double sep_time_factor(double t, double C, double lambda, const Params& params) {
  const double base = C + params.k() * lambda * t;
  if (!(base > 0.0)) throw DomainError("time factor base must be positive");
  return std::pow(base, -1.0 / params.k());
}

ExactSolution::ExactSolution(ExactSolutionSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const double m = spec_.params.m();
  const double p = spec_.params.p();
  kappa_ = profile_scale(m);
  switch (spec_.kind) {
    case ExactKind::SeparableBall:
    case ExactKind::SeparableAnnulus:
      table_ = std::make_shared<ProfileTable>(build_H_profile(spec_.a_const, p));
      endpoint_ = table_->range_max();
      break;
    case ExactKind::NegLambdaAPos: {
      const double reach = spec_.sign > 0 ? spec_.max_radius - spec_.R : spec_.R;
      table_ = std::make_shared<ProfileTable>(
          build_profile_covering(PrimitiveKind::I, spec_.a_const, p, kappa_ * std::max(reach, 1e-3)));
      break;
    }
    case ExactKind::NegLambdaANeg: {
      const double reach = spec_.sign > 0 ? kappa_ * spec_.max_radius + spec_.C_const : spec_.C_const;
      table_ = std::make_shared<ProfileTable>(
          build_profile_covering(PrimitiveKind::K, spec_.a_const, p, std::max(reach, 1e-3)));
      break;
    }
    default: break;
  }
}

double ExactSolution::radius(const Point& x) const {
  if (spec_.x0.size() == 0) return x.norm();
  if (spec_.x0.size() != x.size()) throw ParameterError("shift dimension does not match the point");
  return (x - spec_.x0).norm();
}

double ExactSolution::outer_radius() const {
  switch (spec_.kind) {
    case ExactKind::SeparableBall: return endpoint_ / kappa_;
    case ExactKind::SeparableAnnulus: return spec_.R + endpoint_ / kappa_;
    case ExactKind::NegLambdaAPos:
      if (spec_.sign < 0) return spec_.R;
      break;
    default: break;
  }
  throw ParameterError("this solution kind has no outer radius");
}

double ExactSolution::radial_profile(double s) const {
  if (!table_) throw ParameterError("this solution kind has no radial profile");
  return invert_profile(*table_, kappa_ * s);
}

double ExactSolution::separable_u(double r, double t) const {
  const double m = spec_.params.m();
  const double k = spec_.params.k();
  const double expo = (m - 1.0) / m;
  switch (spec_.kind) {
    case ExactKind::SeparableBall: {
      if (!(t > spec_.t0)) throw DomainError("ball solution needs t > t0");
      const double R = endpoint_ / kappa_;
      if (r >= R) return 0.0;
      const double g = invert_profile(*table_, std::min(endpoint_, kappa_ * (R - r)));
      return m / (k * k * (t - spec_.t0)) * std::pow(g, expo);
    }
    case ExactKind::SeparableAnnulus: {
      if (!(t > spec_.t0)) throw DomainError("annulus solution needs t > t0");
      const double r2 = spec_.R + endpoint_ / kappa_;
      if (r > r2 * (1.0 + 1e-14)) throw DomainError("point beyond the outer radius of the annulus");
      if (r <= spec_.R) return 0.0;
      const double g = invert_profile(*table_, std::min(endpoint_, kappa_ * (r - spec_.R)));
      return m / (k * k * (t - spec_.t0)) * std::pow(g, expo);
    }
    case ExactKind::NegLambdaAPos: {
      if (!(t < spec_.t0)) throw DomainError("this branch needs t < t0");
      const double z = kappa_ * (spec_.sign > 0 ? r - spec_.R : spec_.R - r);
      if (z <= 0.0) return 0.0;
      if (z > table_->range_max()) throw DomainError("point beyond the tabulated radius");
      const double g = invert_profile(*table_, z);
      return m / (k * k * (spec_.t0 - t)) * std::pow(g, expo);
    }
    case ExactKind::NegLambdaAZero: {
      if (!(t < spec_.t0)) throw DomainError("this branch needs t < t0");
      const double d = r - spec_.R;
      return d * d / (2.0 * (m + 1.0) * (spec_.t0 - t));
    }
    case ExactKind::NegLambdaANeg: {
      if (!(t < spec_.t0)) throw DomainError("this branch needs t < t0");
      const double z = spec_.sign * kappa_ * r + spec_.C_const;
      if (z < 0.0 || z > table_->range_max()) throw DomainError("point outside the domain of this branch");
      const double g = invert_profile(*table_, z);
      return m / (k * k * (spec_.t0 - t)) * std::pow(g, expo);
    }
    default: break;
  }
  throw ParameterError("not a separable kind");
}

double ExactSolution::u(const Point& x, double t) const {
  const double m = spec_.params.m();
  switch (spec_.kind) {
    case ExactKind::BarenblattRho:
    case ExactKind::BarenblattU: {
      if (spec_.x0.size() == 0) return barenblatt_u(x, t, m, spec_.R);
      return barenblatt_u(x - spec_.x0, t, m, spec_.R);
    }
    case ExactKind::TravelingWaveRho:
    case ExactKind::TravelingWaveU: return traveling_wave_u(x, t, m, spec_.c_speed, spec_.a_const);
    default: return separable_u(radius(x), t);
  }
}

double ExactSolution::rho(const Point& x, double t) const {
  const double m = spec_.params.m();
  switch (spec_.kind) {
    case ExactKind::BarenblattRho:
    case ExactKind::BarenblattU: {
      if (spec_.x0.size() == 0) return barenblatt_rho(x, t, m, spec_.R);
      return barenblatt_rho(x - spec_.x0, t, m, spec_.R);
    }
    case ExactKind::TravelingWaveRho:
    case ExactKind::TravelingWaveU: return traveling_wave_rho(x, t, m, spec_.c_speed, spec_.a_const);
    default: return density_from_pressure(u(x, t), m);
  }
}

double ExactSolution::value(const Point& x, double t) const {
  if (spec_.kind == ExactKind::BarenblattRho || spec_.kind == ExactKind::TravelingWaveRho) return rho(x, t);
  return u(x, t);
}

double ExactSolution::u_t(const Point& x, double t) const {
  const double m = spec_.params.m();
  switch (spec_.kind) {
    case ExactKind::BarenblattRho:
    case ExactKind::BarenblattU: {
      const double val = u(x, t);
      if (val <= 0.0) return 0.0;
      const double R = spec_.R;
      // d/dt of R^2 t^{2/(m+1)} / (2(m+1)t), minus u/t from the 1/t factor.
      return R * R * (2.0 / (m + 1.0)) * std::pow(t, 2.0 / (m + 1.0) - 1.0) / (2.0 * (m + 1.0) * t) - val / t;
    }
    case ExactKind::TravelingWaveRho:
    case ExactKind::TravelingWaveU: {
      const double c = spec_.c_speed;
      return spec_.a_const + c * t - x[0] > 0.0 ? c * c : 0.0;
    }
    case ExactKind::SeparableBall:
    case ExactKind::SeparableAnnulus: return -u(x, t) / (t - spec_.t0);
    default: return u(x, t) / (spec_.t0 - t);
  }
}

ScalarField sample_exact(const ExactSolution& sol, const GridSpec& grid, double t, bool native) {
  Array v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.coords(i);
    v[i] = native ? sol.value(x, t) : sol.u(x, t);
  }
  return ScalarField(grid, std::move(v), t);
}

ExactSolution ball_profile(double m, double R, const Point& center) {
  if (!(R > 0.0)) throw ParameterError("ball radius must be positive");
  const Params params(m);
  const double q = params.p() + 1.0;
  // A_p(a) = a^{1/q - 1/2} A_p(1); pick a with A_p(a) = kappa R.
  const double unit = h_endpoint_closed_form(1.0, params.p());
  const double a = std::pow(profile_scale(m) * R / unit, 1.0 / (1.0 / q - 0.5));
  ExactSolutionSpec spec;
  spec.kind = ExactKind::SeparableBall;
  spec.params = params;
  spec.a_const = a;
  spec.lambda = 1.0;
  spec.t0 = 0.0;
  spec.x0 = center;
  return ExactSolution(spec);
}

}  // namespace ipme
