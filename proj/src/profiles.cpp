#include "ipme/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ipme {

namespace {

constexpr double kPi = 3.14159265358979323846;

double binom_minus_half(int j) {
  // binom(-1/2, j) by the recurrence c_j = c_{j-1} (-1/2 - j + 1) / j.
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c *= (-0.5 - (i - 1)) / i;
  return c;
}

double far_field_series(double a_signed, double q, double z) {
  // Σ_{j>=1} binom(-1/2, j) a^j z^{1 - q/2 - jq} / (q/2 + jq - 1)
  const double ratio = a_signed / std::pow(z, q);
  if (!(std::abs(ratio) < 0.5)) throw DomainError("far-field expansion needs z^q > 2|a|");
  double sum = 0.0;
  double term_pow = std::pow(z, 1.0 - q / 2.0);
  for (int j = 1; j < 200; ++j) {
    term_pow *= ratio;
    const double term = binom_minus_half(j) * term_pow / (q / 2.0 + j * q - 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

}  // namespace

ProfileTable::ProfileTable(PrimitiveKind kind, double a, double p, double z_max, double tol, int intervals)
    : kind_(kind), a_(a), p_(p), q_(p + 1.0), tol_(tol) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("profile exponent p must lie in (0, 1)");
  if (intervals < 2048) throw ParameterError("profile tables use at least 2048 intervals");
  switch (kind) {
    case PrimitiveKind::H:
      if (!(a > 0.0)) throw DomainError("H profile needs a > 0");
      z_lo_ = 0.0;
      z_hi_ = std::pow(a, 1.0 / q_);
      break;
    case PrimitiveKind::I:
      if (!(a > 0.0)) throw DomainError("I profile needs a > 0");
      if (!(z_max > 0.0)) throw DomainError("I profile needs z_max > 0");
      z_lo_ = 0.0;
      z_hi_ = z_max;
      break;
    case PrimitiveKind::K:
      if (!(a < 0.0)) throw DomainError("K profile needs a < 0");
      z_lo_ = std::pow(-a, 1.0 / q_);
      if (!(z_max > z_lo_)) throw DomainError("K profile needs z_max > |a|^{1/(p+1)}");
      z_hi_ = z_max;
      break;
  }

  const auto n = static_cast<std::size_t>(intervals);
  s_.resize(n + 1);
  z_.resize(n + 1);
  values_.resize(n + 1);
  dvds_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    s_[i] = static_cast<double>(i) / static_cast<double>(n);
    z_[i] = z_of_s(s_[i]);
    dvds_[i] = integrand_s(s_[i]);
  }
  values_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) values_[i + 1] = values_[i] + panel_integral(s_[i], s_[i + 1]);
  for (std::size_t i = 0; i < n; ++i)
    if (!(values_[i + 1] > values_[i])) throw NumericError("profile quadrature lost monotonicity");
}

double ProfileTable::z_of_s(double s) const {
  switch (kind_) {
    case PrimitiveKind::H: {
      const double tau = 1.0 - s;
      return z_hi_ * (1.0 - tau * tau);
    }
    case PrimitiveKind::I: return z_hi_ * s;
    case PrimitiveKind::K: return z_lo_ + (z_hi_ - z_lo_) * s * s;
  }
  return 0.0;
}

double ProfileTable::s_of_z(double z) const {
  switch (kind_) {
    case PrimitiveKind::H: return 1.0 - std::sqrt(std::max(0.0, 1.0 - z / z_hi_));
    case PrimitiveKind::I: return z / z_hi_;
    case PrimitiveKind::K: return std::sqrt(std::max(0.0, (z - z_lo_) / (z_hi_ - z_lo_)));
  }
  return 0.0;
}

double ProfileTable::integrand_s(double s) const {
  switch (kind_) {
    case PrimitiveKind::H: {
      // a - z^q = -a expm1(q log1p(-tau^2)), evaluated without cancellation near tau = 0.
      const double tau = 1.0 - s;
      if (tau < 1e-150) return 2.0 * z_hi_ / std::sqrt(a_ * q_);
      const double gap = -a_ * std::expm1(q_ * std::log1p(-tau * tau));
      return 2.0 * z_hi_ * tau / std::sqrt(gap);
    }
    case PrimitiveKind::I: {
      const double z = z_hi_ * s;
      return z_hi_ / std::sqrt(a_ + std::pow(z, q_));
    }
    case PrimitiveKind::K: {
      const double len = z_hi_ - z_lo_;
      const double absa = -a_;
      if (s < 1e-150) return 2.0 * std::sqrt(len * z_lo_ / (absa * q_));
      const double gap = absa * std::expm1(q_ * std::log1p(len * s * s / z_lo_));
      return 2.0 * len * s / std::sqrt(gap);
    }
  }
  return 0.0;
}

double ProfileTable::panel_integral(double s0, double s1) const {
  if (s1 == s0) return 0.0;
  // Boost compares its unscaled error floor (2 eps |f|) against tol times the
  // scaled panel integral, so on short panels tol must exceed ~eps / width or
  // the recursion always runs to max depth.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() / (0.5 * std::abs(s1 - s0));
  double err = 0.0;
  const double r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [this](double s) { return integrand_s(s); }, s0, s1, 12, std::max(std::min(tol_, 1e-13), floor), &err);
  if (!std::isfinite(r)) throw NumericError("profile quadrature produced a non-finite value");
  return r;
}

double ProfileTable::value_at_s(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  const std::size_t n = s_.size() - 1;
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s * static_cast<double>(n)), n - 1);
  return values_[i] + panel_integral(s_[i], s);
}

double ProfileTable::value(double z) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(z_hi_));
  if (z < z_lo_ - slack || z > z_hi_ + slack) throw RangeError("profile argument outside the tabulated domain");
  return value_at_s(s_of_z(std::clamp(z, z_lo_, z_hi_)));
}

double ProfileTable::derivative(double z) const {
  switch (kind_) {
    case PrimitiveKind::H: return 1.0 / std::sqrt(a_ - std::pow(z, q_));
    case PrimitiveKind::I: return 1.0 / std::sqrt(a_ + std::pow(z, q_));
    case PrimitiveKind::K: return 1.0 / std::sqrt(std::pow(z, q_) + a_);
  }
  return 0.0;
}

std::size_t ProfileTable::panel_of_value(double y) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), y);
  std::size_t i = static_cast<std::size_t>(std::distance(values_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, values_.size() - 2);
}

ProfileTable build_H_profile(double a, double p, double tol, int intervals) {
  return ProfileTable(PrimitiveKind::H, a, p, 0.0, tol, intervals);
}

ProfileTable build_I_profile(double a, double p, double z_max, double tol, int intervals) {
  return ProfileTable(PrimitiveKind::I, a, p, z_max, tol, intervals);
}

ProfileTable build_K_profile(double a, double p, double z_max, double tol, int intervals) {
  return ProfileTable(PrimitiveKind::K, a, p, z_max, tol, intervals);
}

ProfileTable build_profile_covering(PrimitiveKind kind, double a, double p, double y_max, double tol, int intervals) {
  if (kind == PrimitiveKind::H) return build_H_profile(a, p, tol, intervals);
  // Both I and K grow like 2/(1-p) z^{(1-p)/2}; start from that estimate and double.
  const double q = p + 1.0;
  const double base = kind == PrimitiveKind::K ? std::pow(-a, 1.0 / q) : 0.0;
  double z_max = base + std::max(1.0, std::pow(std::max(y_max, 1e-3) * (1.0 - p) / 2.0, 2.0 / (1.0 - p)));
  for (int attempt = 0; attempt < 60; ++attempt) {
    ProfileTable t(kind, a, p, z_max, tol, intervals);
    if (t.range_max() >= y_max) return t;
    z_max = base + 2.0 * (z_max - base);
  }
  throw NumericError("could not size a profile table to cover the requested range");
}

double invert_profile(const ProfileTable& table, double y, double tol) {
  const double top = table.range_max();
  const double slack = 1e-10 * std::max(1.0, top);
  if (y < -slack || y > top + slack) throw RangeError("value outside the range of the profile");
  y = std::clamp(y, 0.0, top);
  if (y == 0.0) return table.z_lo();
  if (y == top) return table.z_hi();

  const auto& s = table.s_nodes();
  const auto& v = table.values();
  const auto& dv = table.derivative_values();
  const std::size_t i = table.panel_of_value(y);
  const double s0 = s[i], s1 = s[i + 1], hs = s1 - s0;

  // Hermite cubic in s through (s0, v0, dv0), (s1, v1, dv1) gives the first guess.
  auto hermite = [&](double x, double& deriv) {
    const double t = (x - s0) / hs;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double d00 = (6 * t2 - 6 * t) / hs, d10 = (3 * t2 - 4 * t + 1), d01 = (-6 * t2 + 6 * t) / hs,
                 d11 = (3 * t2 - 2 * t);
    deriv = d00 * v[i] + d10 * dv[i] + d01 * v[i + 1] + d11 * dv[i + 1];
    return h00 * v[i] + h10 * hs * dv[i] + h01 * v[i + 1] + h11 * hs * dv[i + 1];
  };
  double x = s0 + hs * (y - v[i]) / (v[i + 1] - v[i]);
  for (int it = 0; it < 20; ++it) {
    double d = 0.0;
    const double f = hermite(x, d) - y;
    if (d <= 0.0) break;
    const double nx = std::clamp(x - f / d, s0, s1);
    if (std::abs(nx - x) < 1e-16) break;
    x = nx;
  }

  // Newton on the quadrature-backed primitive.
  for (int it = 0; it < 30; ++it) {
    const double f = table.value_at_s(x) - y;
    if (std::abs(f) <= tol) break;
    const double d = table.integrand_s(x);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    x = std::clamp(x - f / d, 0.0, 1.0);
  }
  if (!(std::abs(table.value_at_s(x) - y) <= std::max(tol, 1e-14 * top)))
    throw NumericError("profile inversion did not reach the tolerance");
  return table.z_of_s(x);
}

double h_endpoint_closed_form(double a, double p) {
  const double q = p + 1.0;
  return std::pow(a, 1.0 / q - 0.5) * std::sqrt(kPi) * std::tgamma(1.0 + 1.0 / q) / std::tgamma(0.5 + 1.0 / q);
}

double i_far_field_closed_form(double a, double p, double z) {
  const double q = p + 1.0;
  const double c = std::pow(a, 1.0 / q - 0.5) * std::tgamma(1.0 / q) * std::tgamma(0.5 - 1.0 / q) /
                   (q * std::sqrt(kPi));
  return 2.0 / (1.0 - p) * std::pow(z, (1.0 - p) / 2.0) + c - far_field_series(a, q, z);
}

double k_far_field_closed_form(double a, double p, double z) {
  const double q = p + 1.0;
  const double absa = -a;
  const double c = std::pow(absa, 1.0 / q - 0.5) * std::tgamma(0.5 - 1.0 / q) * std::sqrt(kPi) /
                   (q * std::tgamma(1.0 - 1.0 / q));
  return 2.0 / (1.0 - p) * std::pow(z, (1.0 - p) / 2.0) + c - far_field_series(-absa, q, z);
}

}  // namespace ipme
