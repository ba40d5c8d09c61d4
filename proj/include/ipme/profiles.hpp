#pragma once

#include <vector>

#include "ipme/core.hpp"

namespace ipme {

/// The three radial-profile primitives (q = p + 1):
///   H(z) = ∫_0^z ds / sqrt(a - s^q),       z in [0, a^{1/q}],         a > 0
///   I(z) = ∫_0^z ds / sqrt(a + s^q),       z in [0, z_max],           a > 0
///   K(z) = ∫_{z0}^z ds / sqrt(s^q - |a|),  z in [z0, z_max], z0 = |a|^{1/q}, a < 0
/// Their inverses G, J, L give the separable radial solutions.
enum class PrimitiveKind { H, I, K };

/// Tabulated primitive. The table is laid out on a parameter s in [0, 1] with
/// z = z(s) chosen so that the integrand in s is bounded at the square-root
/// endpoint (z = z_e (1 - (1-s)^2) for H, z = z0 + (z_max - z0) s^2 for K,
/// z = z_max s for I).
class ProfileTable {
 public:
  ProfileTable(PrimitiveKind kind, double a, double p, double z_max, double tol, int intervals);

  PrimitiveKind kind() const { return kind_; }
  double a() const { return a_; }
  double p() const { return p_; }
  double tol() const { return tol_; }

  /// Domain [z_lo, z_hi] and range [0, value(z_hi)].
  double z_lo() const { return z_lo_; }
  double z_hi() const { return z_hi_; }
  double range_max() const { return values_.back(); }

  const std::vector<double>& abscissae() const { return z_; }
  const std::vector<double>& values() const { return values_; }
  /// dV/ds at the table nodes.
  const std::vector<double>& derivative_values() const { return dvds_; }

  /// Primitive at z (table value plus a quadrature over the partial panel).
  double value(double z) const;
  /// Integrand dV/dz; infinite at the square-root endpoint.
  double derivative(double z) const;

  // Parameter map.
  double z_of_s(double s) const;
  double s_of_z(double z) const;
  double integrand_s(double s) const;
  /// V(s_i) + ∫_{s_i}^{s} integrand, i the panel containing s.
  double value_at_s(double s) const;
  std::size_t panel_of_value(double y) const;
  const std::vector<double>& s_nodes() const { return s_; }

 private:
  double panel_integral(double s0, double s1) const;

  PrimitiveKind kind_;
  double a_, p_, q_;
  double tol_;
  double z_lo_, z_hi_;
  std::vector<double> s_, z_, values_, dvds_;
};

ProfileTable build_H_profile(double a, double p, double tol = 1e-10, int intervals = 4096);
ProfileTable build_I_profile(double a, double p, double z_max, double tol = 1e-10, int intervals = 4096);
ProfileTable build_K_profile(double a, double p, double z_max, double tol = 1e-10, int intervals = 4096);

/// I or K table whose range reaches at least y_max.
ProfileTable build_profile_covering(PrimitiveKind kind, double a, double p, double y_max, double tol = 1e-10,
                                    int intervals = 4096);

/// G, J or L: the z with V(z) = y, polished so |V(z) - y| <= tol.
double invert_profile(const ProfileTable& table, double y, double tol = 1e-12);

// Closed forms through the Gamma function, independent of the quadrature.

/// A_p = H(a^{1/q}) = a^{1/q - 1/2} sqrt(pi) Γ(1 + 1/q) / Γ(1/2 + 1/q).
double h_endpoint_closed_form(double a, double p);
/// I(z) for z^q > a from the convergent far-field expansion
/// I(z) = 2/(1-p) z^{(1-p)/2} + C_I - Σ_j binom(-1/2, j) a^j z^{1-q/2-jq}/(q/2 + jq - 1)
/// with C_I = a^{1/q-1/2} Γ(1/q) Γ(1/2 - 1/q) / (q Γ(1/2)).
double i_far_field_closed_form(double a, double p, double z);
/// Same for K with C_K = |a|^{1/q-1/2} Γ(1/2 - 1/q) Γ(1/2) / (q Γ(1 - 1/q)).
double k_far_field_closed_form(double a, double p, double z);

}  // namespace ipme
