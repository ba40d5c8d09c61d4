#pragma once

#include <vector>

#include "ipme/core.hpp"

namespace ipme {

struct FreeBoundaryTrace {
  std::vector<double> times;
  std::vector<double> r_inner;
  std::vector<double> r_outer;
  /// Threshold used at each time.
  std::vector<double> threshold;
  /// True where the thresholded support was empty.
  std::vector<bool> degenerate;

  bool any_degenerate() const;
};

struct SupportOptions {
  /// theta = floor + theta_rel * (max u - floor).
  double theta_rel = 1e-6;
  double floor = 0.0;
  Point center;
  /// When nonempty, only the face-connected component grown from these
  /// nodes counts as support.
  std::vector<Index> seeds;
};

FreeBoundaryTrace track_support(const std::vector<ScalarField>& snapshots, const SupportOptions& options = {});

/// Largest x with u > theta_rel * max u on a 1-d field (planar front).
double front_position_1d(const ScalarField& u, double theta_rel = 1e-6);

struct RateFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  /// RMS of the log-log residuals.
  double residual = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t samples = 0;
};

/// log r = log A + exponent log t by least squares, dropping the earliest 20%
/// of samples. Needs >= 6 samples spanning a factor >= 4 in time.
RateFit fit_rate(const FreeBoundaryTrace& trace, bool use_outer = true);
RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r);

/// min over nodes and consecutive snapshot pairs of (u_{j+1} - u_j)/(t_{j+1} - t_j) + u_j / t_j.
double benilan_crandall_check(const std::vector<ScalarField>& snapshots);

/// v = [alpha t u]^{1/(m-1)}, alpha = (m-1)^2/m, stamped with tau = log(t)/(m-1).
ScalarField rescale_v(const ScalarField& u, const Params& params);
/// u = v^{m-1} / (alpha t) with t = exp((m-1) tau).
ScalarField rescale_v_inverse(const ScalarField& v, const Params& params);

struct FriendlyGiantResult {
  std::vector<double> times;
  /// t u(., t) at each time.
  std::vector<ScalarField> profiles;
  /// Sup distance to the ball target (or to the previous profile without a target).
  std::vector<double> errors;
  /// errors divided by the target max (or the profile max).
  std::vector<double> relative_errors;
  bool has_target = false;
  bool decreasing = false;
};

/// t u(x, t) against U(x) = m/(m-1)^2 [G_p(kappa (R - |x - center|))]^{(m-1)/m}
/// when ball_radius > 0.
FriendlyGiantResult friendly_giant(const std::vector<ScalarField>& snapshots, const Params& params,
                                   double ball_radius = 0.0, const Point& center = Point());

/// max |Δ∞(G^m) + G| over interior nodes with G^m > 0.05 max G^m (δ-regularized).
double eigen_residual(const ScalarField& G, const Params& params, double delta = 1e-8);

/// min over shells r > R0 of (inf_{|x| ~ r} rho - max_{|x| ~ r + 2 R0} rho).
/// Shells have the grid spacing as width; radii whose partner shell leaves
/// the inscribed ball are skipped. Returns +inf if no radius qualifies.
double aleksandrov_check(const ScalarField& rho, double R0, const Point& center = Point());

/// R from the outer radius at the latest sample: r_outer(t) / t^{1/(m+1)}.
double barenblatt_R_estimate(const FreeBoundaryTrace& trace, double m);

/// e(t) = t^{1/(m+1)} max_x |rho(x, t) - beta_R(x, t)| for density snapshots.
std::vector<double> barenblatt_convergence(const std::vector<ScalarField>& rho_snapshots, double m, double R);

/// ∫ rho along the axis-0 line through `center` (trapezoid). Radial solutions
/// conserve this 1-d mass, not the d-dimensional one.
double line_mass(const ScalarField& rho, const Point& center = Point());
/// Line mass of beta_R (time independent).
double barenblatt_line_mass(double m, double R);
/// R whose Barenblatt has the given line mass.
double barenblatt_R_for_line_mass(double mass, double m);

/// True if every entry is strictly smaller than the previous one.
bool strictly_decreasing(const std::vector<double>& v);

}  // namespace ipme
