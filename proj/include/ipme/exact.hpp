#pragma once

#include <memory>
#include <string>

#include "ipme/core.hpp"
#include "ipme/profiles.hpp"

namespace ipme {

enum class ExactKind {
  BarenblattRho,
  BarenblattU,
  TravelingWaveRho,
  TravelingWaveU,
  SeparableBall,
  SeparableAnnulus,
  NegLambdaAPos,
  NegLambdaAZero,
  NegLambdaANeg,
};

std::string to_string(ExactKind kind);
ExactKind exact_kind_from_string(const std::string& name);

/// Tagged description of a closed-form solution. Fields not used by a kind
/// are ignored.
///
/// Separable kinds: the time factor only depends on t0 once λ is fixed up to
/// sign, so `lambda` selects the branch (> 0 for ball/annulus, < 0 for the
/// neg-lambda family) and `t0` the blow-up or extinction time.
/// `R` is the Barenblatt radius constant, the inner radius R1 of the annulus,
/// and the shift R of the neg-lambda a > 0 and a = 0 branches. The ball radius
/// is derived from `a_const` (kappa R = A_p). `max_radius` sizes the I/K
/// tables for the unbounded branches.
struct ExactSolutionSpec {
  ExactKind kind = ExactKind::BarenblattU;
  Params params{2.0};
  double R = 1.0;
  double c_speed = 1.0;
  double a_const = 1.0;
  double C_const = 0.0;
  Point x0;
  double t0 = 0.0;
  double lambda = 1.0;
  int sign = +1;
  double max_radius = 4.0;

  void validate() const;
};

/// sqrt(2m/(m+1)) = sqrt(2/(p+1)): the radial rescaling carrying g'' ± g^p = 0
/// onto the primitives H, I, K.
inline double profile_scale(double m) { return std::sqrt(2.0 * m / (m + 1.0)); }

// Pointwise formulas. x is taken relative to the origin.
double barenblatt_rho(const Point& x, double t, double m, double R);
double barenblatt_u(const Point& x, double t, double m, double R);
/// Support radius R t^{1/(m+1)}.
double barenblatt_radius(double t, double m, double R);
double traveling_wave_u(const Point& x, double t, double m, double c, double a);
double traveling_wave_rho(const Point& x, double t, double m, double c, double a);
/// [C + (m-1) λ t]^{-1/(m-1)}.
double sep_time_factor(double t, double C, double lambda, const Params& params);

/// Evaluator for a spec; owns the profile table of the separable kinds.
class ExactSolution {
 public:
  explicit ExactSolution(ExactSolutionSpec spec);

  const ExactSolutionSpec& spec() const { return spec_; }

  /// Pressure u(x, t).
  double u(const Point& x, double t) const;
  /// Density rho(x, t).
  double rho(const Point& x, double t) const;
  /// The quantity named by the kind: rho for the *-rho kinds, u otherwise.
  double value(const Point& x, double t) const;
  /// Analytic u_t(x, t) on the positivity set.
  double u_t(const Point& x, double t) const;

  /// Ball radius (SeparableBall, and the sign = -1 neg-lambda a > 0 branch)
  /// or outer radius R2 (SeparableAnnulus).
  double outer_radius() const;
  /// Radial profile g(s) solving g'' + g^p = 0 (λ > 0) or g'' - g^p = 0
  /// (λ < 0), for the separable kinds with a table.
  double radial_profile(double s) const;

  const ProfileTable* table() const { return table_.get(); }

 private:
  double radius(const Point& x) const;
  double separable_u(double r, double t) const;

  ExactSolutionSpec spec_;
  std::shared_ptr<const ProfileTable> table_;
  double kappa_ = 1.0;
  double endpoint_ = 0.0;
};

/// Samples u (or the kind's quantity when `native` is set) on the grid.
ScalarField sample_exact(const ExactSolution& sol, const GridSpec& grid, double t, bool native = false);

/// Friendly Giant target on a ball of radius R:
/// U(x) = m/(m-1)^2 [G_p(kappa (R - |x|))]^{(m-1)/m}, with a chosen so that
/// kappa R = A_p.
ExactSolution ball_profile(double m, double R, const Point& center = Point());

}  // namespace ipme
