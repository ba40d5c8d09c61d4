#include "ipme/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ipme/exact.hpp"
#include "ipme/io.hpp"
#include "ipme/operators.hpp"
#include "ipme/profiles.hpp"
#include "ipme/solver.hpp"

namespace ipme {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CaseResult check(const std::string& suite, const std::string& name, bool ok, const std::string& detail) {
  return {suite, name, ok, detail};
}

// Sign flip of the mixed differences lasts for one run_suites call.
struct FaultScope {
  explicit FaultScope(bool on) : previous(testing::stencil_fault()) { testing::set_stencil_fault(on); }
  ~FaultScope() { testing::set_stencil_fault(previous); }
  bool previous;
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"operators", "exact", "comparison", "scaling", "io"};
  return names;
}

std::vector<CaseResult> verify_operators() {
  const std::string s = "operators";
  std::vector<CaseResult> out;
  const GridSpec grid = GridSpec::cube(2, 17, -1.0, 1.0);

  {
    // Quadratics are differentiated exactly.
    auto f = [](const Point& x) { return 1.0 + x[0] - 2.0 * x[1] + x[0] * x[0] + 3.0 * x[0] * x[1] - x[1] * x[1]; };
    const ScalarField u = ScalarField::sample(grid, f);
    double err = 0.0;
    for (Index i = 0; i < grid.size(); ++i) {
      if (grid.is_boundary(i)) continue;
      const Point x = grid.coords(i);
      const StencilEval e = stencil_eval(u, i, 0.0);
      err = std::max({err, std::abs(e.grad[0] - (1.0 + 2.0 * x[0] + 3.0 * x[1])),
                      std::abs(e.grad[1] - (-2.0 + 3.0 * x[0] - 2.0 * x[1])), std::abs(e.hess(0, 0) - 2.0),
                      std::abs(e.hess(0, 1) - 3.0), std::abs(e.hess(1, 1) + 2.0)});
    }
    out.push_back(check(s, "quadratic-consistency", err < 1e-9, "max error " + fmt(err)));
  }
  {
    const ScalarField u = ScalarField::sample(grid, [](const Point& x) { return 0.5 + 0.3 * x[0] - 0.7 * x[1]; });
    double worst = 0.0;
    for (Index i = 0; i < grid.size(); ++i)
      if (!grid.is_boundary(i)) worst = std::max(worst, std::abs(stencil_eval(u, i, 0.0).inf_lap_reg));
    out.push_back(check(s, "linear-infinity-harmonic", worst < 1e-10, "max |inf-lap| " + fmt(worst)));
  }
  {
    // x1^2 + 2 x2^2 at (1, 0): <diag(2,4)(2,0),(2,0)>/4 = 2.
    const GridSpec g = GridSpec::cube(2, 33, -2.0, 2.0);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; });
    Point x(2);
    x << 1.0, 0.0;
    const double v = stencil_eval(u, g.nearest(x), 0.0).inf_lap_reg;
    out.push_back(check(s, "anisotropic-quadratic", std::abs(v - 2.0) < 1e-9, "value " + fmt(v)));
  }
  {
    // Off-axis direction so the mixed term matters: u = (x + y)^2 / 2 has Δ∞u = 2.
    const ScalarField u = ScalarField::sample(grid, [](const Point& x) { return 0.5 * (x[0] + x[1]) * (x[0] + x[1]); });
    Point x(2);
    x << 0.5, 0.25;
    const double v = stencil_eval(u, grid.nearest(x), 0.0).inf_lap_reg;
    out.push_back(check(s, "diagonal-quadratic", std::abs(v - 2.0) < 1e-9, "value " + fmt(v)));
  }
  {
    const bool ok = beta_c(0.0, 0.2) == 0.1 && beta_c(0.5, 0.2) == 0.5 && std::abs(beta_c(0.1, 0.2) - 0.125) < 1e-15;
    out.push_back(check(s, "beta-cutoff", ok, "blend values"));
  }
  return out;
}

std::vector<CaseResult> verify_exact() {
  const std::string s = "exact";
  std::vector<CaseResult> out;
  {
    Point x = Point::Zero(2);
    const double b = barenblatt_rho(x, 1.0, 2.0, 1.0);
    out.push_back(check(s, "barenblatt-rho-origin", std::abs(b - 1.0 / 12.0) < 1e-15, "value " + fmt(b)));
    double worst = 0.0;
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
      x[0] = r;
      for (double m : {1.5, 2.0, 3.0}) {
        const double u = barenblatt_u(x, 1.7, m, 1.0);
        const double via = pressure_from_density(barenblatt_rho(x, 1.7, m, 1.0), m);
        if (u > 0.0) worst = std::max(worst, std::abs(via - u) / u);
      }
    }
    out.push_back(check(s, "barenblatt-pressure-transform", worst < 1e-12, "relative " + fmt(worst)));
  }
  {
    // a = 0 branch: u = (|x| - R)^2 / (2 (m + 1) (t0 - t)).
    ExactSolutionSpec spec;
    spec.kind = ExactKind::NegLambdaAZero;
    spec.params = Params(2.0);
    spec.R = 0.0;
    spec.t0 = 1.0;
    spec.lambda = -1.0;
    const ExactSolution sol(spec);
    Point x = Point::Zero(2);
    x[0] = 1.0;
    const double v = sol.u(x, 0.0);
    out.push_back(check(s, "a-zero-branch", std::abs(v - 1.0 / 6.0) < 1e-15, "value " + fmt(v)));

    // Its discrete residual: the profile is quadratic, so only rounding remains.
    const GridSpec g = GridSpec::cube(2, 33, -1.0, 1.0);
    const ScalarField u = sample_exact(sol, g, 0.0);
    const Params p(2.0, 0.0, 0.0, 1e-12);
    double res = 0.0;
    for (Index i = 0; i < g.size(); ++i)
      if (!g.is_boundary(i)) res = std::max(res, std::abs(rhs_full(u, i, p) - sol.u_t(g.coords(i), 0.0)));
    out.push_back(check(s, "a-zero-residual", res < 1e-9, "max residual " + fmt(res)));
  }
  {
    const double p = 0.5;
    const ProfileTable H = build_H_profile(1.0, p);
    const double diff = std::abs(H.range_max() - h_endpoint_closed_form(1.0, p));
    out.push_back(check(s, "H-endpoint-gamma", diff < 1e-9, "difference " + fmt(diff)));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, H.range_max());
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double y = U(rng);
      worst = std::max(worst, std::abs(H.value(invert_profile(H, y)) - y));
    }
    out.push_back(check(s, "H-inverse-roundtrip", worst < 1e-9, "max error " + fmt(worst)));
  }
  return out;
}

std::vector<CaseResult> verify_comparison() {
  const std::string s = "comparison";
  std::vector<CaseResult> out;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const GridSpec grid = GridSpec::cube(2, 13, -1.0, 1.0);
  double worst = -1.0;
  for (int trial = 0; trial < 5; ++trial) {
    Array g1(grid.size()), g2(grid.size());
    const double a = U(rng), b = U(rng), lift = 0.2 * U(rng);
    for (Index i = 0; i < grid.size(); ++i) {
      const Point x = grid.coords(i);
      g1[i] = 0.5 * a * (1.0 + std::sin(3.0 * x[0] + b)) * (1.0 - 0.5 * x[1] * x[1]);
      g2[i] = g1[i] + lift * (1.0 + x[0] * x[1]) * 0.5;
    }
    DirichletProblem p1;
    p1.grid = grid;
    p1.params = Params(2.0, 0.0, 1e-3, 1e-3);
    p1.t_end = 0.05;
    p1.snapshot_times = {0.01, 0.025, 0.05};
    DirichletProblem p2 = p1;
    p1.initial_values = g1;
    p1.boundary = BoundaryData::sampled(g1, {});
    p2.initial_values = g2;
    p2.boundary = BoundaryData::sampled(g2, {});
    const SolveReport r1 = solve_fixed(p1), r2 = solve_fixed(p2);
    for (std::size_t j = 0; j < r1.snapshots.size(); ++j)
      worst = std::max(worst, (r1.snapshots[j].values() - r2.snapshots[j].values()).maxCoeff());
  }
  out.push_back(check(s, "ordered-data-stay-ordered", worst <= 1e-8 + 1e-3, "max excess " + fmt(worst)));
  return out;
}

std::vector<CaseResult> verify_scaling() {
  const std::string s = "scaling";
  std::vector<CaseResult> out;
  // T_2: 2 u(x, 2 t) solves the same equation. Barenblatt data, m = 2.
  const double m = 2.0;
  const GridSpec grid = GridSpec::cube(2, 33, -2.0, 2.0);
  ExactSolutionSpec spec;
  spec.kind = ExactKind::BarenblattU;
  spec.params = Params(m);
  spec.R = 1.0;
  const auto sol = std::make_shared<ExactSolution>(spec);

  DirichletProblem a;
  a.grid = grid;
  a.params = Params(m, 0.0, 1e-4, 1e-4);
  a.t_start = 1.0;
  a.t_end = 1.5;
  a.boundary = BoundaryData::from_function([sol](const Point& x, double t) { return sol->u(x, t); });
  a.initial_values = sample_exact(*sol, grid, 1.0).values();
  DirichletProblem b = a;
  b.t_start = 0.5;
  b.t_end = 0.75;
  b.boundary = BoundaryData::from_function([sol](const Point& x, double t) { return 2.0 * sol->u(x, 2.0 * t); });
  b.initial_values = 2.0 * a.initial_values.value();
  const SolveReport ra = solve_fixed(a), rb = solve_fixed(b);
  const double single = (ra.final_field.values() - sample_exact(*sol, grid, 1.5).values()).abs().maxCoeff();
  const double mismatch = (2.0 * ra.final_field.values() - rb.final_field.values()).abs().maxCoeff();
  out.push_back(check(s, "T-lambda", mismatch <= 2.0 * 2.0 * single,
                      "mismatch " + fmt(mismatch) + " vs rescaled single-run error " + fmt(2.0 * single)));
  return out;
}

std::vector<CaseResult> verify_io() {
  const std::string s = "io";
  std::vector<CaseResult> out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  const GridSpec grid(2, {7, 5, 1}, {0.1, 0.3, 1.0}, {-0.35, 1.0 / 3.0, 0.0});
  Array v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = U(rng) * std::pow(10.0, static_cast<int>(U(rng)) % 30);
  const ScalarField f(grid, v, 0.1 + 1.0 / 7.0);
  const std::string text = format_snapshot(f, Quantity::Rho);
  const Snapshot back = parse_snapshot(text);
  const bool exact = back.field.grid() == grid && back.field.t() == f.t() && (back.field.values() == v).all() &&
                     back.quantity == Quantity::Rho;
  out.push_back(check(s, "snapshot-roundtrip", exact, "bit-exact values and header"));
  out.push_back(check(s, "snapshot-deterministic", format_snapshot(back.field, back.quantity) == text,
                      "rewrite is byte-identical"));
  bool rejected = false;
  try {
    parse_snapshot("# ipme v1 d=1 n=3 h=1 origin=0 t=0 quantity=w\n0\n1\n2\n");
  } catch (const ParseError&) {
    rejected = true;
  }
  out.push_back(check(s, "unknown-quantity-rejected", rejected, "parse error raised"));
  return out;
}

std::vector<CaseResult> run_suites(const std::vector<std::string>& suites, bool inject_fault) {
  const FaultScope scope(inject_fault);
  std::vector<std::string> todo = suites.empty() ? suite_names() : suites;
  std::vector<CaseResult> out;
  for (const auto& name : todo) {
    std::vector<CaseResult> r;
    if (name == "operators") r = verify_operators();
    else if (name == "exact") r = verify_exact();
    else if (name == "comparison") r = verify_comparison();
    else if (name == "scaling") r = verify_scaling();
    else if (name == "io") r = verify_io();
    else throw ConfigError("unknown suite '" + name + "'");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace ipme
