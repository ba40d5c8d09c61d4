#include "ipme/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>

#include "ipme/asymptotics.hpp"
#include "ipme/config.hpp"
#include "ipme/exact.hpp"
#include "ipme/io.hpp"
#include "ipme/solver.hpp"
#include "ipme/verify.hpp"

namespace ipme {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string numbered(const std::string& stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.snap", stem.c_str(), i);
  return buf;
}

ScalarField as_quantity(const ScalarField& u, Quantity q, const Params& params) {
  return q == Quantity::Rho ? density_from_pressure(u, params) : u;
}

ScalarField to_pressure(const Snapshot& s, const Params& params) {
  switch (s.quantity) {
    case Quantity::U: return s.field;
    case Quantity::Rho: return pressure_from_density(s.field, params);
    default: throw ParseError("snapshot quantity must be u or rho");
  }
}

// Max |u - exact| over all nodes at the final time.
double regression_error(const json& reg, const RunConfig& cfg, const ScalarField& u) {
  if (!reg.is_object() || !reg.contains("exact") || !reg.contains("threshold"))
    throw ConfigError("regression needs 'exact' and 'threshold'");
  for (const auto& [k, v] : reg.items())
    if (k != "exact" && k != "threshold") throw ConfigError("unknown key '" + k + "' in regression");
  const ExactSolution sol(exact_spec_from_json(reg["exact"], cfg.params));
  return (u.values() - sample_exact(sol, u.grid(), u.t()).values()).abs().maxCoeff();
}

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  auto report = [&err](int code, const char* what) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "IPME-E%03d: ", code);
    err << prefix << what << '\n';
    return kExitError;
  };
  try {
    return body();
  } catch (const Error& e) {
    return report(static_cast<int>(e.code()), e.what());
  } catch (const json::exception& e) {
    return report(static_cast<int>(ErrorCode::Config), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(static_cast<int>(ErrorCode::Io), e.what());
  }
}

int cmd_solve(const json& config, std::ostream& out) {
  const RunConfig cfg = interpret_config(config);
  SolveReport rep;
  if (cfg.problem == ProblemKind::Cauchy) {
    rep = solve_cauchy(make_cauchy(cfg), cfg.schedule, cfg.solver);
  } else {
    const DirichletProblem p = make_dirichlet(cfg);
    rep = cfg.problem == ProblemKind::Maximal ? solve_maximal(p, cfg.schedule, 1e-3, cfg.solver)
                                              : solve_dirichlet(p, cfg.schedule, cfg.solver);
  }

  fs::create_directories(cfg.output_dir);
  RunManifest& man = rep.manifest;
  man.output_files.clear();
  for (std::size_t i = 0; i < rep.snapshots.size(); ++i) {
    const std::string name = numbered("snap", i);
    write_snapshot(as_quantity(rep.snapshots[i], cfg.quantity, cfg.params), cfg.quantity, cfg.output_dir / name);
    man.output_files.push_back(name);
  }
  man.metrics["max_u"] = rep.max_u;
  man.metrics["min_interior"] = rep.min_interior;

  bool regression_failed = false;
  const json& reg = config.at("regression");
  if (!reg.is_null()) {
    const double e = regression_error(reg, cfg, rep.final_field);
    const double threshold = reg["threshold"].get<double>();
    man.metrics["regression_error"] = e;
    man.metrics["regression_threshold"] = threshold;
    regression_failed = !(e <= threshold);
  }
  man.output_files.push_back("manifest.json");
  write_manifest(man, cfg.output_dir / "manifest.json");
  write_timing(man, cfg.output_dir / "timing.json");

  out << "wrote " << rep.snapshots.size() << " snapshot(s) to " << cfg.output_dir.string() << '\n';
  for (const auto& w : man.warnings) out << "warning: " << w << '\n';
  if (regression_failed)
    throw NumericError("regression error " + format_real(man.metrics["regression_error"]) + " exceeds threshold " +
                       format_real(man.metrics["regression_threshold"]));
  return rep.continuation_warning ? kExitWarning : kExitOk;
}

int cmd_exact(const json& config, std::ostream& out) {
  const RunConfig cfg = interpret_config(config);
  const json& ex = config.at("exact");
  if (!ex.is_object()) throw ConfigError("exact section is missing");
  const ExactSolution sol(exact_spec_from_json(ex, cfg.params));
  const bool native = ex.value("native", false);
  std::vector<double> times;
  if (ex.contains("times")) {
    for (const auto& t : ex["times"]) times.push_back(t.get<double>());
  } else {
    times.push_back(cfg.t_end);
  }
  const std::string kind = to_string(sol.spec().kind);
  const bool rho_kind = kind.size() > 4 && kind.compare(kind.size() - 4, 4, "-rho") == 0;
  const Quantity q = native && rho_kind ? Quantity::Rho : Quantity::U;

  // Sample everything first so a domain error leaves no partial output.
  std::vector<ScalarField> fields;
  for (double t : times) fields.push_back(sample_exact(sol, cfg.grid, t, native));
  fs::create_directories(cfg.output_dir);
  for (std::size_t i = 0; i < fields.size(); ++i) write_snapshot(fields[i], q, cfg.output_dir / numbered("exact", i));
  out << "wrote " << fields.size() << " exact snapshot(s) of " << kind << " to " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& suites, bool inject_fault, std::ostream& out) {
  const auto results = run_suites(suites, inject_fault);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name << "  " << r.detail << '\n';
    failed += !r.passed;
  }
  out << results.size() - failed << '/' << results.size() << " cases passed\n";
  if (failed) {
    out << "failing:";
    for (const auto& r : results)
      if (!r.passed) out << ' ' << r.suite << '/' << r.name;
    out << '\n';
  }
  return failed ? kExitError : kExitOk;
}

int cmd_asym(const json& config, std::ostream& out) {
  const RunConfig cfg = interpret_config(config);
  const json& a = config.at("asym");
  const fs::path dir = a.at("snapshot_dir").get<std::string>();
  const std::vector<Snapshot> snaps = read_snapshot_dir(dir);
  if (snaps.empty()) throw IoError("no snapshots in '" + dir.string() + "'");

  std::vector<ScalarField> u;
  for (const auto& s : snaps) u.push_back(to_pressure(s, cfg.params));
  Point center;
  if (!a.at("center").empty()) {
    center.resize(static_cast<Index>(a["center"].size()));
    for (Index i = 0; i < center.size(); ++i) center[i] = a["center"][static_cast<std::size_t>(i)].get<double>();
  }
  fs::create_directories(cfg.output_dir);

  SupportOptions so;
  so.theta_rel = a.at("theta_rel").get<double>();
  so.center = center;
  if (a.at("seeded").get<bool>()) {
    const GridSpec& g = u.front().grid();
    so.seeds = {g.nearest(center.size() ? center : Point(Point::Zero(g.dim())))};
  }
  const FreeBoundaryTrace trace = track_support(u, so);
  write_trace_csv(cfg.output_dir / "trace.csv", trace);
  out << "trace: " << trace.times.size() << " samples\n";

  const std::string mode = a.at("mode").get<std::string>();
  if (mode == "support") {
    const RateFit fit = fit_rate(trace);
    write_csv(cfg.output_dir / "rate.csv", {"exponent", "amplitude", "residual", "t_lo", "t_hi", "samples"},
              {{format_real(fit.exponent), format_real(fit.amplitude), format_real(fit.residual), format_real(fit.t_lo),
                format_real(fit.t_hi), std::to_string(fit.samples)}});
    out << "rate exponent " << format_real(fit.exponent) << " (expected " << format_real(1.0 / (cfg.params.m() + 1.0))
        << ")\n";
  } else if (mode == "friendly-giant") {
    const FriendlyGiantResult fg = friendly_giant(u, cfg.params, a.at("ball_radius").get<double>(), center);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fg.times.size(); ++i)
      rows.push_back({format_real(fg.times[i]), format_real(fg.errors[i]), format_real(fg.relative_errors[i])});
    write_csv(cfg.output_dir / "friendly_giant.csv", {"t", "error", "relative_error"}, rows);
    out << "error curve " << (fg.decreasing ? "strictly decreasing" : "not strictly decreasing") << '\n';
  } else if (mode == "barenblatt") {
    std::vector<ScalarField> rho;
    for (const auto& f : u) rho.push_back(density_from_pressure(f, cfg.params));
    double R = a.at("beta_R").get<double>();
    if (!(R > 0.0)) R = barenblatt_R_for_line_mass(line_mass(rho.front(), center), cfg.params.m());
    const auto e = barenblatt_convergence(rho, cfg.params.m(), R);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < e.size(); ++i) rows.push_back({format_real(rho[i].t()), format_real(e[i])});
    write_csv(cfg.output_dir / "barenblatt.csv", {"t", "e"}, rows);
    out << "beta_R radius " << format_real(R) << ", e(t) "
        << (strictly_decreasing(e) ? "strictly decreasing" : "not strictly decreasing") << '\n';
  } else if (mode == "benilan-crandall") {
    const double worst = benilan_crandall_check(u);
    write_csv(cfg.output_dir / "benilan_crandall.csv", {"min_ut_plus_u_over_t"}, {{format_real(worst)}});
    out << "min(u_t + u/t) " << format_real(worst) << '\n';
  } else if (mode == "aleksandrov") {
    const double gap = aleksandrov_check(density_from_pressure(u.back(), cfg.params), a.at("R0").get<double>(), center);
    write_csv(cfg.output_dir / "aleksandrov.csv", {"min_gap"}, {{format_real(gap)}});
    out << "reflection gap " << format_real(gap) << '\n';
  } else {
    throw ConfigError("unknown asym mode '" + mode + "'");
  }
  return kExitOk;
}

}  // namespace ipme
