#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipme/core.hpp"
#include "ipme/exact.hpp"
#include "ipme/io.hpp"
#include "ipme/solver.hpp"

namespace ipme {

// Run configuration. A config file is one JSON document; it is merged onto
// default_config(), so only non-default entries need to be written. The
// grammar (all keys optional):
//
//   params      {m, c, eps, delta}
//   grid        {dim, n: [nodes per axis], lo: [...], hi: [...]}
//   problem     "dirichlet" | "maximal" | "cauchy"
//   initial     data spec (below)
//   boundary    "initial" (hold the initial values) or a data spec
//   domain      {shape: "box" | "ball", center: [...], radius}
//   schedule    {eps: [...], delta: [...], n: [...]}
//   t_start, t_end, snapshot_times: [...]
//   output_dir  directory for snapshots and manifest
//   quantity    quantity written to snapshots: "u" | "rho"
//   solver      {safety, gradient: "centered" | "upwind"}
//   cauchy      {r, M}
//   regression  {exact: exact spec, threshold} or null
//   exact       exact spec plus {times: [...], native: bool}
//   asym        {snapshot_dir, mode, ball_radius, beta_R, R0, theta_rel, center: [...], seeded}
//               mode: support | friendly-giant | barenblatt | benilan-crandall | aleksandrov
//               seeded: count only the support component containing the center node
//
// Data specs: {type: "constant", value}, {type: "exact", <exact spec>},
// {type: "bump", amplitude, radius, center}, {type: "two-bump", amplitude,
// radius, centers: [[...], [...]]}, {type: "linear", slope: [...], offset}.
// Exact specs: {kind, R, c_speed, a_const, C_const, x0, t0, lambda, sign,
// max_radius}; m comes from params.
//
// Overrides are "dotted.path=value" strings applied after the merge; the path
// must name an existing scalar leaf.
nlohmann::json default_config();
nlohmann::json load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
nlohmann::json merge_config(const nlohmann::json& doc, const std::vector<std::string>& overrides = {});
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// A space-time function built from a data spec.
struct DataFunction {
  std::function<double(const Point&, double)> f;
  bool time_dependent = false;
};

DataFunction make_data(const nlohmann::json& spec, const Params& params);
ExactSolutionSpec exact_spec_from_json(const nlohmann::json& spec, const Params& params);

struct RunConfig {
  nlohmann::json doc;
  Params params{2.0};
  GridSpec grid = GridSpec::cube(1, 3, 0.0, 1.0);
  ProblemKind problem = ProblemKind::Dirichlet;
  RegularizationSchedule schedule;
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir;
  Quantity quantity = Quantity::U;
  DomainMask domain;
  SolverOptions solver;
  double cauchy_r = 1.0;
  double cauchy_M = 1.0;
};

RunConfig interpret_config(const nlohmann::json& doc);
GridSpec grid_from_json(const nlohmann::json& j);

DirichletProblem make_dirichlet(const RunConfig& cfg);
CauchyProblem make_cauchy(const RunConfig& cfg);

}  // namespace ipme
