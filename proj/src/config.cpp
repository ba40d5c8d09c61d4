#include "ipme/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ipme {

namespace fs = std::filesystem;
using json = nlohmann::json;

json default_config() {
  return json::parse(R"({
    "params": {"m": 2.0, "c": 0.0, "eps": 0.001, "delta": 0.001},
    "grid": {"dim": 1, "n": [65], "lo": [0.0], "hi": [1.0]},
    "problem": "dirichlet",
    "initial": {"type": "constant", "value": 0.0},
    "boundary": "initial",
    "domain": {"shape": "box", "center": [], "radius": 0.0},
    "schedule": {"eps": [0.001], "delta": [0.001], "n": []},
    "t_start": 0.0,
    "t_end": 1.0,
    "snapshot_times": [],
    "output_dir": "ipme_out",
    "quantity": "u",
    "solver": {"safety": 0.4, "gradient": "centered"},
    "cauchy": {"r": 1.0, "M": 1.0},
    "regression": null,
    "exact": null,
    "asym": {"snapshot_dir": "", "mode": "support", "ball_radius": 0.0, "beta_R": 0.0, "R0": 0.0,
             "theta_rel": 1e-6, "center": [], "seeded": false}
  })");
}

namespace {

// Objects whose keys are fixed by the defaults.
const std::set<std::string> kClosedSections = {"params", "grid", "domain", "schedule", "solver", "cauchy", "asym"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

std::set<std::string> keys_of(const json& obj) {
  std::set<std::string> s;
  for (const auto& [k, v] : obj.items()) s.insert(k);
  return s;
}

double num(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing key '") + key + "'");
  if (!it->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

std::vector<double> reals(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + " must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Point point_from(const json& j, const char* what) {
  const auto v = reals(j, what);
  if (v.size() > 3) throw ConfigError(std::string(what) + " has more than 3 components");
  Point p(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Index>(i)] = v[i];
  return p;
}

json parse_scalar(const std::string& text) {
  try {
    json v = json::parse(text);
    if (v.is_primitive()) return v;
  } catch (const json::exception&) {
  }
  return json(text);
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  json* node = &doc;
  std::istringstream is(path);
  for (std::string part; std::getline(is, part, '.');) {
    if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown key '" + path + "'");
    node = &(*node)[part];
  }
  if (!node->is_primitive()) throw ConfigError("override '" + path + "' does not name a scalar");
  json value = parse_scalar(assignment.substr(eq + 1));
  if (node->is_number() && !value.is_number()) throw ConfigError("override '" + path + "' needs a number");
  *node = value;
}

json merge_config(const json& doc, const std::vector<std::string>& overrides) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  json merged = default_config();
  check_keys(doc, keys_of(merged), "config");
  for (const auto& [k, v] : doc.items()) {
    if (kClosedSections.count(k)) {
      check_keys(v, keys_of(merged[k]), k);
      for (const auto& [kk, vv] : v.items()) merged[k][kk] = vv;
    } else {
      merged[k] = v;
    }
  }
  for (const auto& o : overrides) apply_override(merged, o);
  return merged;
}

json load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return merge_config(doc, overrides);
}

ExactSolutionSpec exact_spec_from_json(const json& j, const Params& params) {
  check_keys(j,
             {"type", "kind", "R", "c_speed", "a_const", "C_const", "x0", "t0", "lambda", "sign", "max_radius", "times",
              "native"},
             "exact spec");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("exact spec needs a string 'kind'");
  ExactSolutionSpec s;
  s.kind = exact_kind_from_string(j["kind"].get<std::string>());
  s.params = params;
  s.R = num_or(j, "R", s.R);
  s.c_speed = num_or(j, "c_speed", s.c_speed);
  s.a_const = num_or(j, "a_const", s.a_const);
  s.C_const = num_or(j, "C_const", s.C_const);
  s.t0 = num_or(j, "t0", s.t0);
  s.lambda = num_or(j, "lambda", s.lambda);
  s.sign = static_cast<int>(num_or(j, "sign", s.sign));
  s.max_radius = num_or(j, "max_radius", s.max_radius);
  if (j.contains("x0")) s.x0 = point_from(j["x0"], "x0");
  s.validate();
  return s;
}

DataFunction make_data(const json& spec, const Params& params) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string())
    throw ConfigError("data spec needs a string 'type'");
  const std::string type = spec["type"].get<std::string>();
  DataFunction d;
  if (type == "constant") {
    check_keys(spec, {"type", "value"}, "constant data");
    const double v = num(spec, "value");
    if (v < 0.0) throw ConfigError("data must be nonnegative");
    d.f = [v](const Point&, double) { return v; };
  } else if (type == "exact") {
    auto sol = std::make_shared<ExactSolution>(exact_spec_from_json(spec, params));
    d.f = [sol](const Point& x, double t) { return sol->u(x, t); };
    d.time_dependent = true;
  } else if (type == "bump") {
    check_keys(spec, {"type", "amplitude", "radius", "center"}, "bump data");
    const double A = num(spec, "amplitude"), r = num(spec, "radius");
    if (A < 0.0 || !(r > 0.0)) throw ConfigError("bump needs amplitude >= 0 and radius > 0");
    const Point c = spec.contains("center") ? point_from(spec["center"], "center") : Point();
    d.f = [A, r, c](const Point& x, double) {
      const double s = (c.size() == 0 ? x.squaredNorm() : (x - c).squaredNorm()) / (r * r);
      return A * std::max(0.0, 1.0 - s);
    };
  } else if (type == "two-bump") {
    check_keys(spec, {"type", "amplitude", "radius", "centers"}, "two-bump data");
    const double A = num(spec, "amplitude"), r = num(spec, "radius");
    if (A < 0.0 || !(r > 0.0)) throw ConfigError("bumps need amplitude >= 0 and radius > 0");
    if (!spec.contains("centers") || !spec["centers"].is_array()) throw ConfigError("two-bump needs 'centers'");
    std::vector<Point> cs;
    for (const auto& c : spec["centers"]) cs.push_back(point_from(c, "centers"));
    d.f = [A, r, cs](const Point& x, double) {
      double v = 0.0;
      for (const auto& c : cs) v = std::max(v, A * std::max(0.0, 1.0 - (x - c).squaredNorm() / (r * r)));
      return v;
    };
  } else if (type == "linear") {
    // u = a.x + b + |a|^2 t solves the equation exactly.
    check_keys(spec, {"type", "slope", "offset"}, "linear data");
    const Point a = point_from(spec.at("slope"), "slope");
    const double b = num(spec, "offset");
    d.f = [a, b](const Point& x, double t) { return a.dot(x.head(a.size())) + b + a.squaredNorm() * t; };
    d.time_dependent = true;
  } else {
    throw ConfigError("unknown data type '" + type + "'");
  }
  return d;
}

GridSpec grid_from_json(const json& j) {
  const int dim = static_cast<int>(num(j, "dim"));
  const auto n = reals(j.at("n"), "grid.n");
  const auto lo = reals(j.at("lo"), "grid.lo");
  const auto hi = reals(j.at("hi"), "grid.hi");
  if (dim < 1 || dim > 3) throw ParameterError("grid dimension must be 1, 2 or 3");
  if (static_cast<int>(n.size()) != dim || static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
    throw ConfigError("grid.n, grid.lo and grid.hi need one entry per dimension");
  std::array<Index, 3> nn{1, 1, 1};
  std::array<double, 3> h{1, 1, 1}, o{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 3 || n[a] != std::floor(n[a])) throw ParameterError("every axis needs an integer count of at least 3 nodes");
    if (!(hi[a] > lo[a])) throw ParameterError("grid extent must be positive");
    nn[a] = static_cast<Index>(n[a]);
    h[a] = (hi[a] - lo[a]) / (n[a] - 1.0);
    o[a] = lo[a];
  }
  return GridSpec(dim, nn, h, o);
}

RunConfig interpret_config(const json& doc) {
  RunConfig cfg;
  cfg.doc = doc;
  try {
    const json& p = doc.at("params");
    cfg.params = Params(num(p, "m"), num(p, "c"), num(p, "eps"), num(p, "delta"));
    cfg.grid = grid_from_json(doc.at("grid"));

    const std::string prob = doc.at("problem").get<std::string>();
    if (prob == "dirichlet") cfg.problem = ProblemKind::Dirichlet;
    else if (prob == "maximal") cfg.problem = ProblemKind::Maximal;
    else if (prob == "cauchy") cfg.problem = ProblemKind::Cauchy;
    else throw ConfigError("unknown problem '" + prob + "'");

    const json& s = doc.at("schedule");
    cfg.schedule.eps = reals(s.at("eps"), "schedule.eps");
    cfg.schedule.delta = reals(s.at("delta"), "schedule.delta");
    for (double v : reals(s.at("n"), "schedule.n")) {
      if (v != std::floor(v)) throw ConfigError("schedule.n must hold integers");
      cfg.schedule.n.push_back(static_cast<int>(v));
    }
    cfg.schedule.validate();

    cfg.t_start = num(doc, "t_start");
    cfg.t_end = num(doc, "t_end");
    cfg.snapshot_times = reals(doc.at("snapshot_times"), "snapshot_times");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
    cfg.quantity = quantity_from_string(doc.at("quantity").get<std::string>());
    if (cfg.quantity != Quantity::U && cfg.quantity != Quantity::Rho) throw ConfigError("quantity must be u or rho");

    const json& dom = doc.at("domain");
    const std::string shape = dom.at("shape").get<std::string>();
    if (shape == "ball") cfg.domain = DomainMask::ball(point_from(dom.at("center"), "domain.center"), num(dom, "radius"));
    else if (shape != "box") throw ConfigError("domain shape must be box or ball");

    const json& sv = doc.at("solver");
    cfg.solver.safety = num(sv, "safety");
    if (!(cfg.solver.safety > 0.0 && cfg.solver.safety <= 1.0)) throw ConfigError("solver.safety must lie in (0, 1]");
    const std::string grad = sv.at("gradient").get<std::string>();
    if (grad == "upwind") cfg.solver.gradient = GradientScheme::Upwind;
    else if (grad != "centered") throw ConfigError("solver.gradient must be centered or upwind");

    cfg.cauchy_r = num(doc.at("cauchy"), "r");
    cfg.cauchy_M = num(doc.at("cauchy"), "M");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

DirichletProblem make_dirichlet(const RunConfig& cfg) {
  DirichletProblem p;
  p.grid = cfg.grid;
  p.params = cfg.params;
  p.domain = cfg.domain;
  p.t_start = cfg.t_start;
  p.t_end = cfg.t_end;
  p.snapshot_times = cfg.snapshot_times;

  const DataFunction init = make_data(cfg.doc.at("initial"), cfg.params);
  Array values(cfg.grid.size());
  for (Index i = 0; i < cfg.grid.size(); ++i) values[i] = init.f(cfg.grid.coords(i), cfg.t_start);
  if ((values < 0.0).any()) throw DomainError("initial data must be nonnegative");
  p.initial_values = values;

  const json& b = cfg.doc.at("boundary");
  if (b.is_string()) {
    if (b.get<std::string>() != "initial") throw ConfigError("boundary must be \"initial\" or a data spec");
    const auto f = init.f;
    const double t0 = cfg.t_start;
    p.boundary = BoundaryData::sampled(values, [f, t0](const Point& x) { return f(x, t0); });
  } else {
    const DataFunction g = make_data(b, cfg.params);
    p.boundary = BoundaryData::from_function(g.f, g.time_dependent);
  }
  return p;
}

CauchyProblem make_cauchy(const RunConfig& cfg) {
  CauchyProblem p;
  p.grid = cfg.grid;
  p.params = cfg.params;
  const DataFunction init = make_data(cfg.doc.at("initial"), cfg.params);
  const double t0 = cfg.t_start;
  const auto f = init.f;
  p.u0 = [f, t0](const Point& x) { return f(x, t0); };
  p.r = cfg.cauchy_r;
  p.M = cfg.cauchy_M;
  p.t_start = cfg.t_start;
  p.t_end = cfg.t_end;
  p.snapshot_times = cfg.snapshot_times;
  return p;
}

}  // namespace ipme
