#include "ipme/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ipme {

namespace fs = std::filesystem;

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::U: return "u";
    case Quantity::Rho: return "rho";
    case Quantity::V: return "v";
    case Quantity::G: return "G";
  }
  return "u";
}

Quantity quantity_from_string(const std::string& tag) {
  if (tag == "u") return Quantity::U;
  if (tag == "rho") return Quantity::Rho;
  if (tag == "v") return Quantity::V;
  if (tag == "G") return Quantity::G;
  throw ParseError("unknown quantity tag '" + tag + "'");
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

template <typename T>
std::string join(const T* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>)
      s += format_real(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& tok, std::size_t line) {
  if (tok.empty()) parse_fail(line, "empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) parse_fail(line, "malformed number '" + tok + "'");
  // strtod flags subnormal results with ERANGE too; only overflow is an error.
  if (errno == ERANGE && std::isinf(v)) parse_fail(line, "number out of range '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string expect_key(const std::string& tok, const std::string& key, std::size_t line) {
  const std::string prefix = key + "=";
  if (tok.compare(0, prefix.size(), prefix) != 0) parse_fail(line, "expected '" + prefix + "' got '" + tok + "'");
  return tok.substr(prefix.size());
}

}  // namespace

std::string format_snapshot(const ScalarField& field, Quantity quantity) {
  const GridSpec& g = field.grid();
  const int d = g.dim();
  std::string out;
  out.reserve(static_cast<std::size_t>(g.size()) * 24 + 128);
  out += "# ipme v1 d=" + std::to_string(d);
  out += " n=" + join(g.n().data(), d);
  out += " h=" + join(g.h().data(), d);
  out += " origin=" + join(g.origin().data(), d);
  out += " t=" + format_real(field.t());
  out += " quantity=" + to_string(quantity);
  out += '\n';
  for (Index i = 0; i < g.size(); ++i) {
    out += format_real(field[i]);
    out += '\n';
  }
  return out;
}

Snapshot parse_snapshot(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header)) parse_fail(1, "missing header");
  std::istringstream hs(header);
  std::vector<std::string> tok;
  for (std::string t; hs >> t;) tok.push_back(t);
  if (tok.size() != 9 || tok[0] != "#" || tok[1] != "ipme" || tok[2] != "v1") parse_fail(1, "not an ipme v1 header");

  const std::string dstr = expect_key(tok[3], "d", 1);
  if (dstr != "1" && dstr != "2" && dstr != "3") parse_fail(1, "dimension must be 1, 2 or 3");
  const int d = dstr[0] - '0';
  const auto ns = split(expect_key(tok[4], "n", 1), ',');
  const auto hs_ = split(expect_key(tok[5], "h", 1), ',');
  const auto os = split(expect_key(tok[6], "origin", 1), ',');
  if (static_cast<int>(ns.size()) != d || static_cast<int>(hs_.size()) != d || static_cast<int>(os.size()) != d)
    parse_fail(1, "axis lists do not match the dimension");
  std::array<Index, 3> n{1, 1, 1};
  std::array<double, 3> h{1, 1, 1}, o{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    char* end = nullptr;
    const long long v = std::strtoll(ns[a].c_str(), &end, 10);
    if (ns[a].empty() || end != ns[a].c_str() + ns[a].size() || v < 3) parse_fail(1, "bad node count '" + ns[a] + "'");
    n[a] = static_cast<Index>(v);
    h[a] = parse_real(hs_[a], 1);
    o[a] = parse_real(os[a], 1);
  }
  const double t = parse_real(expect_key(tok[7], "t", 1), 1);
  Quantity q;
  try {
    q = quantity_from_string(expect_key(tok[8], "quantity", 1));
  } catch (const ParseError& e) {
    parse_fail(1, e.what());
  }

  GridSpec grid(d, n, h, o);
  Array values(grid.size());
  std::string line;
  std::size_t lineno = 1;
  for (Index i = 0; i < grid.size(); ++i) {
    ++lineno;
    if (!std::getline(is, line))
      parse_fail(lineno, "expected " + std::to_string(grid.size()) + " values, found " + std::to_string(i));
    values[i] = parse_real(line, lineno);
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty()) parse_fail(lineno, "more values than grid nodes");
  }
  return {ScalarField(grid, std::move(values), t), q};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

void write_snapshot(const ScalarField& field, Quantity quantity, const fs::path& path) {
  write_text(path, format_snapshot(field, quantity));
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  try {
    return parse_snapshot(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<Snapshot> read_snapshot_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".snap") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Snapshot> out;
  for (const auto& f : files) out.push_back(read_snapshot(f));
  std::stable_sort(out.begin(), out.end(), [](const Snapshot& a, const Snapshot& b) { return a.field.t() < b.field.t(); });
  return out;
}

nlohmann::json to_json(const Params& p) {
  return {{"m", p.m()}, {"k", p.k()}, {"p", p.p()}, {"c", p.c()}, {"eps", p.eps()}, {"delta", p.delta()}};
}

nlohmann::json to_json(const GridSpec& g) {
  nlohmann::json j;
  j["dim"] = g.dim();
  for (int a = 0; a < g.dim(); ++a) {
    j["n"].push_back(g.n(a));
    j["h"].push_back(g.h(a));
    j["origin"].push_back(g.origin(a));
  }
  return j;
}

nlohmann::json to_json(const RegularizationSchedule& s) { return {{"eps", s.eps}, {"delta", s.delta}, {"n", s.n}}; }

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["format"] = "ipme-manifest v1";
  j["params"] = to_json(m.params);
  j["grid"] = to_json(m.grid);
  j["problem"] = to_string(m.problem);
  j["schedule"] = to_json(m.schedule);
  j["dt"] = {{"safety", m.dt.safety}, {"dt_min", m.dt.dt_min}, {"dt_max", m.dt.dt_max}, {"steps", m.dt.steps}};
  j["output_files"] = m.output_files;
  j["stopping_reason"] = m.stopping_reason;
  j["warnings"] = m.warnings;
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [k, v] : m.metrics) metrics[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_real(v));
  j["metrics"] = metrics;
  return j;
}

void write_manifest(const RunManifest& m, const fs::path& path) { write_text(path, manifest_to_json(m).dump(2) + "\n"); }

void write_timing(const RunManifest& m, const fs::path& path) {
  nlohmann::json j;
  j["wall_seconds"] = m.wall_seconds;
  write_text(path, j.dump(2) + "\n");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += csv_field(row[i]);
    }
    text += "\r\n";
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  write_text(path, text);
}

void write_trace_csv(const fs::path& path, const FreeBoundaryTrace& trace) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    rows.push_back({format_real(trace.times[i]), format_real(trace.r_inner[i]), format_real(trace.r_outer[i]),
                    format_real(trace.threshold[i]), trace.degenerate[i] ? "1" : "0"});
  }
  write_csv(path, {"t", "r_inner", "r_outer", "threshold", "degenerate"}, rows);
}

}  // namespace ipme
