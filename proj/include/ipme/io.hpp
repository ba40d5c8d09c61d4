#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipme/asymptotics.hpp"
#include "ipme/core.hpp"

namespace ipme {

enum class Quantity { U, Rho, V, G };

std::string to_string(Quantity q);
Quantity quantity_from_string(const std::string& tag);

struct Snapshot {
  ScalarField field;
  Quantity quantity = Quantity::U;
};

// Snapshot text format:
//   # ipme v1 d=<d> n=<n1,..> h=<h1,..> origin=<o1,..> t=<t> quantity=<u|rho|v|G>
// followed by one value per line, row-major, 17 significant digits.
std::string format_snapshot(const ScalarField& field, Quantity quantity);
Snapshot parse_snapshot(const std::string& text);
void write_snapshot(const ScalarField& field, Quantity quantity, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Snapshot files (*.snap) in a directory, sorted by time stamp.
std::vector<Snapshot> read_snapshot_dir(const std::filesystem::path& dir);

/// 17-significant-digit decimal, the format used for every real in the files.
std::string format_real(double v);

nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const GridSpec& g);
nlohmann::json to_json(const RegularizationSchedule& s);
/// Manifest without wall times (those go to the timing sidecar so that
/// reruns produce identical manifests).
nlohmann::json manifest_to_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);
void write_timing(const RunManifest& m, const std::filesystem::path& path);

/// RFC 4180 quoting: fields containing a comma, quote or line break are
/// quoted with embedded quotes doubled.
std::string csv_field(const std::string& s);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_trace_csv(const std::filesystem::path& path, const FreeBoundaryTrace& trace);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ipme
