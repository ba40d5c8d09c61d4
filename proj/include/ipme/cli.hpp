#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ipme {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWarning = 2;

/// Runs the configured problem and writes snapshots, manifest.json and
/// timing.json to output_dir. Returns 2 when a continuation warning was raised.
int cmd_solve(const nlohmann::json& config, std::ostream& out);

/// Samples the `exact` section at its times into output_dir.
int cmd_exact(const nlohmann::json& config, std::ostream& out);

/// Prints one line per case; 0 iff every case passed.
int cmd_verify(const std::vector<std::string>& suites, bool inject_fault, std::ostream& out);

/// Post-processes asym.snapshot_dir into CSV files under output_dir.
int cmd_asym(const nlohmann::json& config, std::ostream& out);

/// Calls `body`, turning library errors into "IPME-E<code>: message" on `err`
/// and exit code 1.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace ipme
