#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lacunary/battery.hpp"
#include "lacunary/io.hpp"

namespace lacunary::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,    ///< some check returned verdict fail
  kInvalidInput = 2,   ///< usage, malformed config or rejected parameter
  kManifestConflict = 3,
  kRuntimeError = 4,
};

/// Parsed experiment configuration: the raw JSON (with the --seed override
/// applied) and the battery settings it maps to.
struct ExperimentConfig {
  Json raw = Json::object();
  BatteryConfig battery;
  std::size_t density_n = 10;
  std::vector<double> weights;  ///< explicit moment4 weights, if given
};

/// Validates and maps a config document. Throws InvalidInput on unknown
/// keys, x = 0, nonpositive counts or non-power-of-two grids.
ExperimentConfig parse_config(const Json& doc);

/// Hash of the subcommand plus the canonical config dump, as 16 hex digits.
std::string config_hash(const std::string& subcommand, const Json& raw);

/// Full command line without the program name, e.g.
/// {"variance", "--config", "cfg.json", "--out", "results"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lacunary::cli
