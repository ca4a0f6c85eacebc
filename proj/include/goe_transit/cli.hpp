#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "goe_transit/ensemble.hpp"

namespace goe_transit::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  table1,
  fig2_scatter,
  fig3_wkk_vs_gamma,
  fig4_wkkp_vs_gamma,
  fig5_transmission,
  branching,
  custom,
};

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::custom;
  ModelParams params;
  std::optional<std::size_t> n_samples;  ///< unset: experiment default (100 for table1, else 500)
  std::uint64_t master_seed = 1;
  std::size_t workers = 0;  ///< 0 = auto
  std::filesystem::path output_dir = "goe-transit-out";
  bool write_csv = true;
  bool write_json = true;
  bool check = false;
  double z_bound = 4.0;
  std::vector<double> gamma_grid;   ///< fig3/fig4; empty = default grid
  std::vector<double> energy_grid;  ///< fig5; empty = default grid
  std::size_t n_average = 0;        ///< fig5 ensemble averaging

  std::size_t effective_samples() const;
};

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutputDirEnv = "GOE_TRANSIT_OUT";

/// Parses `[run] <experiment> [flags]`. A `--config FILE` holds flat `key = value` lines
/// whose keys mirror the long flag names; flags on the command line win. Throws
/// UsageError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

/// Help text for the tool.
std::string usage();

struct ExecutionReport {
  int exit_status = 0;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
  std::vector<std::string> check_failures;
};

/// Runs the configured experiment and writes its CSV/JSON outputs.
ExecutionReport execute(const RunConfig& config);

// Output helpers, exposed for tests.

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const EnsembleSummary& s);
/// Decimal text with 17 significant digits.
std::string format_number(double x);

}  // namespace goe_transit::cli
