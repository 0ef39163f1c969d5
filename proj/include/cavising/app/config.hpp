#ifndef CAVISING_APP_CONFIG_HPP
#define CAVISING_APP_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "cavising/errors.hpp"
#include "cavising/phase_diagram.hpp"
#include "cavising/selfconsistency.hpp"

namespace cavising::app {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

enum class Task { Sweep, Branches, Phase, Fluct, Validate };
enum class OutputFormat { Csv, Json };

std::string to_string(Task task);
Task parse_task(const std::string& name);

struct SweepConfig {
  double g0_min = 0.0;
  double g0_max = 1.5;
  int points = 301;
};

struct PhaseConfig {
  std::vector<Axis> axes{Axis::Detuning, Axis::Loss, Axis::SplittingRatio};
  int points = 40;
  ChainSize size = ThermodynamicLimit{};
  std::vector<double> scaling_eps{0.01, 0.02, 0.04};
};

struct FluctConfig {
  double g0_min = 0.5;
  double g0_max = 1.2;
  int points = 141;
  double window_lo = 1e-4;
  double window_hi = 1e-2;
  int samples = 21;
};

struct ValidateConfig {
  std::vector<int> sizes{4, 8, 12};
  double grid_step = 0.1;
  double grid_max = 1.5;
};

struct RunConfig {
  Task task = Task::Validate;
  SystemParams params;
  SweepConfig sweep;
  PhaseConfig phase;
  FluctConfig fluct;
  ValidateConfig validate;
  std::filesystem::path output_dir = "out";
  int threads = 1;
  OutputFormat format = OutputFormat::Csv;
};

/**
  Parses an INI document with the sections [params], [sweep], [phase],
  [fluct] and [validate]. Unknown sections or keys, unparsable values and
  parameters violating the model invariants raise ConfigError.
*/
RunConfig parse_config(const std::string& text, RunConfig defaults = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig defaults = {});

/// Re-validates every field (also used after command-line overrides).
void check_config(const RunConfig& cfg);

}  // namespace cavising::app

#endif
