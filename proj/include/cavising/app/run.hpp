#ifndef CAVISING_APP_RUN_HPP
#define CAVISING_APP_RUN_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cavising/app/config.hpp"

namespace cavising::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunResult {
  int status = kExitOk;
  std::vector<std::string> outputs;  // data files written, relative to output_dir
};

/// Executes the configured task, writes its data files plus run.json into
/// cfg.output_dir and reports progress / failures on `log`. Never throws for
/// configuration or numerical failures; those map to exit codes.
RunResult run(const RunConfig& cfg, std::ostream& log);

}  // namespace cavising::app

#endif
