#ifndef CAVISING_APP_OUTPUT_HPP
#define CAVISING_APP_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cavising/app/config.hpp"
#include "cavising/fluctuations.hpp"
#include "cavising/phase_diagram.hpp"

namespace cavising::app {

using Cell = std::variant<double, long long, bool, std::string>;

/// A rectangular result table; rendered either as CSV or as a JSON array of
/// records. Doubles are written with 17 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);
std::string format_number(double v);

/// Writes `<stem>.csv` or `<stem>.json` below dir and returns the file name.
std::string write_table(const std::filesystem::path& dir, const std::string& stem,
                        const Table& t, OutputFormat format);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

/// g0, phi_s, s_x, c_s_printed, c_s_mconsistent, stable, cavity_phase,
/// spin_phase, re_as, im_as
Table branch_table(const std::vector<BranchPoint>& points);
/// axis, value, g1, g2, merged
Table boundary_table(const std::vector<PhaseBoundary>& boundaries);
/// g0, branch, re_omega1, im_omega1, re_omega2, im_omega2, n_fluct, divergent
struct FluctRow {
  double g0;
  int branch;
  std::array<cplx, 2> omega;
  double n_fluct;
  bool divergent;
};
Table fluct_table(const std::vector<FluctRow>& rows);

nlohmann::json to_json(const ExponentFit& fit);
nlohmann::json to_json(const ScalingReport& rep);
nlohmann::json to_json(const CriticalPoints& cp);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace cavising::app

#endif
