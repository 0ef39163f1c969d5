#ifndef CAVISING_PHASE_DIAGRAM_HPP
#define CAVISING_PHASE_DIAGRAM_HPP

#include <optional>
#include <string>
#include <vector>

#include "cavising/selfconsistency.hpp"

namespace cavising {

enum class Axis { Detuning, Loss, SplittingRatio };

std::string to_string(Axis axis);
/// Accepts "detuning", "loss", "splitting_ratio".
Axis parse_axis(const std::string& name);

/// Default grids: 40 points, Delta in [0.05, 2], kappa in [0.05, 2], delta/J in [0.1, 2].
std::vector<double> default_axis_grid(Axis axis, int points = 40);

/// `base` with the axis coordinate set to `value` (delta = value * J for the ratio axis).
SystemParams at_axis_value(SystemParams base, Axis axis, double value);

struct BoundarySample {
  double value = 0.0;
  std::optional<CriticalPoints> points;  // empty where no transition was found
};

struct PhaseBoundary {
  Axis axis = Axis::Detuning;
  std::vector<BoundarySample> samples;

  /// First value from which every later sample is merged; empty if none.
  std::optional<double> merge_onset() const;
};

PhaseBoundary boundary_vs_parameter(const SystemParams& base, Axis axis,
                                    const std::vector<double>& grid, int threads = 1,
                                    const CriticalPointOptions& opt = {});

struct ScalingRow {
  double eps = 0.0;
  double g1_plus = 0.0;   // g1(kappa/2 + eps)
  double g1_minus = 0.0;  // g1(kappa/2 - eps)
  double residual_plus = 0.0;   // signed: (g1_plus sqrt(1 - 2eps^2/kappa^2) - g1_0) / g1_0
  double residual_minus = 0.0;
  double residual_pair = 0.0;   // mean of the two signed residuals
};

struct ScalingReport {
  double kappa = 0.0;
  double g1_at_min = 0.0;  // g1(Delta = kappa/2)
  std::vector<double> delta_grid;
  std::vector<double> g1_on_grid;
  std::vector<double> g2_on_grid;
  double argmin_g1 = 0.0;
  double argmin_g2 = 0.0;
  double grid_step = 0.0;
  bool argmin_ok = false;
  std::vector<ScalingRow> rows;        // sorted by increasing eps
  std::vector<double> pair_ratios;     // residual_pair(2 eps) / residual_pair(eps)
  std::vector<double> one_sided_ratios;
  bool monotone = false;               // |residual_pair| grows with eps
  bool raises_g1 = false;              // g1(kappa/2 +- eps) > g1(kappa/2) for all eps
};

struct ScalingOptions {
  std::vector<double> delta_grid;  // empty: default detuning grid
  int threads = 1;
  CriticalPointOptions critical = [] {
    CriticalPointOptions o;
    o.rel_tol = 1e-13;
    return o;
  }();
};

/**
  Checks that g1, g2 are smallest at Delta = kappa/2 and that
  g1(kappa/2 +- eps) sqrt(1 - 2 eps^2/kappa^2) reproduces g1(kappa/2).
*/
ScalingReport detuning_minimum_check(const SystemParams& base, const std::vector<double>& eps_list,
                                     const ScalingOptions& opt = {});

}  // namespace cavising

#endif
