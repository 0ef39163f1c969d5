#include "cavising/phase_diagram.hpp"

#include <algorithm>
#include <cmath>

#include "cavising/errors.hpp"
#include "cavising/parallel.hpp"

namespace cavising {

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::Detuning: return "detuning";
    case Axis::Loss: return "loss";
    case Axis::SplittingRatio: return "splitting_ratio";
  }
  return "unknown";
}

Axis parse_axis(const std::string& name) {
  if (name == "detuning") return Axis::Detuning;
  if (name == "loss") return Axis::Loss;
  if (name == "splitting_ratio") return Axis::SplittingRatio;
  throw InvalidParameters("unknown axis '" + name + "'");
}

std::vector<double> default_axis_grid(Axis axis, int points) {
  const double lo = axis == Axis::SplittingRatio ? 0.1 : 0.05;
  const double hi = 2.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / std::max(1, points - 1);
  return grid;
}

SystemParams at_axis_value(SystemParams base, Axis axis, double value) {
  switch (axis) {
    case Axis::Detuning: base.detuning = value; break;
    case Axis::Loss: base.loss = value; break;
    case Axis::SplittingRatio: base.splitting = value * base.coupling; break;
  }
  return base;
}

std::optional<double> PhaseBoundary::merge_onset() const {
  std::optional<double> onset;
  for (const auto& s : samples) {
    const bool merged = s.points && s.points->merged;
    if (!merged) {
      onset.reset();
    } else if (!onset) {
      onset = s.value;
    }
  }
  return onset;
}

PhaseBoundary boundary_vs_parameter(const SystemParams& base, Axis axis,
                                    const std::vector<double>& grid, int threads,
                                    const CriticalPointOptions& opt) {
  for (double v : grid) {
    if (!std::isfinite(v) || (axis == Axis::Detuning && v <= 0.0) || v < 0.0)
      throw InvalidParameters("boundary_vs_parameter: " + to_string(axis) +
                              " value out of range: " + std::to_string(v));
  }
  PhaseBoundary out;
  out.axis = axis;
  out.samples = parallel_map(grid.size(), threads, [&](std::size_t i) {
    BoundarySample s;
    s.value = grid[i];
    try {
      s.points = critical_points(at_axis_value(base, axis, grid[i]), opt);
    } catch (const NotFoundError&) {
    }
    return s;
  });
  return out;
}

ScalingReport detuning_minimum_check(const SystemParams& base, const std::vector<double>& eps_list,
                                     const ScalingOptions& opt) {
  validate(base);
  ScalingReport rep;
  rep.kappa = base.loss;
  const double kappa = base.loss;
  const double centre = 0.5 * kappa;
  for (double eps : eps_list)
    if (eps < 0.0 || eps >= 0.5 * centre)
      throw InvalidParameters("detuning_minimum_check: eps must lie in [0, kappa/4)");

  rep.delta_grid = opt.delta_grid.empty() ? default_axis_grid(Axis::Detuning) : opt.delta_grid;
  const auto boundary =
      boundary_vs_parameter(base, Axis::Detuning, rep.delta_grid, opt.threads, opt.critical);
  double best_g1 = INFINITY, best_g2 = INFINITY;
  for (const auto& s : boundary.samples) {
    rep.g1_on_grid.push_back(s.points ? s.points->g1 : NAN);
    rep.g2_on_grid.push_back(s.points ? s.points->g2 : NAN);
    if (s.points && s.points->g1 < best_g1) best_g1 = s.points->g1, rep.argmin_g1 = s.value;
    if (s.points && s.points->g2 < best_g2) best_g2 = s.points->g2, rep.argmin_g2 = s.value;
  }
  for (std::size_t i = 1; i < rep.delta_grid.size(); ++i)
    rep.grid_step = std::max(rep.grid_step, rep.delta_grid[i] - rep.delta_grid[i - 1]);
  rep.argmin_ok = std::abs(rep.argmin_g1 - centre) <= rep.grid_step * (1 + 1e-9) &&
                  std::abs(rep.argmin_g2 - centre) <= rep.grid_step * (1 + 1e-9);

  std::vector<double> eps_sorted = eps_list;
  std::sort(eps_sorted.begin(), eps_sorted.end());
  std::vector<double> detunings{centre};
  for (double eps : eps_sorted) {
    detunings.push_back(centre + eps);
    detunings.push_back(centre - eps);
  }
  const auto g1 = parallel_map(detunings.size(), opt.threads, [&](std::size_t i) {
    SystemParams p = base;
    p.detuning = detunings[i];
    return critical_points(p, opt.critical).g1;
  });
  rep.g1_at_min = g1[0];
  rep.raises_g1 = true;
  for (std::size_t k = 0; k < eps_sorted.size(); ++k) {
    ScalingRow row;
    row.eps = eps_sorted[k];
    row.g1_plus = g1[1 + 2 * k];
    row.g1_minus = g1[2 + 2 * k];
    const double factor = std::sqrt(1.0 - 2.0 * row.eps * row.eps / (kappa * kappa));
    row.residual_plus = (row.g1_plus * factor - rep.g1_at_min) / rep.g1_at_min;
    row.residual_minus = (row.g1_minus * factor - rep.g1_at_min) / rep.g1_at_min;
    row.residual_pair = 0.5 * (row.residual_plus + row.residual_minus);
    if (row.eps > 0.0 && !(row.g1_plus > rep.g1_at_min && row.g1_minus > rep.g1_at_min))
      rep.raises_g1 = false;
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    const auto& a = rep.rows[k - 1];
    const auto& b = rep.rows[k];
    if (std::abs(b.residual_pair) <= std::abs(a.residual_pair)) rep.monotone = false;
    if (a.eps > 0.0 && std::abs(b.eps - 2.0 * a.eps) <= 1e-12 * b.eps) {
      rep.pair_ratios.push_back(b.residual_pair / a.residual_pair);
      rep.one_sided_ratios.push_back(b.residual_plus / a.residual_plus);
    }
  }
  return rep;
}

}  // namespace cavising
