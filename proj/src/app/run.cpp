#include "cavising/app/run.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "cavising/app/output.hpp"
#include "cavising/app/validate.hpp"
#include "cavising/fluctuations.hpp"
#include "cavising/parallel.hpp"

#ifndef CAVISING_VERSION
#define CAVISING_VERSION "0.0.0"
#endif

namespace cavising::app {

using nlohmann::json;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

int run_sweep(const RunConfig& cfg, RunResult& res, json& summary) {
  const auto grid = linspace(cfg.sweep.g0_min, cfg.sweep.g0_max, cfg.sweep.points);
  const auto sweep = sweep_hysteresis(cfg.params, grid, cfg.threads);
  std::vector<BranchPoint> all;
  for (const auto& roots : sweep.branches) all.insert(all.end(), roots.begin(), roots.end());
  res.outputs.push_back(write_table(cfg.output_dir, "sweep", branch_table(all), cfg.format));
  res.outputs.push_back(
      write_table(cfg.output_dir, "sweep_forward", branch_table(sweep.forward), cfg.format));
  res.outputs.push_back(
      write_table(cfg.output_dir, "sweep_backward", branch_table(sweep.backward), cfg.format));
  try {
    const auto cp = critical_points(cfg.params);
    write_json(cfg.output_dir / "critical.json", to_json(cp));
    res.outputs.push_back("critical.json");
    summary["critical"] = to_json(cp);
  } catch (const NotFoundError& e) {
    summary["critical"] = e.what();
  }
  return kExitOk;
}

int run_branches(const RunConfig& cfg, RunResult& res, json& summary) {
  const auto roots = find_fixed_points(cfg.params);
  res.outputs.push_back(write_table(cfg.output_dir, "branches", branch_table(roots), cfg.format));
  summary["roots"] = roots.size();
  return kExitOk;
}

int run_phase(const RunConfig& cfg, RunResult& res, json& summary) {
  SystemParams base = cfg.params;
  base.size = cfg.phase.size;
  std::vector<PhaseBoundary> boundaries;
  for (Axis axis : cfg.phase.axes)
    boundaries.push_back(boundary_vs_parameter(
        base, axis, default_axis_grid(axis, cfg.phase.points), cfg.threads));
  res.outputs.push_back(write_table(cfg.output_dir, "phase", boundary_table(boundaries), cfg.format));
  for (const auto& b : boundaries) {
    if (b.axis != Axis::SplittingRatio) continue;
    const auto onset = b.merge_onset();
    summary["merge_onset"] = onset ? json(*onset) : json(nullptr);
  }
  if (!cfg.phase.scaling_eps.empty()) {
    ScalingOptions so;
    so.threads = cfg.threads;
    so.delta_grid = default_axis_grid(Axis::Detuning, cfg.phase.points);
    const auto rep = detuning_minimum_check(base, cfg.phase.scaling_eps, so);
    write_json(cfg.output_dir / "scaling.json", to_json(rep));
    res.outputs.push_back("scaling.json");
  }
  return kExitOk;
}

int run_fluct(const RunConfig& cfg, RunResult& res, json& summary) {
  const auto grid = linspace(cfg.fluct.g0_min, cfg.fluct.g0_max, cfg.fluct.points);
  const auto per_drive = parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    const SystemParams at = with_drive(cfg.params, grid[i]);
    std::vector<FluctRow> rows;
    const auto roots = find_fixed_points(at);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      FluctRow row{grid[i], static_cast<int>(k), {}, 0.0, false};
      const auto sm = stability_matrix(roots[k], at);
      row.omega = eigenvalues_closed_form(sm, at);
      try {
        const auto bio = biorthogonal_eigvecs(sm);
        const auto n = fluct_photon_number(bio.left, bio.right, bio.omega, at.loss);
        row.n_fluct = n.value;
        row.divergent = n.divergent;
      } catch (const DegeneracyError&) {
        row.n_fluct = std::nan("");
        row.divergent = true;
      }
      rows.push_back(row);
    }
    return rows;
  });
  std::vector<FluctRow> rows;
  for (const auto& r : per_drive) rows.insert(rows.end(), r.begin(), r.end());
  res.outputs.push_back(write_table(cfg.output_dir, "fluct", fluct_table(rows), cfg.format));

  const auto cp = critical_points(cfg.params);
  ExponentOptions eo;
  eo.window_lo = cfg.fluct.window_lo;
  eo.window_hi = cfg.fluct.window_hi;
  eo.samples = cfg.fluct.samples;
  eo.threads = cfg.threads;
  json exps = json::array();
  for (CriticalSide side : {CriticalSide::AtG1, CriticalSide::AtG2})
    exps.push_back(to_json(critical_exponent_fit(cfg.params, cp, side, eo)));
  write_json(cfg.output_dir / "exponents.json", exps);
  res.outputs.push_back("exponents.json");
  summary["critical"] = to_json(cp);
  return kExitOk;
}

int run_validate(const RunConfig& cfg, RunResult& res, json& summary, std::ostream& log) {
  ValidationOptions opt;
  opt.params = cfg.params;
  opt.grid = cfg.validate;
  opt.threads = cfg.threads;
  const auto checks = validate_all(opt);
  json items = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << "  max deviation " << c.measured
        << " (tolerance " << c.tolerance << ")";
    if (!c.detail.empty()) log << "  " << c.detail;
    log << '\n';
    ok = ok && c.passed;
    items.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"measured", c.measured},
                     {"tolerance", c.tolerance},
                     {"detail", c.detail}});
  }
  write_json(cfg.output_dir / "validate.json", items);
  res.outputs.push_back("validate.json");
  summary["passed"] = ok;
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

RunResult run(const RunConfig& cfg, std::ostream& log) {
  RunResult res;
  const auto start = std::chrono::steady_clock::now();
  json summary = json::object();
  try {
    check_config(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    switch (cfg.task) {
      case Task::Sweep: res.status = run_sweep(cfg, res, summary); break;
      case Task::Branches: res.status = run_branches(cfg, res, summary); break;
      case Task::Phase: res.status = run_phase(cfg, res, summary); break;
      case Task::Fluct: res.status = run_fluct(cfg, res, summary); break;
      case Task::Validate: res.status = run_validate(cfg, res, summary, log); break;
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    res.status = kExitConfig;
    return res;
  } catch (const InvalidParameters& e) {
    log << "config error: " << e.what() << '\n';
    res.status = kExitConfig;
    return res;
  } catch (const NumericalError& e) {
    log << "numerical failure in " << e.operation() << ": " << e.what() << '\n';
    res.status = kExitNumerical;
    return res;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "i/o error: " << e.what() << '\n';
    res.status = kExitConfig;
    return res;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"tool", "cavising"},
                   {"version", CAVISING_VERSION},
                   {"config", to_json(cfg)},
                   {"outputs", res.outputs},
                   {"summary", summary},
                   {"status", res.status},
                   {"wall_time_s", seconds}};
  write_json(cfg.output_dir / "run.json", manifest);
  return res;
}

}  // namespace cavising::app
