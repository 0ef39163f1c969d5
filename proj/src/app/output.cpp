#include "cavising/app/output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace cavising::app {

using nlohmann::json;

namespace {

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
  if (!out) throw Error("write failed for " + file.string());
}

std::string render(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v;
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        // JSON has no inf/nan; those become strings.
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
          if (v == 0.0) return 0.0;
        }
        return v;
      },
      c);
}

double nan_if_empty(const std::optional<CriticalPoints>& cp, double CriticalPoints::*field) {
  return cp ? (*cp).*field : std::nan("");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0 into 0
  return fmt::format("{:.17g}", v);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += render(row[i]);
    }
    out += '\n';
  }
  return out;
}

json to_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(rec));
  }
  return arr;
}

std::string write_table(const std::filesystem::path& dir, const std::string& stem,
                        const Table& t, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_text(dir / (stem + ".csv"), to_csv(t));
    return stem + ".csv";
  }
  write_json(dir / (stem + ".json"), to_json(t));
  return stem + ".json";
}

void write_json(const std::filesystem::path& file, const json& j) {
  write_text(file, j.dump(2) + "\n");
}

Table branch_table(const std::vector<BranchPoint>& points) {
  Table t{{"g0", "phi_s", "s_x", "c_s_printed", "c_s_mconsistent", "stable", "cavity_phase",
           "spin_phase", "re_as", "im_as"},
          {}};
  for (const auto& b : points) {
    t.rows.push_back({b.g0, b.phi_s, b.s_x, b.c_s.printed, b.c_s.m_consistent, b.stable,
                      to_string(b.cavity_phase), to_string(b.spin_phase), b.a_s.real(),
                      b.a_s.imag()});
  }
  return t;
}

Table boundary_table(const std::vector<PhaseBoundary>& boundaries) {
  Table t{{"axis", "value", "g1", "g2", "merged"}, {}};
  for (const auto& pb : boundaries) {
    for (const auto& s : pb.samples) {
      t.rows.push_back({to_string(pb.axis), s.value, nan_if_empty(s.points, &CriticalPoints::g1),
                        nan_if_empty(s.points, &CriticalPoints::g2),
                        s.points ? s.points->merged : false});
    }
  }
  return t;
}

Table fluct_table(const std::vector<FluctRow>& rows) {
  Table t{{"g0", "branch", "re_omega1", "im_omega1", "re_omega2", "im_omega2", "n_fluct",
           "divergent"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.g0, static_cast<long long>(r.branch), r.omega[0].real(),
                      r.omega[0].imag(), r.omega[1].real(), r.omega[1].imag(), r.n_fluct,
                      r.divergent});
  }
  return t;
}

json to_json(const ExponentFit& fit) {
  return {{"side", to_string(fit.side)},
          {"g_c", fit.g_c},
          {"slope", fit.fit.slope},
          {"r2", fit.fit.r2},
          {"window", {fit.window_lo, fit.window_hi}},
          {"trusted", fit.trusted},
          {"samples_used", fit.samples_used}};
}

json to_json(const ScalingReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"eps", r.eps},
                    {"g1_plus", r.g1_plus},
                    {"g1_minus", r.g1_minus},
                    {"residual_plus", r.residual_plus},
                    {"residual_minus", r.residual_minus},
                    {"residual_pair", r.residual_pair}});
  }
  return {{"kappa", rep.kappa},
          {"g1_at_half_kappa", rep.g1_at_min},
          {"argmin_g1", rep.argmin_g1},
          {"argmin_g2", rep.argmin_g2},
          {"grid_step", rep.grid_step},
          {"argmin_ok", rep.argmin_ok},
          {"rows", rows},
          {"pair_ratios", rep.pair_ratios},
          {"one_sided_ratios", rep.one_sided_ratios},
          {"monotone", rep.monotone},
          {"raises_g1", rep.raises_g1}};
}

json to_json(const CriticalPoints& cp) {
  return {{"g1", cp.g1}, {"g2", cp.g2}, {"merged", cp.merged}};
}

json to_json(const RunConfig& cfg) {
  const auto& p = cfg.params;
  json axes = json::array();
  for (Axis a : cfg.phase.axes) axes.push_back(to_string(a));
  return {
      {"task", to_string(cfg.task)},
      {"params",
       {{"detuning", p.detuning},
        {"loss", p.loss},
        {"splitting", p.splitting},
        {"coupling", p.coupling},
        {"drive", p.drive},
        {"size", to_string(p.size)},
        {"drive_phase", p.drive_phase}}},
      {"sweep", {{"g0_min", cfg.sweep.g0_min}, {"g0_max", cfg.sweep.g0_max}, {"points", cfg.sweep.points}}},
      {"phase",
       {{"axes", axes},
        {"points", cfg.phase.points},
        {"size", to_string(cfg.phase.size)},
        {"scaling_eps", cfg.phase.scaling_eps}}},
      {"fluct",
       {{"g0_min", cfg.fluct.g0_min},
        {"g0_max", cfg.fluct.g0_max},
        {"points", cfg.fluct.points},
        {"window_lo", cfg.fluct.window_lo},
        {"window_hi", cfg.fluct.window_hi},
        {"samples", cfg.fluct.samples}}},
      {"validate",
       {{"sizes", cfg.validate.sizes},
        {"grid_step", cfg.validate.grid_step},
        {"grid_max", cfg.validate.grid_max}}},
      {"threads", cfg.threads},
      {"format", cfg.format == OutputFormat::Csv ? "csv" : "json"},
  };
}

}  // namespace cavising::app
