#include "cavising/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cavising::app {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"params", {"detuning", "loss", "splitting", "coupling", "drive", "size", "drive_phase"}},
      {"sweep", {"g0_min", "g0_max", "points"}},
      {"phase", {"axes", "points", "size", "scaling_eps"}},
      {"fluct", {"g0_min", "g0_max", "points", "window_lo", "window_hi", "samples"}},
      {"validate", {"sizes", "grid_step", "grid_max"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(where + ": expected a number, got '" + raw + "'");
  return v;
}

int to_int(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(where + ": expected an integer, got '" + raw + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> items;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

ChainSize to_size(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "thermodynamic") return ThermodynamicLimit{};
  return Finite{to_int(where, s)};
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::Sweep: return "sweep";
    case Task::Branches: return "branches";
    case Task::Phase: return "phase";
    case Task::Fluct: return "fluct";
    case Task::Validate: return "validate";
  }
  return "unknown";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::Sweep, Task::Branches, Task::Phase, Task::Fluct, Task::Validate})
    if (to_string(t) == name) return t;
  throw ConfigError("unknown task '" + name + "'");
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("malformed config: " + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }

  for (const auto& [section, body] : tree) {
    const auto known = schema().find(section);
    if (known == schema().end()) {
      if (body.empty() && !body.data().empty())
        throw ConfigError("unknown config key '" + section + "' outside any section");
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const std::string where = section + "." + key;
      if (!known->second.contains(key))
        throw ConfigError("unknown config key '" + key + "' in section [" + section + "]");
      const std::string raw = value.get_value<std::string>();
      if (section == "params") {
        auto& p = cfg.params;
        if (key == "detuning") p.detuning = to_double(where, raw);
        else if (key == "loss") p.loss = to_double(where, raw);
        else if (key == "splitting") p.splitting = to_double(where, raw);
        else if (key == "coupling") p.coupling = to_double(where, raw);
        else if (key == "drive") p.drive = to_double(where, raw);
        else if (key == "size") p.size = to_size(where, raw);
        else if (key == "drive_phase") p.drive_phase = to_double(where, raw);
      } else if (section == "sweep") {
        if (key == "g0_min") cfg.sweep.g0_min = to_double(where, raw);
        else if (key == "g0_max") cfg.sweep.g0_max = to_double(where, raw);
        else if (key == "points") cfg.sweep.points = to_int(where, raw);
      } else if (section == "phase") {
        if (key == "axes") {
          cfg.phase.axes.clear();
          for (const auto& name : split_list(raw)) {
            try {
              cfg.phase.axes.push_back(parse_axis(name));
            } catch (const InvalidParameters& e) {
              throw ConfigError(where + ": " + e.what());
            }
          }
        } else if (key == "points") {
          cfg.phase.points = to_int(where, raw);
        } else if (key == "size") {
          cfg.phase.size = to_size(where, raw);
        } else if (key == "scaling_eps") {
          cfg.phase.scaling_eps.clear();
          for (const auto& item : split_list(raw))
            cfg.phase.scaling_eps.push_back(to_double(where, item));
        }
      } else if (section == "fluct") {
        auto& f = cfg.fluct;
        if (key == "g0_min") f.g0_min = to_double(where, raw);
        else if (key == "g0_max") f.g0_max = to_double(where, raw);
        else if (key == "points") f.points = to_int(where, raw);
        else if (key == "window_lo") f.window_lo = to_double(where, raw);
        else if (key == "window_hi") f.window_hi = to_double(where, raw);
        else if (key == "samples") f.samples = to_int(where, raw);
      } else if (section == "validate") {
        auto& v = cfg.validate;
        if (key == "sizes") {
          v.sizes.clear();
          for (const auto& item : split_list(raw)) v.sizes.push_back(to_int(where, item));
        } else if (key == "grid_step") {
          v.grid_step = to_double(where, raw);
        } else if (key == "grid_max") {
          v.grid_max = to_double(where, raw);
        }
      }
    }
  }
  check_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(defaults));
}

void check_config(const RunConfig& cfg) {
  try {
    validate(cfg.params);
    validate(IsingChainParams{cfg.params.splitting, 0.0, cfg.params.coupling, cfg.phase.size});
  } catch (const InvalidParameters& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(cfg.sweep.points >= 2 && cfg.sweep.g0_min >= 0.0 && cfg.sweep.g0_max > cfg.sweep.g0_min,
          "sweep: need points >= 2 and 0 <= g0_min < g0_max");
  require(cfg.phase.points >= 2 && !cfg.phase.axes.empty(),
          "phase: need points >= 2 and at least one axis");
  for (double eps : cfg.phase.scaling_eps)
    require(eps > 0.0 && eps < 0.25 * cfg.params.loss,
            "phase.scaling_eps: each eps must lie in (0, kappa/4)");
  require(cfg.fluct.points >= 2 && cfg.fluct.g0_min >= 0.0 && cfg.fluct.g0_max > cfg.fluct.g0_min,
          "fluct: need points >= 2 and 0 <= g0_min < g0_max");
  require(cfg.fluct.window_lo > 0.0 && cfg.fluct.window_hi > cfg.fluct.window_lo &&
              cfg.fluct.samples >= 2,
          "fluct: need 0 < window_lo < window_hi and samples >= 2");
  require(!cfg.validate.sizes.empty() && cfg.validate.grid_step > 0.0 &&
              cfg.validate.grid_max >= 0.0,
          "validate: need sizes and a positive grid_step");
  for (int n : cfg.validate.sizes)
    require(n >= 2 && n % 2 == 0 && n <= kMaxExactDiagSites,
            "validate.sizes: each size must be even and in [2, 14]");
  require(cfg.threads >= 1, "threads must be >= 1");
}

}  // namespace cavising::app
