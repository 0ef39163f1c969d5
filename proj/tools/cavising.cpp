// Command-line front end: cavising <sweep|branches|phase|fluct|validate>
//   [--config file.ini] [--out dir] [--threads n] [--format csv|json]

#include <CLI11.hpp>

#include <iostream>

#include "cavising/app/config.hpp"
#include "cavising/app/run.hpp"

using namespace cavising::app;

int main(int argc, char** argv) {
  CLI::App cli{"Steady states, bistability and fluctuations of a driven Ising chain in a lossy cavity"};
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  std::string format = "csv";

  for (Task task : {Task::Sweep, Task::Branches, Task::Phase, Task::Fluct, Task::Validate}) {
    auto* sub = cli.add_subcommand(to_string(task));
    sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "data format")->check(CLI::IsMember({"csv", "json"}));
  }
  cli.get_subcommand("sweep")->description("g0 sweep with forward/backward hysteresis traces");
  cli.get_subcommand("branches")->description("all steady states at params.drive");
  cli.get_subcommand("phase")->description("critical drives g1, g2 along parameter axes");
  cli.get_subcommand("fluct")->description("fluctuation spectrum and critical exponents");
  cli.get_subcommand("validate")->description("oracle and invariant checklist");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  cfg.task = parse_task(cli.get_subcommands().front()->get_name());
  cfg.output_dir = out_dir;
  cfg.threads = threads;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;

  const auto result = run(cfg, std::cerr);
  if (result.status == kExitOk || result.status == kExitValidationFailed) {
    for (const auto& f : result.outputs) std::cout << (cfg.output_dir / f).string() << '\n';
  }
  return result.status;
}
