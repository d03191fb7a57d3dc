// Command-line front end: one experiment per invocation, configured by JSON.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtlab/mtlab.hpp"

namespace {

int exit_code(mtlab::ErrorKind kind) { return 2 + static_cast<int>(kind); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical probes of tube-weighted Fourier extension estimates"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool sequential = false;
  std::int64_t seed = -1;
  int verbosity = 0;

  for (const auto& name : mtlab::commands::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--set", overrides, "override a config key, e.g. grid.n=512")
        ->allow_extra_args(false);
    sub->add_option("--out", out_dir, "output directory (default: config output.dir)");
    sub->add_flag("--seq", sequential, "force sequential execution");
    sub->add_option("--seed", seed, "random seed (overrides config seed)");
    sub->add_flag("-v,--verbose", verbosity, "print report scalars");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    mtlab::set_sequential(sequential);
    auto cfg = mtlab::io::load_config(config_path);
    auto assignments = overrides;
    if (seed >= 0) assignments.push_back("seed=" + std::to_string(seed));
    mtlab::io::apply_overrides(cfg, assignments);
    cfg["experiment"] = command;

    const auto outcome = mtlab::commands::run(command, cfg);

    const std::string dir = out_dir.empty() ? cfg["output"]["dir"].get<std::string>() : out_dir;
    std::string prefix = cfg["output"]["prefix"].get<std::string>();
    if (prefix.empty()) prefix = std::filesystem::path(config_path).stem().string() + "." + command;
    const std::string base = (std::filesystem::path(dir) / prefix).string();
    auto written = mtlab::io::write_report(outcome.report, base);
    const auto plots = mtlab::io::emit_plot_data(outcome.report, base);
    written.insert(written.end(), plots.begin(), plots.end());

    if (verbosity > 0)
      for (const auto& [k, v] : outcome.report.scalars)
        std::cout << "  " << k << " = " << mtlab::io::format_double(v) << "\n";
    std::cout << command << ": " << outcome.summary << " -> " << written.front() << "\n";
    return 0;
  } catch (const mtlab::Error& e) {
    std::cerr << "mtlab " << command << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mtlab " << command << ": " << e.what() << "\n";
    return 1;
  }
}
