// Command-line driver for the zonal, evolve, stability and spectrum modes.
//
// Exit status: 0 success, 1 validation or parse error, 2 numerical failure
// (including a breached tolerance), 3 I/O failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "accflow/config.hpp"
#include "accflow/errors.hpp"
#include "accflow/runner.hpp"

namespace {

int exit_code(const acc::Error& e) { return static_cast<int>(e.error_class()); }

void report(const acc::RunOutcome& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : r.files)
    if (f.parent_path().filename() != "checkpoints") std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zonal states and projected Euler dynamics on a latitude band of the rotating sphere"};
  app.option_defaults()->always_capture_default(false);

  std::string config_path, sweep;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool print_config = false;
  app.add_option("--config", config_path, "Config file with [band], [grid] and [run] sections");
  app.add_option("--sweep", sweep, "Fan out over key=v1,v2,... (one run per value)");
  app.add_option("--threads", threads, "Worker threads for --sweep")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "Print the merged configuration and exit");

  // Flags override the file; each maps onto one config key.
  const std::vector<std::pair<std::string, std::string>> flag_keys = {
      {"--mode", "run.mode"},         {"--out", "run.output_dir"},    {"--n-rho", "grid.n_rho"},
      {"--n-phi", "grid.n_phi"},      {"--dt", "run.dt"},             {"--t-end", "run.t_end"},
      {"--lambda", "band.lambda"},    {"--upsilon", "band.upsilon"},  {"--psi1", "band.psi1"},
      {"--psi2", "band.psi2"},        {"--omega", "band.omega"},      {"--theta1-deg", "band.theta1_deg"},
      {"--theta2-deg", "band.theta2_deg"}, {"--amplitude", "run.amplitude"}, {"--wavenumber", "run.wavenumber"},
      {"--seed", "run.seed"},         {"--method", "run.method"},     {"--stride", "run.output_stride"},
      {"--cfl", "run.cfl"},           {"--profile-points", "grid.profile_points"},
  };
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& [flag, key] : flag_keys)
    flag_opts[flag] = app.add_option(flag, flag_values[flag], "Sets " + key);
  for (auto& [flag, opt] : flag_opts) opt->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    acc::RunSpec spec;
    if (!config_path.empty()) spec = acc::parse_config_file(config_path);
    for (const auto& [flag, key] : flag_keys)
      if (flag_opts[flag]->count() > 0) acc::set_config_value(spec, key, flag_values[flag]);
    if (print_config) {
      std::cout << acc::to_config_text(spec);
      return 0;
    }
    spec.validate();

    if (sweep.empty()) {
      report(acc::run(spec));
      return 0;
    }
    const auto specs = acc::expand_sweep(spec, sweep);
    const auto results = acc::run_sweep(specs, threads);
    int code = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
      if (results[k].error.empty()) {
        report(results[k].outcome);
      } else {
        std::cerr << "error [" << specs[k].output_dir.string() << "]: " << results[k].error << "\n";
        code = std::max(code, results[k].exit_code);
      }
    }
    return code;
  } catch (const acc::CflViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::fprintf(stderr, "suggested dt: %.6g\n", e.suggested_dt());
    return exit_code(e);
  } catch (const acc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(acc::ErrorClass::io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(acc::ErrorClass::numerical);
  }
}
