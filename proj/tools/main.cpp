#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "experiments.hpp"
#include "ioncool/quantum.hpp"
#include "version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 1;

int run(const std::string& config_path, const std::string& out_dir) {
  using namespace ioncool::cli;
  try {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = load_config(config_path);
    if (!out_dir.empty()) config.output = out_dir;
    const int threads = threads_from_env();
    const Outcome outcome = run_config(config, threads);
    for (const auto& w : outcome.warnings) std::cerr << "ioncool: warning: " << w << '\n';
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto records = write_outcome(config.output, outcome, config.echo, config.experiment, wall);
    for (const auto& r : records) std::cout << config.output << '/' << r.file << '\n';
    std::cout << config.output << "/manifest.json\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "ioncool: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ioncool::NumericalError& e) {
    std::cerr << "ioncool: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ioncool::Error& e) {
    std::cerr << "ioncool: invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ioncool: error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ioncool: trapped-particle cooling experiments"};
  app.set_version_flag("--version", std::string(ioncool::cli::kToolVersion));

  std::string config_path, out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config file");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides the config's output entry)");
  run_cmd->footer("\n" + ioncool::cli::schema_text());

  auto* list_cmd = app.add_subcommand("list", "List experiments and their required parameters");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return run(config_path, out_dir);
  if (*list_cmd || app.get_subcommands().empty()) {
    std::cout << ioncool::cli::experiment_table();
    return 0;
  }
  return 0;
}
