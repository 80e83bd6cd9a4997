// ncerg: run experiment configs and emit JSON-lines certificate reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ncerg/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run noncommutative ergodic certificate checks from JSON configs"};
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::size_t jobs = 1;
  bool list = false;
  app.add_option("--config", config, "Config file: one config, {\"configs\": [...]} or an array");
  app.add_option("--seed", seed, "Seed override for randomized checks");
  app.add_option("--tol", tol, "Certificate tolerance override");
  app.add_option("--out", out, "Write JSON-lines reports here (default: stdout)");
  app.add_option("--jobs", jobs, "Configs run in parallel")->check(CLI::PositiveNumber);
  app.add_flag("--list-commands", list, "Print the known commands and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& c : ncerg::known_commands()) std::cout << c << "\n";
    return 0;
  }
  if (config.empty()) {
    std::cerr << "error: --config is required\n";
    return 2;
  }

  ncerg::RunOverrides ov;
  std::vector<ncerg::ExperimentConfig> configs;
  try {
    ov.seed = seed;
    ov.tol = tol;
    if (const auto env = ncerg::tol_from_env(); env && !tol) ov.tol = env;
    configs = ncerg::load_configs(config);
  } catch (const ncerg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto summary = ncerg::batch(configs, jobs, ov);
  for (const auto& r : summary.results)
    if (!r.error.empty()) std::cerr << "error [" << r.name << "]: " << r.error << "\n";

  if (out.empty()) {
    ncerg::write_batch_jsonl(std::cout, summary);
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write " << out << "\n";
      return 2;
    }
    ncerg::write_batch_jsonl(f, summary);
    std::cout << summary.to_json().dump() << "\n";
  }
  return summary.exit_code;
}
