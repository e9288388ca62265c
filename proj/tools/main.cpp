#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bregvi/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  long long seed = -1;
  int grid = 0;
  int panels = 0;
  int max_iters = 0;
  double tol = -1.0;
  bool allow_divergent = false;
  bool inject_fault = false;
  bool worst_case = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--grid", f.grid, "envelope grid size (odd)");
  cmd->add_option("--panels", f.panels, "Simpson panel count (even)");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_option("--tol", f.tol, "distance stopping tolerance");
  cmd->add_flag("--allow-divergent", f.allow_divergent,
                "permit step sizes past the stability limit");
  cmd->add_flag("--inject-fault", f.inject_fault,
                "verify only: perturb the gradient as a negative control");
  cmd->add_flag("--worst-case", f.worst_case,
                "sweep only: initialize on the extreme eigenvectors");
}

bregvi::ExperimentSpec build_spec(const std::string& name, const CommonFlags& f) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw bregvi::SpecError("cannot open config file: " + f.config);
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw bregvi::SpecError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  bregvi::ExperimentSpec spec = bregvi::ExperimentSpec::from_json(j);
  spec.name = name;
  // Flags override config values.
  if (!f.out.empty()) spec.out_dir = f.out;
  if (f.seed >= 0) spec.seed = static_cast<std::uint64_t>(f.seed);
  if (f.grid > 0) spec.grid = f.grid;
  if (f.panels > 0) spec.panels = f.panels;
  if (f.max_iters > 0) spec.max_iters = f.max_iters;
  if (f.tol >= 0.0) spec.tol = f.tol;
  spec.allow_divergent = spec.allow_divergent || f.allow_divergent;
  spec.inject_fault = spec.inject_fault || f.inject_fault;
  spec.worst_case = spec.worst_case || f.worst_case;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman-geometry VI experiment harness"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"landscape", "envelope", "trajectory", "sweep",
                                          "verify"};
  std::vector<CommonFlags> flags(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    add_common(app.add_subcommand(names[i], names[i] + " experiment"), flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!app.get_subcommand(names[i])->parsed()) continue;
    try {
      const bregvi::ExperimentSpec spec = build_spec(names[i], flags[i]);
      const bregvi::ExperimentResult result = bregvi::run_experiment(spec);
      bregvi::write_result(result, spec.out_dir);
      if (!result.checks_passed) {
        std::cerr << names[i] << ": checks failed (see summary.json)\n";
        return 1;
      }
      std::cout << names[i] << ": ok, outputs in " << spec.out_dir << "\n";
      return 0;
    } catch (const bregvi::SpecError& e) {
      std::cerr << "spec error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
