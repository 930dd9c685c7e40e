#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "memfem/scenario.hpp"

namespace {

void apply_thread_cap() {
  if (const char* env = std::getenv("MEMFEM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

memfem::Scenario resolve_config(const std::string& arg) {
  for (const std::string& name : memfem::builtin_scenario_names())
    if (arg == name) return memfem::builtin_scenario(name);
  return memfem::load_scenario(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memfem: nonlinear membrane finite elements"};
  app.require_subcommand(1);

  std::string config;
  int quadrature = 0;
  bool strict = false;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "run a scenario config (or builtin name)");
  run->add_option("config", config, "config JSON path or builtin scenario name")->required();
  run->add_option("--quadrature", quadrature, "Gauss points per direction (1..6)");
  run->add_flag("--strict-deterministic", strict, "single-threaded, reproducible runs");
  run->add_option("--out", out_dir, "output directory (default: current directory)");

  CLI::App* scen = app.add_subcommand("scenarios", "list builtin scenarios");

  CLI::App* audit = app.add_subcommand("audit", "finite-difference tangent audit");
  audit->add_option("config", config, "config JSON path or builtin scenario name")->required();
  audit->add_option("--quadrature", quadrature, "Gauss points per direction (1..6)");

  CLI11_PARSE(app, argc, argv);
  apply_thread_cap();

  try {
    if (scen->parsed()) {
      for (const std::string& name : memfem::builtin_scenario_names())
        std::cout << name << "\n";
      return 0;
    }

    memfem::Scenario scenario;
    try {
      scenario = resolve_config(config);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }

    if (audit->parsed()) {
      memfem::ScenarioSetup setup = memfem::setup_scenario(scenario, quadrature);
      memfem::Problem prob = setup.make_problem();
      const memfem::AuditReport report =
          memfem::fd_tangent_audit(prob, setup.initial, 20);
      for (const auto& [block, err] : report.max_rel_error)
        std::cout << block << " max_rel_error=" << err << "\n";
      std::cout << "worst=" << report.worst() << "\n";
      return report.worst() < 1e-5 ? 0 : 1;
    }

    memfem::RunOptions options;
    options.quadrature = quadrature;
    options.out_dir = out_dir;
    options.strict_deterministic = strict;
    options.log = &std::cout;
    const memfem::RunResult result = memfem::run_scenario(scenario, options);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
