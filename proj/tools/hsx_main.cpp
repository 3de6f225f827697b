#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hsx/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact characteristic solver and verification harness for "
               "the Hunter-Saxton equation"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  double t_end_override = -1.0;
  double dt_override = -1.0;
  std::string sweep_spec;

  const auto add_common = [&](CLI::App* cmd, bool wants_sweep) {
    cmd->add_option("scenario", scenario_path, "Scenario JSON file")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--t-end", t_end_override, "Override the time horizon");
    cmd->add_option("--dt", dt_override, "Override the trace step size");
    if (wants_sweep) {
      cmd->add_option("--kappa-sweep", sweep_spec,
                      "Uniform-kappa policies, lo:hi:n");
    }
  };

  CLI::App* solve = app.add_subcommand("solve", "Write energy/trace/map CSVs");
  CLI::App* compare =
      app.add_subcommand("compare", "Energy report against the bound");
  CLI::App* check = app.add_subcommand("check", "Run the verification suite");
  CLI::App* sweep =
      app.add_subcommand("sweep", "Compare a uniform kappa sweep");
  add_common(solve, false);
  add_common(compare, true);
  add_common(check, false);
  add_common(sweep, true);

  CLI11_PARSE(app, argc, argv);

  try {
    hsx::Scenario sc = hsx::load_scenario(scenario_path);
    if (t_end_override >= 0.0) sc.t_end = t_end_override;
    if (dt_override > 0.0) sc.dt = dt_override;

    hsx::RunResult res;
    if (solve->parsed()) {
      res = hsx::run_solve(sc, out_dir);
    } else if (compare->parsed()) {
      if (!sweep_spec.empty()) {
        auto pols = hsx::parse_kappa_sweep(sc.profile, sweep_spec);
        sc.policies.insert(sc.policies.end(), pols.begin() + 1, pols.end());
      }
      res = hsx::run_compare(sc, out_dir);
    } else if (check->parsed()) {
      res = hsx::run_check(sc, out_dir);
    } else {
      res = hsx::run_sweep(sc, sweep_spec.empty() ? "0:1:3" : sweep_spec,
                           out_dir);
    }
    for (const std::string& f : res.files) std::cout << f << "\n";
    return res.exit_code;
  } catch (const hsx::ScenarioError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
