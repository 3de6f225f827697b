#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsx/continuation.hpp"
#include "hsx/energy_report.hpp"

namespace hsx {

// Input problems (bad JSON, invalid profile, bad policy); the CLI maps
// these to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  InitialProfile profile;
  std::vector<std::pair<std::string, ContinuationPolicy>> policies;
  double t_end = 2.0;
  std::size_t grid_samples = 32;
  double dt = 1e-3;
  std::vector<std::string> checks;  // empty: run the full suite
};

Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::string& path);

struct CheckRow {
  std::string check;
  std::string subject;
  double margin = 0.0;
  bool pass = false;
};

std::vector<CheckRow> run_checks(const Scenario& sc);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;
};

RunResult run_solve(const Scenario& sc, const std::string& out_dir);
RunResult run_compare(const Scenario& sc, const std::string& out_dir);
RunResult run_check(const Scenario& sc, const std::string& out_dir);
// sweep_spec is "lo:hi:n": n uniform-kappa policies spanning [lo, hi].
RunResult run_sweep(const Scenario& sc, const std::string& sweep_spec,
                    const std::string& out_dir);

std::vector<std::pair<std::string, ContinuationPolicy>> parse_kappa_sweep(
    const InitialProfile& profile, const std::string& spec);

// Decimal formatting with 17 significant digits; identical bytes across
// runs on one platform.
std::string format_g17(double v);

void write_energy_csv(const Scenario& sc, const std::string& path,
                      const std::string& policy_id);
void write_report_files(const EnergyReport& rep, const std::string& dir,
                        std::vector<std::string>& files);

}  // namespace hsx
