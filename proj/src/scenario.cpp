#include "hsx/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hsx/characteristics.hpp"
#include "hsx/dissipative.hpp"
#include "hsx/flow_map.hpp"
#include "hsx/weak_form.hpp"
#include "json.hpp"

namespace hsx {

namespace {

using nlohmann::json;

InitialProfile profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("slopes")) {
    throw ScenarioError("profile: need breakpoints and slopes");
  }
  std::vector<double> bp, slopes;
  try {
    bp = j.at("breakpoints").get<std::vector<double>>();
    slopes = j.at("slopes").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("profile: ") + e.what());
  }
  const double anchor = j.value("anchor", 0.0);
  try {
    return InitialProfile(std::move(bp), std::move(slopes), anchor);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

ContinuationPolicy policy_from_json(const json& j) {
  std::map<std::size_t, double> kap;
  if (j.contains("resurrect")) {
    if (!j.at("resurrect").is_object()) {
      throw ScenarioError("policy: resurrect must map cell index to kappa");
    }
    for (const auto& [key, val] : j.at("resurrect").items()) {
      std::size_t idx = 0;
      try {
        idx = static_cast<std::size_t>(std::stoul(key));
      } catch (...) {
        throw ScenarioError("policy: bad cell index '" + key + "'");
      }
      if (!val.is_number()) {
        throw ScenarioError("policy: kappa for cell " + key +
                            " must be a number");
      }
      kap[idx] = val.get<double>();
    }
  }
  return ContinuationPolicy(std::move(kap));
}

const std::vector<std::string> kAllChecks = {
    "energy_identity",  "energy_ordering", "window_bound",
    "derivative_bound", "positive_energy", "riccati",
    "exponential_identity", "dissipative_characterization", "weak_form"};

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  if (!j.contains("profile")) {
    throw ScenarioError("scenario: missing profile");
  }
  Scenario sc{profile_from_json(j.at("profile")), {}, 2.0, 32, 1e-3, {}};
  sc.t_end = j.value("t_end", 2.0);
  if (!(sc.t_end >= 0.0) || !std::isfinite(sc.t_end)) {
    throw ScenarioError("scenario: t_end must be finite and >= 0");
  }
  sc.grid_samples = j.value("grid_samples", std::size_t{32});
  sc.dt = j.value("dt", 1e-3);
  if (!(sc.dt > 0.0)) throw ScenarioError("scenario: dt must be > 0");

  if (j.contains("policies")) {
    for (const auto& pj : j.at("policies")) {
      const std::string id = pj.value("id", "");
      if (id.empty()) throw ScenarioError("scenario: policy without id");
      ContinuationPolicy pol = policy_from_json(pj);
      try {
        pol.validate(sc.profile);
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string(e.what()) + " (policy '" + id + "')");
      }
      sc.policies.emplace_back(id, std::move(pol));
    }
  }
  bool has_dissipative = false;
  for (const auto& [id, pol] : sc.policies) {
    if (pol.dissipative()) has_dissipative = true;
  }
  if (!has_dissipative) {
    sc.policies.insert(sc.policies.begin(),
                       {"dissipative", ContinuationPolicy{}});
  }
  if (j.contains("checks")) {
    for (const auto& c : j.at("checks")) {
      const std::string name = c.get<std::string>();
      if (std::find(kAllChecks.begin(), kAllChecks.end(), name) ==
          kAllChecks.end()) {
        throw ScenarioError("scenario: unknown check '" + name + "'");
      }
      sc.checks.push_back(name);
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str());
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, ContinuationPolicy>> parse_kappa_sweep(
    const InitialProfile& profile, const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
      lo < 0.0 || hi < lo) {
    throw ScenarioError("sweep: expected lo:hi:n with 0 <= lo <= hi, n >= 1");
  }
  std::vector<std::pair<std::string, ContinuationPolicy>> out;
  out.emplace_back("dissipative", ContinuationPolicy{});
  for (int k = 0; k < n; ++k) {
    const double kap =
        n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    if (kap == 0.0) continue;  // already covered by the dissipative row
    std::ostringstream id;
    id << "sweep_" << k;
    out.emplace_back(id.str(), ContinuationPolicy::uniform(profile, kap));
  }
  return out;
}

namespace {

bool is_dissipative_policy(const ContinuationPolicy& p) {
  return p.dissipative();
}

// Characteristic pairs probed by the trace-based checks: consecutive
// breakpoints plus the full support.
std::vector<std::pair<double, double>> check_pairs(
    const InitialProfile& prof) {
  std::vector<std::pair<double, double>> pairs;
  const auto& bp = prof.breakpoints();
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    pairs.emplace_back(bp[j], bp[j + 1]);
  }
  if (bp.size() > 2) pairs.emplace_back(bp.front(), bp.back());
  return pairs;
}

double pair_window(const Solution& sol, double a, double b, double t_end) {
  double first_blowup = kInf;
  for (const CellMeta& c : sol.cells()) {
    if (c.zeta_hi > a && c.zeta_lo < b) {
      first_blowup = std::min(first_blowup, c.blowup_time);
    }
  }
  if (std::isfinite(first_blowup)) {
    return std::min(t_end, 0.8 * first_blowup);
  }
  return t_end;
}

std::string pair_subject(const std::string& id, double a, double b) {
  std::ostringstream os;
  os << id << " pair(" << a << "," << b << ")";
  return os.str();
}

}  // namespace

std::vector<CheckRow> run_checks(const Scenario& sc) {
  std::vector<std::string> selected =
      sc.checks.empty() ? kAllChecks : sc.checks;
  const auto grid = ledger_time_grid(sc.profile, sc.t_end, sc.grid_samples);
  const auto pairs = check_pairs(sc.profile);
  const auto enabled = [&selected](const std::string& name) {
    return std::find(selected.begin(), selected.end(), name) !=
           selected.end();
  };

  std::vector<CheckRow> rows;
  if (enabled("energy_ordering")) {
    const EnergyReport rep = compare(sc.profile, sc.policies, grid);
    for (const PolicyVerdict& v : rep.verdicts) {
      rows.push_back({"energy_ordering", v.id, v.min_margin,
                      v.never_below_bound && v.strict_after_event});
    }
  }

  for (const auto& [id, pol] : sc.policies) {
    const ContinuationSolution sol(sc.profile, pol);
    const bool dissip = is_dissipative_policy(pol);

    if (enabled("energy_identity")) {
      double worst = 0.0;
      for (double t : grid) {
        const double quad = sol.frame_at(t).energy_quadrature();
        const double expected = sol.total_energy_at(t);
        worst = std::max(worst, std::fabs(quad - expected));
      }
      const double scale = std::max(1.0, sc.profile.total_energy());
      rows.push_back(
          {"energy_identity", id, -worst, worst <= 1e-12 * scale});
    }

    if (enabled("window_bound")) {
      for (const auto& [a, b] : pairs) {
        const double m = window_energy_margin(sol, a, b, grid);
        bool pass = m >= -1e-10;
        if (dissip) pass = pass && m <= 1e-10;
        rows.push_back({"window_bound", pair_subject(id, a, b), m, pass});
      }
    }

    if (enabled("derivative_bound")) {
      double worst = 0.0;
      bool first = true;
      for (double t : grid) {
        const double m = derivative_bound_margin(build_flow_map(sol, t), sol);
        if (first || m < worst) worst = m;
        first = false;
      }
      rows.push_back({"derivative_bound", id, worst, worst >= -1e-12});
    }

    if (enabled("positive_energy")) {
      for (const auto& [a, b] : pairs) {
        double worst_step = 0.0;
        double prev = 0.0;
        bool first = true;
        for (double t : grid) {
          const double e = positive_energy(sol, a, b, t);
          if (!first) worst_step = std::min(worst_step, e - prev);
          prev = e;
          first = false;
        }
        rows.push_back({"positive_energy", pair_subject(id, a, b), worst_step,
                        worst_step >= -1e-10});
      }
    }

    if (enabled("riccati") || enabled("exponential_identity")) {
      for (const auto& [a, b] : pairs) {
        const double t_end = pair_window(sol, a, b, sc.t_end);
        if (!(t_end > 0.0)) continue;
        const auto tr1 = integrate_characteristic(sol, a, t_end, sc.dt);
        const auto tr2 = integrate_characteristic(sol, b, t_end, sc.dt);
        const PairDiagnostics d = pair_diagnostics(tr1, tr2);
        if (enabled("riccati")) {
          const double m = riccati_margin(d);
          rows.push_back({"riccati", pair_subject(id, a, b), m, m >= -1e-8});
        }
        if (enabled("exponential_identity")) {
          const double err = exponential_identity_error(d);
          rows.push_back({"exponential_identity", pair_subject(id, a, b),
                          -err, err <= 1e-5});
        }
      }
    }

    if (enabled("dissipative_characterization") && dissip) {
      double worst = 0.0;
      const auto& bp = sc.profile.breakpoints();
      for (double xi : bp) {
        for (double t : grid) {
          worst = std::max(
              worst, dissipative_characterization_residual(sol, xi, t));
        }
      }
      const double scale =
          std::max(1.0, std::fabs(sc.profile.total_energy()) * sc.t_end);
      rows.push_back({"dissipative_characterization", id, -worst,
                      worst <= 1e-12 * scale});
    }

    if (enabled("weak_form")) {
      const Frame f_end = sol.frame_at(sc.t_end);
      const double pad =
          0.25 * (sc.profile.support_hi() - sc.profile.support_lo());
      SpaceTimeWindow win;
      win.x_lo = std::min(sc.profile.support_lo(), f_end.x.front()) - pad;
      win.x_hi = std::max(sc.profile.support_hi(), f_end.x.back()) + pad;
      win.t_lo = 0.0;
      win.t_hi = sc.t_end;
      const WeakResidualResult wr = weak_residual(sol, win);
      rows.push_back({"weak_form", id, -wr.residual, wr.residual <= 1e-6});
    }
  }
  return rows;
}

namespace {

std::size_t alive_cells(const std::vector<CellMeta>& cells, double t) {
  std::size_t n = 0;
  for (const CellMeta& c : cells) {
    if (c.blowup_time > t) ++n;
  }
  return n;
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write " + path);
  out << content;
  files.push_back(path);
}

}  // namespace

void write_energy_csv(const Scenario& sc, const std::string& path,
                      const std::string& policy_id) {
  const ContinuationPolicy* pol = nullptr;
  for (const auto& [id, p] : sc.policies) {
    if (id == policy_id) pol = &p;
  }
  if (!pol) throw ScenarioError("unknown policy " + policy_id);
  const ContinuationSolution sol(sc.profile, *pol);
  const auto cells = cell_meta(sc.profile);
  const auto grid = ledger_time_grid(sc.profile, sc.t_end, sc.grid_samples);
  std::ostringstream os;
  os << "t,total_energy,dissipative_bound,n_alive_cells\n";
  for (double t : grid) {
    os << format_g17(t) << ',' << format_g17(sol.total_energy_at(t)) << ','
       << format_g17(survivor_mass(cells, t)) << ',' << alive_cells(cells, t)
       << '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write " + path);
  out << os.str();
}

void write_report_files(const EnergyReport& rep, const std::string& dir,
                        std::vector<std::string>& files) {
  nlohmann::json j;
  j["t"] = rep.t_grid;
  j["bound"] = rep.bound;
  nlohmann::json series = nlohmann::json::object();
  for (std::size_t k = 0; k < rep.policy_ids.size(); ++k) {
    series[rep.policy_ids[k]] = rep.series[k];
  }
  j["series"] = series;
  nlohmann::json verdicts = nlohmann::json::object();
  for (const PolicyVerdict& v : rep.verdicts) {
    nlohmann::json vj;
    vj["never_below_bound"] = v.never_below_bound;
    vj["strict_after_event"] = v.strict_after_event;
    vj["min_margin"] = v.min_margin;
    if (v.first_exceedance_t) vj["first_exceedance_t"] = *v.first_exceedance_t;
    verdicts[v.id] = vj;
  }
  j["verdicts"] = verdicts;
  write_file(dir + "/report.json", j.dump(2) + "\n", files);

  std::ostringstream os;
  os << "t,bound";
  for (const auto& id : rep.policy_ids) os << ',' << id;
  os << '\n';
  for (std::size_t k = 0; k < rep.t_grid.size(); ++k) {
    os << format_g17(rep.t_grid[k]) << ',' << format_g17(rep.bound[k]);
    for (const auto& s : rep.series) os << ',' << format_g17(s[k]);
    os << '\n';
  }
  write_file(dir + "/report.csv", os.str(), files);
}

RunResult run_solve(const Scenario& sc, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunResult res;
  for (const auto& [id, pol] : sc.policies) {
    const std::string path = out_dir + "/energy_" + id + ".csv";
    write_energy_csv(sc, path, id);
    res.files.push_back(path);

    const ContinuationSolution sol(sc.profile, pol);
    const MonotoneFlowMap map = build_flow_map(sol, sc.t_end);
    std::ostringstream os;
    os << "segment_type,zeta_lo,zeta_hi,x_lo,x_hi\n";
    for (const MapSegment& s : map.segments()) {
      os << segment_kind_name(s.kind) << ',' << format_g17(s.zeta_lo) << ','
         << format_g17(s.zeta_hi) << ',' << format_g17(s.x_lo) << ','
         << format_g17(s.x_hi) << '\n';
    }
    write_file(out_dir + "/map_" + id + ".csv", os.str(), res.files);

    // Difference-quotient diagnostics of the support pair.
    const double a = sc.profile.support_lo();
    const double b = sc.profile.support_hi();
    const double window = pair_window(sol, a, b, sc.t_end);
    if (window > 0.0) {
      const auto tr1 = integrate_characteristic(sol, a, window, sc.dt);
      const auto tr2 = integrate_characteristic(sol, b, window, sc.dt);
      const PairDiagnostics d = pair_diagnostics(tr1, tr2);
      const double w0 = d.omega.empty() ? 0.0 : d.omega.front();
      std::ostringstream ps;
      ps << "t,h,p,omega,riccati_bound\n";
      for (std::size_t k = 0; k < d.t.size(); ++k) {
        ps << format_g17(d.t[k]) << ',' << format_g17(d.h[k]) << ','
           << format_g17(d.p[k]) << ',';
        if (k < d.omega.size()) ps << format_g17(d.omega[k]);
        ps << ',';
        const double denom = 2.0 + d.t[k] * w0;
        if (k < d.omega.size() && denom > 0.0) {
          ps << format_g17(2.0 * w0 / denom);
        }
        ps << '\n';
      }
      write_file(out_dir + "/pair_" + id + ".csv", ps.str(), res.files);
    }
  }

  // Exact characteristic traces from the breakpoint labels of the
  // dissipative solution.
  const DissipativeSolution dis(sc.profile);
  const auto& bp = sc.profile.breakpoints();
  for (std::size_t jn = 0; jn < bp.size(); ++jn) {
    std::ostringstream os;
    os << "t,x,u,w_if_defined\n";
    const std::size_t steps =
        static_cast<std::size_t>(std::ceil(sc.t_end / sc.dt));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t =
          std::min(sc.t_end, static_cast<double>(k) * sc.dt);
      const LabelState s = dis.label_state(bp[jn], t);
      os << format_g17(t) << ',' << format_g17(s.x) << ',' << format_g17(s.u)
         << ',';
      if (s.w) os << format_g17(*s.w);
      os << '\n';
      if (t >= sc.t_end) break;
    }
    write_file(out_dir + "/trace_" + std::to_string(jn) + ".csv", os.str(),
               res.files);
  }
  return res;
}

RunResult run_compare(const Scenario& sc, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunResult res;
  const auto grid = ledger_time_grid(sc.profile, sc.t_end, sc.grid_samples);
  const EnergyReport rep = compare(sc.profile, sc.policies, grid);
  write_report_files(rep, out_dir, res.files);
  res.exit_code = rep.all_ok ? 0 : 1;
  return res;
}

RunResult run_check(const Scenario& sc, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunResult res;
  const std::vector<CheckRow> rows = run_checks(sc);
  std::ostringstream os;
  os << "check,subject,margin,pass\n";
  bool all = true;
  for (const CheckRow& r : rows) {
    os << r.check << ',' << r.subject << ',' << format_g17(r.margin) << ','
       << (r.pass ? "1" : "0") << '\n';
    all = all && r.pass;
  }
  write_file(out_dir + "/checks.csv", os.str(), res.files);
  res.exit_code = all ? 0 : 1;
  return res;
}

RunResult run_sweep(const Scenario& sc, const std::string& sweep_spec,
                    const std::string& out_dir) {
  Scenario swept{sc.profile, parse_kappa_sweep(sc.profile, sweep_spec),
                 sc.t_end, sc.grid_samples, sc.dt, sc.checks};
  return run_compare(swept, out_dir);
}

}  // namespace hsx
