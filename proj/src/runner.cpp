#include "accflow/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "accflow/diagnostics.hpp"
#include "accflow/errors.hpp"
#include "accflow/euler2d.hpp"
#include "accflow/io.hpp"
#include "accflow/sturm_liouville.hpp"
#include "accflow/zonal.hpp"

namespace acc {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double picard_tol = 1e-10;
constexpr int picard_max_iter = 200;
/// lambda counts as close to an eigenvalue within this relative distance.
constexpr double near_eigen_rel = 0.05;
/// Slack on the transport bound for max |xi|.
constexpr double xi_bound_slack = 1e-10;

ZonalProfile solve_profile(const RunSpec& spec, ZonalMethod method) {
  const auto& c = spec.config;
  const int n = spec.profile_points;
  switch (method) {
    case ZonalMethod::closed_form: return solve_closed_form_lambda0(c, n);
    case ZonalMethod::finite_difference: return solve_fd(c, n);
    case ZonalMethod::picard: return solve_picard(c, n, picard_tol, picard_max_iter);
    case ZonalMethod::sl_expansion: return solve_sl_expansion(c, n, spec.sl_terms);
  }
  throw ValidationError("unknown zonal method");
}

SLProblem homogeneous_zonal_problem(const BandConfig& cfg) {
  SLProblem p = homogenize_boundary(cfg).problem;
  p.h = nullptr;
  return p;
}

struct SpectrumReport {
  CsvTable table;
  std::vector<std::string> warnings;
};

SpectrumReport spectrum_report(const RunSpec& spec) {
  const auto prob = homogeneous_zonal_problem(spec.config);
  const auto sp = eigen_solve(prob, spec.n_eigen, std::max(64, spec.profile_points));
  SpectrumReport r;
  r.table.header = {"n", "eigenvalue", "shooting", "rayleigh", "sign_changes", "lambda_rel_gap", "near_lambda"};
  const double lam = spec.config.lambda;
  for (int k = 0; k < spec.n_eigen; ++k) {
    const double mu = sp.eigenvalues[k];
    const double gap = std::abs(lam - mu) / std::abs(mu);
    const bool near = gap <= near_eigen_rel;
    r.table.rows.push_back({static_cast<double>(k + 1), mu, sp.shooting_eigenvalues[k],
                            rayleigh_quotient(prob, sp.x, sp.eigenfunctions[k]),
                            static_cast<double>(sign_changes(sp.eigenfunctions[k])), gap, near ? 1.0 : 0.0});
    if (near) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda = %.6g lies within %.0f%% of eigenvalue %d (%.6g)", lam,
                    100.0 * near_eigen_rel, k + 1, mu);
      r.warnings.emplace_back(buf);
    }
  }
  return r;
}

double rel_drift(double now, double initial) {
  const double scale = std::abs(initial);
  return scale > 0.0 ? std::abs(now - initial) / scale : std::abs(now - initial);
}

RunOutcome run_dynamics(const RunSpec& spec, bool stability) {
  const auto& cfg = spec.config;
  RunOutcome out;
  if (stability && cfg.lambda > 0.0)
    out.warnings.emplace_back("lambda > 0: the identity is still tracked but no longer implies stability");

  const auto grid = AnnulusGrid::from_band(cfg, spec.n_rho, spec.n_phi);
  const Simulation sim(cfg, grid);
  const FlowFields ref = discrete_zonal_state(cfg, grid);
  const double ref_speed = max_speed(ref, cfg, grid);
  const auto pert = make_perturbation(grid, spec.amplitude, spec.wavenumber, spec.seed,
                                      ref_speed > 0.0 ? ref_speed : 1.0);
  const FlowFields init{ref.psi + pert.psi, ref.zeta + pert.zeta};
  SimState state = sim.initialize(init);
  const double dt = spec.dt ? *spec.dt : sim.stable_dt(state, spec.cfl);
  if (!std::isfinite(dt)) throw ValidationError("flow is at rest; give run.dt explicitly");

  const double lhs0 = stability_lhs(state.fields(), ref, cfg, grid);
  const double e_ref = 2.0 * lyapunov(ref, cfg, grid);
  const double bound = vorticity_bound(state.zeta, cfg);

  const fs::path dir = spec.output_dir;
  fs::create_directories(dir);
  const fs::path diag_path = dir / "diagnostics.csv";
  CsvWriter diag(diag_path, diagnostics_header());
  out.files.push_back(diag_path);
  std::unique_ptr<CsvWriter> stab;
  if (stability) {
    out.files.push_back(dir / "stability.csv");
    stab = std::make_unique<CsvWriter>(out.files.back(),
                                       std::vector<std::string>{"t", "lhs", "rhs", "defect", "via_lyapunov"});
  }

  DiagnosticRecord first, last;
  bool have_first = false;
  double max_xi = 0.0;
  const auto observer = [&](const SimState& s) {
    const auto rec = evaluate(s, ref, lhs0);
    if (!have_first) first = rec, have_first = true;
    last = rec;
    max_xi = std::max(max_xi, rec.max_xi);
    diag.row(diagnostics_row(rec));
    if (stab) {
      const double via = 2.0 * rec.lyapunov - e_ref;
      stab->row({s.t, rec.stability_lhs, lhs0, rec.stability_lhs - lhs0, via});
    }
    if (spec.write_checkpoints) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_%06llu.dat", static_cast<unsigned long long>(s.steps));
      const fs::path p = dir / "checkpoints" / name;
      write_checkpoint(p, make_checkpoint(s));
      out.files.push_back(p);
    }
  };
  sim.run(state, spec.t_end, dt, spec.output_stride, observer);

  // Circulation, Casimir and energy drifts relative to t = 0.
  json drifts;
  drifts["energy"] = rel_drift(last.energy, first.energy);
  drifts["circ1"] = rel_drift(last.circ1, first.circ1);
  drifts["circ2"] = rel_drift(last.circ2, first.circ2);
  drifts["casimir2"] = rel_drift(last.casimirs.at("s^2"), first.casimirs.at("s^2"));
  drifts["casimir3"] = rel_drift(last.casimirs.at("s^3"), first.casimirs.at("s^3"));
  for (const auto& [k, v] : drifts.items())
    if (!(v.get<double>() <= spec.drift_tolerance)) {
      out.tolerances_ok = false;
      out.warnings.push_back("relative drift of " + k + " exceeds run.drift_tolerance");
    }
  if (!(max_xi <= bound + xi_bound_slack)) {
    out.tolerances_ok = false;
    out.warnings.emplace_back("max |xi| exceeds the transport bound");
  }

  json summary;
  summary["mode"] = stability ? "stability" : "evolve";
  summary["n_rho"] = spec.n_rho;
  summary["n_phi"] = spec.n_phi;
  summary["dt"] = dt;
  summary["steps"] = state.steps;
  summary["t_end"] = state.t;
  summary["lambda_circ"] = state.lambda_circ;
  summary["perturbation_phase"] = pert.phase;
  summary["relative_drifts"] = drifts;
  summary["max_xi"] = max_xi;
  summary["xi_bound"] = bound;
  summary["clamp_events"] = state.clamp_events;
  if (stability) {
    json si;
    si["lhs"] = last.stability_lhs;
    si["rhs"] = lhs0;
    si["defect"] = last.stability_lhs - lhs0;
    si["relative_defect"] = lhs0 != 0.0 ? std::abs(last.stability_lhs - lhs0) / lhs0 : 0.0;
    si["via_lyapunov"] = 2.0 * last.lyapunov - e_ref;
    summary["stability_identity"] = si;
  }
  summary["tolerances_ok"] = out.tolerances_ok;
  summary["warnings"] = out.warnings;
  out.files.push_back(dir / "summary.json");
  write_text(out.files.back(), summary.dump(2) + "\n");

  if (!out.tolerances_ok) {
    std::string msg = "run finished outside tolerance:";
    for (const auto& w : out.warnings) msg += " " + w + ";";
    throw ToleranceBreached(msg);
  }
  return out;
}

}  // namespace

RunOutcome run_mode_zonal(const RunSpec& spec) {
  RunOutcome out;
  const auto& cfg = spec.config;
  const fs::path dir = spec.output_dir;
  fs::create_directories(dir);

  const ZonalProfile prof = velocity_profile(solve_profile(spec, spec.method));
  out.files.push_back(dir / "profile.csv");
  write_csv(out.files.back(), profile_table(prof));

  std::vector<double> lat(prof.thetas.size());
  std::transform(prof.thetas.begin(), prof.thetas.end(), lat.begin(), rad_to_deg);
  char title[160];
  std::snprintf(title, sizeof title, "Zonal velocity (lambda = %g, Upsilon = %g, psi1 = %g, psi2 = %g)", cfg.lambda,
                cfg.upsilon, cfg.psi1, cfg.psi2);
  out.files.push_back(dir / "profile.svg");
  write_line_plot_svg(out.files.back(), {{lat, prof.u_dimensional, to_string(prof.method)}}, title,
                      "latitude (deg)", "u (m/s)");

  json summary;
  summary["mode"] = "zonal";
  summary["method"] = to_string(prof.method);
  const auto jets = jet_summary(prof);
  summary["jet_speed_m_per_s"] = jets.jet_speed;
  summary["interior_speed_m_per_s"] = jets.interior_speed;
  summary["jet_ratio"] = jets.ratio;

  if (cfg.lambda == 0.0) {
    // Three independent solvers on the same latitudes.
    const auto cf = solve_closed_form_lambda0(cfg, spec.profile_points);
    const auto fd = solve_fd(cfg, spec.profile_points);
    const auto pc = solve_picard(cfg, spec.profile_points, picard_tol, picard_max_iter);
    CsvTable t;
    t.header = {"theta_deg", "closed_form", "finite_difference", "picard"};
    double e_cf_fd = 0.0, e_cf_pc = 0.0, e_fd_pc = 0.0;
    for (std::size_t k = 0; k < cf.thetas.size(); ++k) {
      const double p = interpolate_profile(pc.thetas, pc.psi, cf.thetas[k]);
      t.rows.push_back({rad_to_deg(cf.thetas[k]), cf.psi[k], fd.psi[k], p});
      e_cf_fd = std::max(e_cf_fd, std::abs(cf.psi[k] - fd.psi[k]));
      e_cf_pc = std::max(e_cf_pc, std::abs(cf.psi[k] - p));
      e_fd_pc = std::max(e_fd_pc, std::abs(fd.psi[k] - p));
    }
    out.files.push_back(dir / "crosscheck.csv");
    write_csv(out.files.back(), t);
    summary["crosscheck_sup_errors"] = {
        {"closed_form_vs_finite_difference", e_cf_fd},
        {"closed_form_vs_picard", e_cf_pc},
        {"finite_difference_vs_picard", e_fd_pc},
    };
  }

  auto sr = spectrum_report(spec);
  out.files.push_back(dir / "spectrum.csv");
  write_csv(out.files.back(), sr.table);
  out.warnings.insert(out.warnings.end(), sr.warnings.begin(), sr.warnings.end());
  summary["warnings"] = out.warnings;
  out.files.push_back(dir / "summary.json");
  write_text(out.files.back(), summary.dump(2) + "\n");
  return out;
}

RunOutcome run_mode_spectrum(const RunSpec& spec) {
  RunOutcome out;
  const fs::path dir = spec.output_dir;
  fs::create_directories(dir);
  auto sr = spectrum_report(spec);
  out.files.push_back(dir / "spectrum.csv");
  write_csv(out.files.back(), sr.table);

  // Eigenfunctions side by side for plotting.
  const auto prob = homogeneous_zonal_problem(spec.config);
  const auto sp = eigen_solve(prob, spec.n_eigen, std::max(64, spec.profile_points));
  CsvTable ef;
  ef.header.push_back("theta_deg");
  for (int k = 1; k <= spec.n_eigen; ++k) ef.header.push_back("y" + std::to_string(k));
  for (std::size_t i = 0; i < sp.x.size(); ++i) {
    std::vector<double> row{rad_to_deg(sp.x[i])};
    for (int k = 0; k < spec.n_eigen; ++k) row.push_back(sp.eigenfunctions[k][i]);
    ef.rows.push_back(std::move(row));
  }
  out.files.push_back(dir / "eigenfunctions.csv");
  write_csv(out.files.back(), ef);
  out.warnings = std::move(sr.warnings);
  return out;
}

RunOutcome run_mode_evolve(const RunSpec& spec) { return run_dynamics(spec, false); }

RunOutcome run_mode_stability(const RunSpec& spec) { return run_dynamics(spec, true); }

RunOutcome run(const RunSpec& spec) {
  spec.validate();
  switch (*spec.mode) {
    case RunMode::zonal: return run_mode_zonal(spec);
    case RunMode::evolve: return run_mode_evolve(spec);
    case RunMode::stability: return run_mode_stability(spec);
    case RunMode::spectrum: return run_mode_spectrum(spec);
  }
  throw ValidationError("unknown mode");
}

std::vector<RunSpec> expand_sweep(const RunSpec& base, const std::string& sweep) {
  const auto eq = sweep.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= sweep.size())
    throw ValidationError("sweep must look like key=v1,v2,... (got '" + sweep + "')");
  std::string key = sweep.substr(0, eq);
  if (key.find('.') == std::string::npos) {
    std::vector<std::string> hits;
    for (const auto& k : config_keys())
      if (k.substr(k.find('.') + 1) == key) hits.push_back(k);
    if (hits.size() != 1) throw ValidationError("sweep key '" + key + "' is unknown or ambiguous");
    key = hits.front();
  } else if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
    throw ValidationError("sweep key '" + key + "' is unknown");
  }
  if (key == "run.output_dir") throw ValidationError("cannot sweep over the output directory");

  std::vector<RunSpec> out;
  std::string rest = sweep.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string v = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (v.empty()) throw ValidationError("empty value in sweep '" + sweep + "'");
    RunSpec s = base;
    set_config_value(s, key, v);
    std::string leaf = key.substr(key.find('.') + 1) + "_" + v;
    std::replace_if(leaf.begin(), leaf.end(), [](char c) { return c == '/' || c == ' '; }, '_');
    s.output_dir = base.output_dir / leaf;
    out.push_back(std::move(s));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<SweepResult> run_sweep(const std::vector<RunSpec>& specs, unsigned threads) {
  std::vector<SweepResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < specs.size(); k = next++) {
      try {
        results[k].outcome = run(specs[k]);
      } catch (const Error& e) {
        results[k].error = e.what();
        results[k].exit_code = static_cast<int>(e.error_class());
      } catch (const std::exception& e) {
        results[k].error = e.what();
        results[k].exit_code = static_cast<int>(ErrorClass::numerical);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(specs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace acc
