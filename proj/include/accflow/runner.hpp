#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "accflow/config.hpp"

namespace acc {

/// What a run left behind.
struct RunOutcome {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  bool tolerances_ok = true;
};

/// Zonal profile CSV/SVG, the spectrum table and, for lambda = 0, the
/// three-method cross-check.
RunOutcome run_mode_zonal(const RunSpec& spec);

/// First n_eigen eigenpairs of the homogeneous zonal problem.
RunOutcome run_mode_spectrum(const RunSpec& spec);

/// Zonal state plus the seeded perturbation, evolved to t_end. Writes the
/// diagnostics CSV, checkpoints and a JSON summary. Throws ToleranceBreached
/// after writing everything if a conserved quantity drifts beyond
/// drift_tolerance or the vorticity bound fails.
RunOutcome run_mode_evolve(const RunSpec& spec);

/// As evolve, plus the time series of both sides of the stability identity.
RunOutcome run_mode_stability(const RunSpec& spec);

/// Validates the spec and dispatches on its mode.
RunOutcome run(const RunSpec& spec);

/// Copies of `base`, one per value of "key=v1,v2,...". The key may be dotted
/// ("band.lambda") or bare ("lambda") when unambiguous. Each copy writes to
/// its own subdirectory of the base output directory.
std::vector<RunSpec> expand_sweep(const RunSpec& base, const std::string& sweep);

/// Result of one sweep member; `error` is empty on success.
struct SweepResult {
  RunOutcome outcome;
  std::string error;
  int exit_code = 0;
};

/// Runs the specs on up to `threads` worker threads; each run owns its state.
std::vector<SweepResult> run_sweep(const std::vector<RunSpec>& specs, unsigned threads);

}  // namespace acc
