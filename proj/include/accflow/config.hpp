#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "accflow/geometry.hpp"
#include "accflow/zonal.hpp"

namespace acc {

enum class RunMode { zonal, evolve, stability, spectrum };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

/// Everything one invocation of the driver needs.
struct RunSpec {
  std::optional<RunMode> mode;  ///< required; validate() names it when missing
  BandConfig config;

  int n_rho = 128;
  int n_phi = 128;
  int profile_points = 400;  ///< intervals of the 1-D zonal solvers

  /// Time step; absent means "pick the step with Courant number `cfl`".
  std::optional<double> dt;
  double cfl = 0.5;
  double t_end = 1.0;
  int output_stride = 50;  ///< steps between diagnostics rows and checkpoints

  ZonalMethod method = ZonalMethod::finite_difference;
  int sl_terms = 64;  ///< terms of the eigenfunction expansion
  int n_eigen = 5;    ///< eigenvalues reported by the spectrum table

  double amplitude = 0.01;  ///< perturbation speed relative to the zonal maximum
  int wavenumber = 1;
  std::uint64_t seed = 42;

  /// Relative drift allowed for the conserved quantities in evolve mode.
  double drift_tolerance = 1e-2;
  bool write_checkpoints = true;

  std::filesystem::path output_dir = "out";

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Every key the structured config accepts, as "section.key".
const std::vector<std::string>& config_keys();

/// Sets one key ("section.key") from its textual value. Angles are given
/// in degrees (band.theta1_deg, band.theta2_deg).
void set_config_value(RunSpec& spec, const std::string& key, const std::string& value);

/// Parses `[band]`, `[grid]` and `[run]` sections of key = value pairs with
/// `#` comments. Unknown keys and malformed values raise ParseError. The
/// result is not validated, so flags can still override it.
RunSpec parse_config_text(const std::string& text, RunSpec base = {});
RunSpec parse_config_file(const std::filesystem::path& path, RunSpec base = {});

/// The spec as config text; parsing it back reproduces the spec (angles to
/// round-off, since they pass through degrees).
std::string to_config_text(const RunSpec& spec);

}  // namespace acc
