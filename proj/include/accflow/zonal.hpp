#pragma once

#include <string>
#include <vector>

#include "accflow/geometry.hpp"

namespace acc {

enum class ZonalMethod { closed_form, finite_difference, picard, sl_expansion };

std::string to_string(ZonalMethod m);
ZonalMethod zonal_method_from_string(const std::string& s);

/// Samples of a zonal stream function and its velocity, ascending in theta.
struct ZonalProfile {
  std::vector<double> thetas;
  std::vector<double> psi;
  std::vector<double> u;              ///< -dPsi/dtheta, nondimensional
  std::vector<double> u_dimensional;  ///< u * u_scale, m/s
  double u_scale = 0.1;
  ZonalMethod method = ZonalMethod::finite_difference;
};

/// Homogeneous solution artanh(sin theta); satisfies eta' cos(theta) = 1.
double zonal_eta(double theta);

/// Exact solution of (Psi' cos)' = Upsilon cos - omega sin 2theta.
class ClosedFormLambda0 {
public:
  explicit ClosedFormLambda0(const BandConfig& cfg);
  double psi(double theta) const;
  double dpsi(double theta) const;
  double d2psi(double theta) const;
  /// (Psi' cos)' - (Upsilon cos - omega sin 2theta) from analytic derivatives.
  double residual(double theta) const;
  double c1() const { return c1_; }
  double c2() const { return c2_; }

private:
  double particular(double theta) const;
  double upsilon_, omega_, c1_, c2_;
};

/// Closed form for lambda = 0 sampled on n uniform intervals (n + 1 nodes).
ZonalProfile solve_closed_form_lambda0(const BandConfig& cfg, int n);

/// Second-order finite-difference solution on n uniform intervals.
ZonalProfile solve_fd(const BandConfig& cfg, int n);

/// Convergence record of the fixed-point iteration.
struct PicardReport {
  int iterations = 0;
  double contraction_estimate = 0.0;  ///< 2|lambda| (t2 - t1)^2
  std::vector<double> increments;     ///< sup-norm of successive differences
  std::vector<double> ratios;         ///< increments[k+1] / increments[k]
};

/// Fixed-point iteration in t = -log r on n uniform intervals of t.
///
/// The returned samples are ascending in theta but nonuniform in theta.
ZonalProfile solve_picard(const BandConfig& cfg, int n, double tol, int max_iter,
                          PicardReport* report = nullptr);

/// Truncated eigenfunction expansion on n uniform intervals.
ZonalProfile solve_sl_expansion(const BandConfig& cfg, int n, int n_terms);

/// Fills u = -Psi' (five-point stencils, shifted at the ends) and u_dimensional.
ZonalProfile velocity_profile(ZonalProfile profile);

/// Interpolates a profile at theta with a local cubic through four samples.
double interpolate_profile(const std::vector<double>& thetas, const std::vector<double>& values,
                           double theta);

/// Discrete residual of (Psi' cos)' + lambda Psi cos - Upsilon cos + omega sin 2theta
/// at interior nodes of a uniform profile.
std::vector<double> zonal_residual(const BandConfig& cfg, const ZonalProfile& profile);

/// Boundary-jet measure: smaller endpoint |u| divided by the largest |u|
/// over the central half of the band.
struct JetSummary {
  double jet_speed = 0.0;
  double interior_speed = 0.0;
  double ratio = 0.0;
};
JetSummary jet_summary(const ZonalProfile& profile);

}  // namespace acc
