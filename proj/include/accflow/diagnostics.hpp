#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "accflow/euler2d.hpp"

namespace acc {

/// Kinetic energy 1/2 (grad psi, grad psi) with the discrete Dirichlet form.
double energy(const FlowFields& f, const AnnulusGrid& g);

/// Kinetic energy from nodal spherical velocities, 1/2 band_integral(u^2 + v^2).
double energy_from_velocity(const VectorField& sphere_vel, const AnnulusGrid& g);

/// Boundary circulations int psi_theta d phi on the inner (theta1) and
/// outer (theta2) circles.
struct Circulations {
  double inner = 0.0;
  double outer = 0.0;
};
Circulations circulations(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Function applied to the absolute vorticity s inside a Casimir integral.
class CasimirFunction {
public:
  /// s^k for k = 0..6.
  static CasimirFunction power(int k);
  /// Monotone cubic through tabulated (s, f(s)) samples; constant outside.
  static CasimirFunction table(std::vector<double> s, std::vector<double> f);

  double operator()(double s) const { return fn_(s); }
  const std::string& label() const { return label_; }

private:
  CasimirFunction(std::function<double(double)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {}
  std::function<double(double)> fn_;
  std::string label_;
};

/// Band integral of f(Delta psi + 2 omega sin theta) = f(-zeta).
double casimir(const FlowFields& f, const AnnulusGrid& g, const CasimirFunction& fn);

/// Weights of the boundary-circulation terms in the Lyapunov functional.
struct LyapunovWeights {
  double alpha = 0.0;  ///< multiplies the outer circulation
  double beta = 0.0;   ///< multiplies the inner circulation
};
/// The choice alpha = psi2 cos(theta2), beta = -psi1 cos(theta1).
LyapunovWeights default_weights(const BandConfig& cfg);

/// 1/2 int [-lambda |grad psi|^2 + (Delta psi + 2 omega sin theta - Upsilon)^2]
/// + lambda (alpha Gamma_outer + beta Gamma_inner).
double lyapunov(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g,
                const LyapunovWeights& w);
double lyapunov(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Both sides of the stability identity plus the functional form of the left.
struct StabilityIdentity {
  double lhs = 0.0;          ///< -lambda |u - u*|^2 + |Omega - Omega*|^2 at time t
  double rhs = 0.0;          ///< the same at t = 0
  double via_lyapunov = 0.0; ///< 2 (E(psi(t)) - E(psi*))
  double defect() const { return lhs - rhs; }
};

/// -lambda D(psi - psi*) + int (Omega - Omega*)^2 for one state.
double stability_lhs(const FlowFields& f, const FlowFields& reference, const BandConfig& cfg,
                     const AnnulusGrid& g);

StabilityIdentity stability_identity(const FlowFields& now, const FlowFields& initial,
                                     const FlowFields& reference, const BandConfig& cfg,
                                     const AnnulusGrid& g);

/// int [-Upsilon (n+1)/n s^n + s^{n+1}] with s the absolute vorticity.
double en_functional(const FlowFields& f, const AnnulusGrid& g, int n, double upsilon);

/// Largest |xi| = |(zeta - beta)/alpha| over the grid.
double max_abs_xi(const ScalarField& zeta, const BandConfig& cfg, const AnnulusGrid& g);

/// A ||zeta0||_inf + B with A = 4/(1+r1^2)^2 and B = 8 omega (1-r1^2)/(1+r1^2)^3.
double vorticity_bound(const ScalarField& zeta0, const BandConfig& cfg);

/// Coefficients of the energy balance of the harmonic coefficient,
/// lambda'/N + gamma1 + gamma2 lambda = 0, for the current fields.
struct LambdaBalance {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};
LambdaBalance lambda_balance(const SimState& s, const Simulation& sim);

/// Residual of the balance with lambda' from two states dt apart (centered
/// at the average of the coefficients).
double lambda_ode_residual(const SimState& before, const SimState& after, const Simulation& sim);

/// One row of the diagnostics time series.
struct DiagnosticRecord {
  double t = 0.0;
  double energy = 0.0;
  double circ1 = 0.0;
  double circ2 = 0.0;
  std::map<std::string, double> casimirs;  ///< keyed "s^2", "s^3", ...
  double lyapunov = 0.0;
  double stability_lhs = 0.0;
  double stability_identity = 0.0;  ///< lhs minus its initial value
  double max_xi = 0.0;
  double lambda_circ = 0.0;
};

/// Evaluates every diagnostic for a state. `reference` is the zonal state
/// used by the stability identity and `initial_lhs` its value at t = 0.
DiagnosticRecord evaluate(const SimState& s, const FlowFields& reference, double initial_lhs);

}  // namespace acc
