#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "accflow/geometry.hpp"
#include "accflow/poisson.hpp"
#include "accflow/zonal.hpp"

namespace acc {

/// Stream function and transported vorticity on one grid.
///
/// zeta = alpha xi + beta, where xi is the planar curl of U = grad-perp psi.
/// With the orientation of the projection this works out to
/// zeta = -(Delta_sphere psi + 2 omega sin theta): zeta is minus the absolute
/// vorticity. psi is constant on each boundary circle.
struct FlowFields {
  ScalarField psi;
  ScalarField zeta;
};

/// Time-dependent state of the projected Euler system.
struct SimState {
  double t = 0.0;
  ScalarField zeta;
  double lambda_circ = 0.0;  ///< coefficient of the harmonic component
  BandConfig config;
  AnnulusGrid grid;
  ScalarField psi;            ///< stream function consistent with zeta, lambda_circ
  double circ_target1 = 0.0;  ///< circulation held fixed on the inner circle
  std::uint64_t clamp_events = 0;
  std::uint64_t steps = 0;

  SimState(const BandConfig& cfg, const AnnulusGrid& g) : config(cfg), grid(g) {}
  FlowFields fields() const { return {psi, zeta}; }
};

/// Normalized harmonic field U* = grad-perp psi* / N with psi* = 1 on the
/// inner circle and 0 on the outer one.
struct HarmonicComponent {
  ScalarField psi_star;
  VectorField u_star;          ///< planar polar components (radial, azimuthal)
  double normalization = 0.0;  ///< N = (grad-perp psi*, grad-perp psi*) = 2 pi / (rho2 - rho1)
};
HarmonicComponent harmonic_component(const AnnulusGrid& grid);

/// Discrete Dirichlet inner product sum of grad a . grad b over the band.
///
/// By conformal invariance this is the spherical integral of
/// a_theta b_theta + a_phi b_phi / cos^2(theta). rho-differences live on the
/// cell edges; phi-differences are trapezoid-weighted in rho.
double dirichlet_inner(const ScalarField& a, const ScalarField& b, const AnnulusGrid& g);

/// Row-wise -2 omega sin(theta) (the planetary term beta).
std::vector<double> beta_rows(const BandConfig& cfg, const AnnulusGrid& g);

/// Second-order one-sided d psi/d rho on the boundary rows, consistent with
/// the discrete Green identity. Uses the relative vorticity implied by zeta.
struct BoundaryFluxes {
  double inner = 0.0;  ///< int psi_rho d phi on the inner circle
  double outer = 0.0;  ///< int psi_rho d phi on the outer circle
};
BoundaryFluxes boundary_fluxes(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// psi_rho at every node: centered in the interior, one-sided on the boundary.
ScalarField psi_rho(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);
/// psi_phi at every node by centered periodic differences.
ScalarField psi_phi(const ScalarField& psi, const AnnulusGrid& g);

/// Transport velocity in grid coordinates: (d rho/dt, d phi/dt) = (psi_phi, -psi_rho)/m.
VectorField grid_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Planar velocity U in polar components: U_r = psi_phi / r, U_phi = -psi_rho / r.
VectorField planar_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Spherical components (u eastward, v northward) at every node.
VectorField sphere_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Vorticity from a stream function: interior nodes from the five-point
/// Laplacian, boundary rows from a one-sided second derivative in rho.
ScalarField zeta_from_stream(const ScalarField& psi, const BandConfig& cfg, const AnnulusGrid& g);

/// Linear part of the map above, -(discrete Delta_sphere) applied to xi.
ScalarField zeta_increment(const ScalarField& xi, const AnnulusGrid& g);

/// Zonal steady state solved on the rho-grid with the solver's own stencil,
/// so it is an exact discrete steady state; zeta* = lambda psi* - Upsilon.
FlowFields discrete_zonal_state(const BandConfig& cfg, const AnnulusGrid& g);

/// Samples a 1-D zonal profile onto the grid (cubic interpolation in theta)
/// and derives zeta from it.
FlowFields zonal_fields(const ZonalProfile& profile, const BandConfig& cfg, const AnnulusGrid& g);

/// Smooth divergence-free perturbation psi' = S sin^2(pi (rho - rho1)/L) cos(k (phi - phi0)).
///
/// phi0 is drawn from a seeded generator. S makes the largest perturbation
/// speed equal to amplitude times reference_speed.
struct Perturbation {
  ScalarField psi;
  ScalarField zeta;  ///< matching zeta increment
  double phase = 0.0;
  double scale = 0.0;
};
Perturbation make_perturbation(const AnnulusGrid& g, double amplitude, int wavenumber,
                               std::uint64_t seed, double reference_speed);

/// Largest spherical speed of a flow on the grid.
double max_speed(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g);

/// Courant number of the grid velocity for a step dt (per direction).
double courant_number(const VectorField& grid_vel, const AnnulusGrid& g, double dt);

/// Advection statistics of one semi-Lagrangian sweep.
struct AdvectStats {
  std::uint64_t clamp_events = 0;
};

/// Drives the projected Euler system on one grid.
///
/// Owns the Poisson solver. Each step costs two Poisson solves: one for the
/// predicted vorticity and one for the new state (reused at the next step).
class Simulation {
public:
  static constexpr double max_courant = 0.8;

  Simulation(const BandConfig& cfg, const AnnulusGrid& grid);

  const BandConfig& config() const { return cfg_; }
  const AnnulusGrid& grid() const { return grid_; }
  const HarmonicComponent& harmonic() const { return harmonic_; }

  /// State from an initial stream function and its vorticity. lambda_circ
  /// defaults to (U0, U*) N; the inner circulation becomes the target.
  SimState initialize(const FlowFields& initial, std::optional<double> lambda_circ = {}) const;

  /// State from vorticity and harmonic coefficient only (e.g. a checkpoint).
  SimState from_zeta(const ScalarField& zeta, double lambda_circ, double t = 0.0) const;

  /// Dirichlet part G[xi] of the stream function for a vorticity field.
  ScalarField dirichlet_part(const ScalarField& zeta) const;

  /// Full stream function psi2 + G[xi] + (lambda_circ / N) psi*.
  ScalarField stream_function(const ScalarField& zeta, double lambda_circ) const;

  /// Coefficient that gives the inner circle circulation `target`.
  double fix_circulation(const ScalarField& zeta, double target) const;

  /// Planar velocity of the state (U = grad-perp G xi + lambda U*).
  VectorField reconstruct_velocity(const SimState& s) const;

  /// One semi-Lagrangian sweep of zeta along a frozen grid velocity.
  ScalarField advect(const ScalarField& zeta, const VectorField& grid_vel, double dt,
                     AdvectStats* stats = nullptr) const;

  /// Largest step with Courant number `cfl` for the state's current velocity.
  double stable_dt(const SimState& s, double cfl = 0.5) const;

  /// Advances the state by dt. Throws CflViolation above max_courant.
  void step(SimState& s, double dt) const;

  using Observer = std::function<void(const SimState&)>;

  /// Steps to t_end (last step shortened to land on it), calling the
  /// observer on the initial state and every `stride` steps plus at the end.
  void run(SimState& s, double t_end, double dt, int stride, const Observer& observer) const;

private:
  /// One Poisson solve: stream function and coefficient for a circulation target.
  std::pair<ScalarField, double> solve_state(const ScalarField& zeta, double target) const;

  BandConfig cfg_;
  AnnulusGrid grid_;
  PoissonSolver poisson_;
  HarmonicComponent harmonic_;
  std::vector<double> beta_;
};

}  // namespace acc
