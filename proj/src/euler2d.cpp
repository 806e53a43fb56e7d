#include "accflow/euler2d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "accflow/errors.hpp"
#include "accflow/interpolation.hpp"
#include "accflow/linalg.hpp"

namespace acc {

namespace {

inline int wrap(int j, int n) { return j < 0 ? j + n : (j >= n ? j - n : j); }

/// Periodic second difference in phi of one row.
inline double dphiphi(const double* row, int j, int n, double inv_dp2) {
  return (row[wrap(j + 1, n)] - 2.0 * row[j] + row[wrap(j - 1, n)]) * inv_dp2;
}

/// One-sided second derivative in rho at a boundary row (third order
/// stencil through four rows). dir = +1 at the inner circle, -1 at the outer.
inline double drhorho_boundary(const ScalarField& f, int i, int j, int dir, double inv_h2) {
  return (2.0 * f(i, j) - 5.0 * f(i + dir, j) + 4.0 * f(i + 2 * dir, j) - f(i + 3 * dir, j)) * inv_h2;
}

}  // namespace

HarmonicComponent harmonic_component(const AnnulusGrid& g) {
  HarmonicComponent h;
  const double L = g.rho_length();
  h.normalization = two_pi / L;
  if (!(h.normalization > 1e-14)) throw DegenerateNormalization("harmonic normalization vanishes");
  h.psi_star = ScalarField(g);
  h.u_star = VectorField(g);
  const int n = g.n_rho() - 1;
  for (int i = 0; i <= n; ++i) {
    // Exactly linear in rho, hence discretely harmonic; endpoints exact.
    const double v = i == 0 ? 1.0 : (i == n ? 0.0 : static_cast<double>(n - i) / n);
    const double uphi = 1.0 / (two_pi * g.r(i));
    for (int j = 0; j < g.n_phi(); ++j) {
      h.psi_star(i, j) = v;
      h.u_star.azimuthal(i, j) = uphi;
    }
  }
  return h;
}

double dirichlet_inner(const ScalarField& a, const ScalarField& b, const AnnulusGrid& g) {
  require_match(a, g, "dirichlet_inner");
  require_match(b, g, "dirichlet_inner");
  const int nr = g.n_rho(), np = g.n_phi();
  double radial = 0.0;
  for (int i = 0; i + 1 < nr; ++i) {
    const double *a0 = a.row(i), *a1 = a.row(i + 1), *b0 = b.row(i), *b1 = b.row(i + 1);
    for (int j = 0; j < np; ++j) radial += (a1[j] - a0[j]) * (b1[j] - b0[j]);
  }
  double azimuthal = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double *ar = a.row(i), *br = b.row(i);
    double s = 0.0;
    for (int j = 0; j < np; ++j) {
      const int jp = j + 1 == np ? 0 : j + 1;
      s += (ar[jp] - ar[j]) * (br[jp] - br[j]);
    }
    azimuthal += g.trap_weight(i) * s;
  }
  return radial * g.d_phi() / g.d_rho() + azimuthal * g.d_rho() / g.d_phi();
}

std::vector<double> beta_rows(const BandConfig& cfg, const AnnulusGrid& g) {
  std::vector<double> b(g.n_rho());
  for (int i = 0; i < g.n_rho(); ++i) b[i] = -2.0 * cfg.omega * g.sin_theta(i);
  return b;
}

namespace {

/// Per-column psi_rho on one boundary row from the Green-consistent formula.
double boundary_psi_rho(const FlowFields& f, const AnnulusGrid& g, double beta_i, int i, int j) {
  const int n = g.n_rho() - 1;
  const double h = g.d_rho();
  const double inv_dp2 = 1.0 / (g.d_phi() * g.d_phi());
  const double* row = f.psi.row(i);
  // m * Omega with Omega = -(zeta - beta); psi_rho_rho = m Omega - psi_phi_phi.
  const double mOmega = -g.metric(i) * (f.zeta(i, j) - beta_i);
  const double prr = mOmega - dphiphi(row, j, g.n_phi(), inv_dp2);
  if (i == 0) return (f.psi(1, j) - f.psi(0, j)) / h - 0.5 * h * prr;
  return (f.psi(n, j) - f.psi(n - 1, j)) / h + 0.5 * h * prr;
}

}  // namespace

BoundaryFluxes boundary_fluxes(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  require_match(f.psi, g, "boundary_fluxes");
  require_match(f.zeta, g, "boundary_fluxes");
  const int n = g.n_rho() - 1;
  const double b0 = -2.0 * cfg.omega * g.sin_theta(0);
  const double bn = -2.0 * cfg.omega * g.sin_theta(n);
  BoundaryFluxes out;
  for (int j = 0; j < g.n_phi(); ++j) {
    out.inner += boundary_psi_rho(f, g, b0, 0, j);
    out.outer += boundary_psi_rho(f, g, bn, n, j);
  }
  out.inner *= g.d_phi();
  out.outer *= g.d_phi();
  return out;
}

ScalarField psi_rho(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  require_match(f.psi, g, "psi_rho");
  const int n = g.n_rho() - 1, np = g.n_phi();
  ScalarField out(g);
  const double inv2h = 0.5 / g.d_rho();
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < np; ++j) out(i, j) = (f.psi(i + 1, j) - f.psi(i - 1, j)) * inv2h;
  const double b0 = -2.0 * cfg.omega * g.sin_theta(0);
  const double bn = -2.0 * cfg.omega * g.sin_theta(n);
  for (int j = 0; j < np; ++j) {
    out(0, j) = boundary_psi_rho(f, g, b0, 0, j);
    out(n, j) = boundary_psi_rho(f, g, bn, n, j);
  }
  return out;
}

ScalarField psi_phi(const ScalarField& psi, const AnnulusGrid& g) {
  require_match(psi, g, "psi_phi");
  const int np = g.n_phi();
  ScalarField out(g);
  const double inv2h = 0.5 / g.d_phi();
  for (int i = 0; i < g.n_rho(); ++i) {
    const double* row = psi.row(i);
    double* o = out.row(i);
    for (int j = 0; j < np; ++j) o[j] = (row[wrap(j + 1, np)] - row[wrap(j - 1, np)]) * inv2h;
  }
  return out;
}

VectorField grid_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  VectorField v;
  v.radial = psi_phi(f.psi, g);
  v.azimuthal = psi_rho(f, cfg, g);
  const int n = g.n_rho() - 1;
  for (int i = 0; i <= n; ++i) {
    const double inv_m = 1.0 / g.metric(i);
    double* vr = v.radial.row(i);
    double* vp = v.azimuthal.row(i);
    for (int j = 0; j < g.n_phi(); ++j) {
      // psi is constant along the boundary, so no flow crosses it.
      vr[j] = (i == 0 || i == n) ? 0.0 : vr[j] * inv_m;
      vp[j] = -vp[j] * inv_m;
    }
  }
  return v;
}

VectorField planar_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  VectorField v;
  v.radial = psi_phi(f.psi, g);
  v.azimuthal = psi_rho(f, cfg, g);
  const int n = g.n_rho() - 1;
  for (int i = 0; i <= n; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (int j = 0; j < g.n_phi(); ++j) {
      v.radial(i, j) = (i == 0 || i == n) ? 0.0 : v.radial(i, j) * inv_r;
      v.azimuthal(i, j) = -v.azimuthal(i, j) * inv_r;
    }
  }
  return v;
}

VectorField sphere_velocity(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  // u = -psi_theta = -psi_rho / cos(theta), v = psi_phi / cos(theta).
  VectorField v;
  v.azimuthal = psi_rho(f, cfg, g);
  v.radial = psi_phi(f.psi, g);
  const int n = g.n_rho() - 1;
  for (int i = 0; i <= n; ++i) {
    const double inv_c = 1.0 / g.cos_theta(i);
    for (int j = 0; j < g.n_phi(); ++j) {
      v.azimuthal(i, j) = -v.azimuthal(i, j) * inv_c;
      v.radial(i, j) = (i == 0 || i == n) ? 0.0 : v.radial(i, j) * inv_c;
    }
  }
  return v;
}

ScalarField zeta_increment(const ScalarField& xi, const AnnulusGrid& g) {
  require_match(xi, g, "zeta_increment");
  const int n = g.n_rho() - 1, np = g.n_phi();
  const double inv_h2 = 1.0 / (g.d_rho() * g.d_rho());
  const double inv_dp2 = 1.0 / (g.d_phi() * g.d_phi());
  ScalarField out(g);
  for (int i = 0; i <= n; ++i) {
    const double inv_m = 1.0 / g.metric(i);
    const double* row = xi.row(i);
    for (int j = 0; j < np; ++j) {
      double prr;
      if (i == 0)
        prr = drhorho_boundary(xi, 0, j, +1, inv_h2);
      else if (i == n)
        prr = drhorho_boundary(xi, n, j, -1, inv_h2);
      else
        prr = (xi(i + 1, j) - 2.0 * xi(i, j) + xi(i - 1, j)) * inv_h2;
      out(i, j) = -(prr + dphiphi(row, j, np, inv_dp2)) * inv_m;
    }
  }
  return out;
}

ScalarField zeta_from_stream(const ScalarField& psi, const BandConfig& cfg, const AnnulusGrid& g) {
  ScalarField z = zeta_increment(psi, g);
  const auto b = beta_rows(cfg, g);
  for (int i = 0; i < g.n_rho(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) z(i, j) += b[i];
  return z;
}

FlowFields discrete_zonal_state(const BandConfig& cfg, const AnnulusGrid& g) {
  cfg.validate();
  const int n = g.n_rho() - 1;
  const int m = n - 1;
  const double inv_h2 = 1.0 / (g.d_rho() * g.d_rho());
  std::vector<double> sub(m, inv_h2), sup(m, inv_h2), diag(m), rhs(m);
  for (int k = 0; k < m; ++k) {
    const int i = k + 1;
    const double mi = g.metric(i);
    diag[k] = -2.0 * inv_h2 + cfg.lambda * mi;
    rhs[k] = mi * (cfg.upsilon - 2.0 * cfg.omega * g.sin_theta(i));
  }
  rhs[0] -= inv_h2 * cfg.psi1;
  rhs[m - 1] -= inv_h2 * cfg.psi2;
  const auto sol = solve_tridiagonal(sub, diag, sup, rhs);
  if (!(sol.min_abs_pivot > 1e-10 * 2.0 * inv_h2))
    throw NearEigenvalue("zonal state: lambda is too close to an eigenvalue of the radial problem");
  FlowFields f{ScalarField(g), ScalarField(g)};
  for (int i = 0; i <= n; ++i) {
    const double v = i == 0 ? cfg.psi1 : (i == n ? cfg.psi2 : sol.x[i - 1]);
    for (int j = 0; j < g.n_phi(); ++j) {
      f.psi(i, j) = v;
      f.zeta(i, j) = cfg.lambda * v - cfg.upsilon;
    }
  }
  return f;
}

FlowFields zonal_fields(const ZonalProfile& profile, const BandConfig& cfg, const AnnulusGrid& g) {
  const int n = g.n_rho() - 1;
  FlowFields f{ScalarField(g), ScalarField(g)};
  for (int i = 0; i <= n; ++i) {
    const double v = i == 0 ? cfg.psi1
                            : (i == n ? cfg.psi2 : interpolate_profile(profile.thetas, profile.psi, g.theta(i)));
    for (int j = 0; j < g.n_phi(); ++j) f.psi(i, j) = v;
  }
  f.zeta = zeta_from_stream(f.psi, cfg, g);
  return f;
}

Perturbation make_perturbation(const AnnulusGrid& g, double amplitude, int wavenumber,
                               std::uint64_t seed, double reference_speed) {
  if (amplitude < 0.0) throw ValidationError("perturbation amplitude must be non-negative");
  if (wavenumber < 1) throw ValidationError("perturbation wavenumber must be >= 1");
  Perturbation p;
  std::mt19937_64 rng(seed);
  // Top 53 bits to a double in [0, 1): identical on every platform.
  p.phase = static_cast<double>(rng() >> 11) * 0x1.0p-53 * two_pi;
  const double L = g.rho_length();
  const int n = g.n_rho() - 1;
  const double k = wavenumber;
  // Largest speed of the unit-scale field from its analytic derivatives.
  double speed = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = pi * (g.rho(i) - g.rho0()) / L;
    const double b = std::sin(x) * std::sin(x);
    const double db = pi / L * std::sin(2.0 * x);
    for (int j = 0; j < g.n_phi(); ++j) {
      const double a = k * (g.phi(j) - p.phase);
      const double pr = db * std::cos(a), pp = -k * b * std::sin(a);
      speed = std::max(speed, std::hypot(pr, pp) / g.cos_theta(i));
    }
  }
  p.scale = speed > 0.0 ? amplitude * reference_speed / speed : 0.0;
  p.psi = ScalarField(g);
  for (int i = 1; i < n; ++i) {
    const double x = pi * (g.rho(i) - g.rho0()) / L;
    const double b = std::sin(x) * std::sin(x);
    for (int j = 0; j < g.n_phi(); ++j) p.psi(i, j) = p.scale * b * std::cos(k * (g.phi(j) - p.phase));
  }
  p.zeta = zeta_increment(p.psi, g);
  return p;
}

double max_speed(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  const auto v = sphere_velocity(f, cfg, g);
  double s = 0.0;
  for (std::size_t k = 0; k < v.radial.size(); ++k)
    s = std::max(s, std::hypot(v.radial.data()[k], v.azimuthal.data()[k]));
  return s;
}

double courant_number(const VectorField& v, const AnnulusGrid& g, double dt) {
  double rate = 0.0;
  const double ir = 1.0 / g.d_rho(), ip = 1.0 / g.d_phi();
  for (std::size_t k = 0; k < v.radial.size(); ++k)
    rate = std::max(rate, std::max(std::abs(v.radial.data()[k]) * ir, std::abs(v.azimuthal.data()[k]) * ip));
  return std::abs(dt) * rate;
}

Simulation::Simulation(const BandConfig& cfg, const AnnulusGrid& grid)
    : cfg_(cfg), grid_(grid), poisson_(grid), harmonic_(harmonic_component(grid)),
      beta_(beta_rows(cfg, grid)) {
  cfg_.validate();
}

ScalarField Simulation::dirichlet_part(const ScalarField& zeta) const {
  require_match(zeta, grid_, "dirichlet_part");
  ScalarField g(grid_);
  for (int i = 1; i + 1 < grid_.n_rho(); ++i) {
    const double m = grid_.metric(i), b = beta_[i];
    const double* z = zeta.row(i);
    double* o = g.row(i);
    for (int j = 0; j < grid_.n_phi(); ++j) o[j] = -m * (z[j] - b);
  }
  return poisson_.solve_grid(g);
}

namespace {
void add_boundary_and_harmonic(ScalarField& psi, const HarmonicComponent& h, double psi2,
                               double lambda_circ) {
  const double c = lambda_circ / h.normalization;
  const auto& ps = h.psi_star.data();
  auto& d = psi.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += psi2 + c * ps[k];
  // Boundary values exactly constant.
  const int n = psi.n_rho() - 1;
  for (int j = 0; j < psi.n_phi(); ++j) {
    psi(0, j) = psi2 + c;
    psi(n, j) = psi2;
  }
}
}  // namespace

ScalarField Simulation::stream_function(const ScalarField& zeta, double lambda_circ) const {
  ScalarField psi = dirichlet_part(zeta);
  add_boundary_and_harmonic(psi, harmonic_, cfg_.psi2, lambda_circ);
  return psi;
}

std::pair<ScalarField, double> Simulation::solve_state(const ScalarField& zeta, double target) const {
  ScalarField psi = dirichlet_part(zeta);
  const double flux = boundary_fluxes({psi, zeta}, cfg_, grid_).inner;
  // Inner flux of the full field is flux - lambda; the circulation is flux / cos(theta1).
  const double lam = flux - target * grid_.cos_theta(0);
  add_boundary_and_harmonic(psi, harmonic_, cfg_.psi2, lam);
  return {std::move(psi), lam};
}

double Simulation::fix_circulation(const ScalarField& zeta, double target) const {
  if (!(harmonic_.normalization > 1e-14)) throw DegenerateNormalization("harmonic normalization vanishes");
  return solve_state(zeta, target).second;
}

SimState Simulation::initialize(const FlowFields& initial, std::optional<double> lambda_circ) const {
  require_match(initial.zeta, grid_, "initialize");
  require_match(initial.psi, grid_, "initialize");
  SimState s(cfg_, grid_);
  s.zeta = initial.zeta;
  s.lambda_circ = lambda_circ.value_or(dirichlet_inner(initial.psi, harmonic_.psi_star, grid_));
  s.psi = stream_function(s.zeta, s.lambda_circ);
  s.circ_target1 = boundary_fluxes(s.fields(), cfg_, grid_).inner / grid_.cos_theta(0);
  return s;
}

SimState Simulation::from_zeta(const ScalarField& zeta, double lambda_circ, double t) const {
  require_match(zeta, grid_, "from_zeta");
  SimState s(cfg_, grid_);
  s.t = t;
  s.zeta = zeta;
  s.lambda_circ = lambda_circ;
  s.psi = stream_function(zeta, lambda_circ);
  s.circ_target1 = boundary_fluxes(s.fields(), cfg_, grid_).inner / grid_.cos_theta(0);
  return s;
}

VectorField Simulation::reconstruct_velocity(const SimState& s) const {
  return planar_velocity(s.fields(), cfg_, grid_);
}

ScalarField Simulation::advect(const ScalarField& zeta, const VectorField& v, double dt,
                               AdvectStats* stats) const {
  require_match(zeta, grid_, "advect");
  const int nr = grid_.n_rho(), np = grid_.n_phi();
  const double lo = grid_.rho0(), hi = grid_.rho_end();
  ScalarField out(grid_);
  std::uint64_t clamps = 0;
  for (int i = 0; i < nr; ++i) {
    const double rho = grid_.rho(i);
    for (int j = 0; j < np; ++j) {
      const double phi = grid_.phi(j);
      // Midpoint rule for the backward characteristic.
      const double rm = std::clamp(rho - 0.5 * dt * v.radial(i, j), lo, hi);
      const double pm = phi - 0.5 * dt * v.azimuthal(i, j);
      const auto sm = make_stencil(grid_, rm, pm);
      const double vr = apply_stencil(sm, v.radial);
      const double vp = apply_stencil(sm, v.azimuthal);
      double rf = rho - dt * vr;
      const double pf = phi - dt * vp;
      if (rf < lo || rf > hi) {
        ++clamps;
        rf = std::clamp(rf, lo, hi);
      }
      out(i, j) = apply_stencil_clipped(make_stencil(grid_, rf, pf), zeta);
    }
  }
  if (stats) stats->clamp_events += clamps;
  return out;
}

double Simulation::stable_dt(const SimState& s, double cfl) const {
  const auto v = grid_velocity(s.fields(), cfg_, grid_);
  const double c1 = courant_number(v, grid_, 1.0);
  return c1 > 0.0 ? cfl / c1 : INFINITY;
}

void Simulation::step(SimState& s, double dt) const {
  const auto v0 = grid_velocity(s.fields(), cfg_, grid_);
  const double c = courant_number(v0, grid_, dt);
  if (c > max_courant) {
    std::ostringstream os;
    os << "Courant number " << c << " exceeds " << max_courant << " for dt = " << dt;
    throw CflViolation(os.str(), 0.5 * std::abs(dt) / c);
  }
  AdvectStats stats;
  // Predictor with the velocity frozen at t_n.
  const ScalarField z_pred = advect(s.zeta, v0, dt, &stats);
  const auto [psi_pred, lam_pred] = solve_state(z_pred, s.circ_target1);
  (void)lam_pred;
  auto v_half = grid_velocity({psi_pred, z_pred}, cfg_, grid_);
  for (std::size_t k = 0; k < v_half.radial.size(); ++k) {
    v_half.radial.data()[k] = 0.5 * (v_half.radial.data()[k] + v0.radial.data()[k]);
    v_half.azimuthal.data()[k] = 0.5 * (v_half.azimuthal.data()[k] + v0.azimuthal.data()[k]);
  }
  AdvectStats final_stats;
  s.zeta = advect(s.zeta, v_half, dt, &final_stats);
  auto [psi, lam] = solve_state(s.zeta, s.circ_target1);
  s.psi = std::move(psi);
  s.lambda_circ = lam;
  s.t += dt;
  s.clamp_events += final_stats.clamp_events;
  ++s.steps;
}

void Simulation::run(SimState& s, double t_end, double dt, int stride, const Observer& observer) const {
  if (!(dt > 0.0)) throw ValidationError("run needs dt > 0");
  if (stride < 1) stride = 1;
  if (observer) observer(s);
  if (!(t_end > s.t)) return;
  const double t0 = s.t;
  const auto n_steps = static_cast<long long>(std::ceil((t_end - t0) / dt - 1e-9));
  for (long long k = 1; k <= n_steps; ++k) {
    const double target = k == n_steps ? t_end : t0 + k * dt;
    step(s, target - s.t);
    s.t = target;
    if (observer && (k % stride == 0 || k == n_steps)) observer(s);
  }
}

}  // namespace acc
