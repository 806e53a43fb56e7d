#include "accflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
#include <math.h>
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "accflow/errors.hpp"

namespace acc {

double energy(const FlowFields& f, const AnnulusGrid& g) { return 0.5 * dirichlet_inner(f.psi, f.psi, g); }

double energy_from_velocity(const VectorField& v, const AnnulusGrid& g) {
  require_match(v.radial, g, "energy_from_velocity");
  ScalarField e2(g);
  for (std::size_t k = 0; k < e2.size(); ++k) {
    const double a = v.radial.data()[k], b = v.azimuthal.data()[k];
    e2.data()[k] = a * a + b * b;
  }
  return 0.5 * band_integral(e2, g);
}

Circulations circulations(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  // psi_theta = psi_rho / cos(theta) on each circle.
  const auto fl = boundary_fluxes(f, cfg, g);
  return {fl.inner / g.cos_theta(0), fl.outer / g.cos_theta(g.n_rho() - 1)};
}

CasimirFunction CasimirFunction::power(int k) {
  if (k < 0 || k > 6) throw ValidationError("Casimir power moments are limited to 0 <= k <= 6");
  return CasimirFunction([k](double s) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= s;
    return r;
  }, "s^" + std::to_string(k));
}

CasimirFunction CasimirFunction::table(std::vector<double> s, std::vector<double> f) {
  if (s.size() != f.size() || s.size() < 4)
    throw ValidationError("Casimir table needs matching columns with at least 4 rows");
  if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
    throw ValidationError("Casimir table abscissae must be strictly increasing");
  const double lo = s.front(), hi = s.back();
  const double flo = f.front(), fhi = f.back();
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto spline = std::make_shared<Pchip>(std::move(s), std::move(f));
  return CasimirFunction([spline, lo, hi, flo, fhi](double x) {
    if (x <= lo) return flo;
    if (x >= hi) return fhi;
    return (*spline)(x);
  }, "table");
}

double casimir(const FlowFields& f, const AnnulusGrid& g, const CasimirFunction& fn) {
  require_match(f.zeta, g, "casimir");
  ScalarField v(g);
  for (std::size_t k = 0; k < v.size(); ++k) v.data()[k] = fn(-f.zeta.data()[k]);
  return band_integral(v, g);
}

LyapunovWeights default_weights(const BandConfig& cfg) {
  return {cfg.psi2 * std::cos(cfg.theta2), -cfg.psi1 * std::cos(cfg.theta1)};
}

double lyapunov(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g, const LyapunovWeights& w) {
  ScalarField q(g);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double d = -f.zeta.data()[k] - cfg.upsilon;
    q.data()[k] = d * d;
  }
  const auto c = circulations(f, cfg, g);
  return 0.5 * (-cfg.lambda * dirichlet_inner(f.psi, f.psi, g) + band_integral(q, g)) +
         cfg.lambda * (w.alpha * c.outer + w.beta * c.inner);
}

double lyapunov(const FlowFields& f, const BandConfig& cfg, const AnnulusGrid& g) {
  return lyapunov(f, cfg, g, default_weights(cfg));
}

double stability_lhs(const FlowFields& f, const FlowFields& ref, const BandConfig& cfg, const AnnulusGrid& g) {
  require_match(ref.psi, g, "stability_lhs");
  const ScalarField dpsi = f.psi - ref.psi;
  ScalarField dz2(g);
  for (std::size_t k = 0; k < dz2.size(); ++k) {
    const double d = f.zeta.data()[k] - ref.zeta.data()[k];
    dz2.data()[k] = d * d;
  }
  return -cfg.lambda * dirichlet_inner(dpsi, dpsi, g) + band_integral(dz2, g);
}

StabilityIdentity stability_identity(const FlowFields& now, const FlowFields& initial, const FlowFields& ref,
                                     const BandConfig& cfg, const AnnulusGrid& g) {
  StabilityIdentity s;
  s.lhs = stability_lhs(now, ref, cfg, g);
  s.rhs = stability_lhs(initial, ref, cfg, g);
  s.via_lyapunov = 2.0 * (lyapunov(now, cfg, g) - lyapunov(ref, cfg, g));
  return s;
}

double en_functional(const FlowFields& f, const AnnulusGrid& g, int n, double upsilon) {
  if (n < 1) throw ValidationError("E_n needs n >= 1");
  ScalarField v(g);
  const double c = upsilon * (n + 1.0) / n;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double s = -f.zeta.data()[k];
    const double sn = std::pow(s, n);
    v.data()[k] = -c * sn + sn * s;
  }
  return band_integral(v, g);
}

double max_abs_xi(const ScalarField& zeta, const BandConfig& cfg, const AnnulusGrid& g) {
  require_match(zeta, g, "max_abs_xi");
  const auto b = beta_rows(cfg, g);
  double m = 0.0;
  for (int i = 0; i < g.n_rho(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) m = std::max(m, std::abs((zeta(i, j) - b[i]) / g.alpha(i)));
  return m;
}

double vorticity_bound(const ScalarField& zeta0, const BandConfig& cfg) {
  const double r1 = cfg.r1();
  const double s = 1.0 + r1 * r1;
  const double A = 4.0 / (s * s);
  const double B = 8.0 * cfg.omega * (1.0 - r1 * r1) / (s * s * s);
  return A * zeta0.max_abs() + B;
}

LambdaBalance lambda_balance(const SimState& s, const Simulation& sim) {
  const auto& g = s.grid;
  const auto U = sim.reconstruct_velocity(s);
  const auto& us = sim.harmonic().u_star;
  const double omega = s.config.omega;
  double g1 = 0.0, g2 = 0.0;
  for (int i = 0; i < g.n_rho(); ++i) {
    const double r = g.r(i), r2 = r * r;
    const double a = g.alpha(i);
    const double f = 1.0 / (two_pi * r);
    const double b = beta_of_radius(r, omega);
    const double k1 = (1.0 + r2) * (1.0 + r2) / (4.0 * pi * r2) - (1.0 + r2) / two_pi;
    double s1 = 0.0, s2 = 0.0;
    for (int j = 0; j < g.n_phi(); ++j) {
      const double ur = U.radial(i, j);
      const double up = U.azimuthal(i, j) - s.lambda_circ * us.azimuthal(i, j);
      s1 += ur * up * k1 + b * ur * f;
      s2 += a * f * f * ur / r - 0.5 * ur * r * (1.0 + r2) * f * f;
    }
    // dx dy = r^2 d rho d phi
    const double w = g.trap_weight(i) * r2;
    g1 += w * s1;
    g2 += w * s2;
  }
  const double cell = g.d_rho() * g.d_phi();
  return {g1 * cell, g2 * cell};
}

double lambda_ode_residual(const SimState& before, const SimState& after, const Simulation& sim) {
  const double dt = after.t - before.t;
  if (dt == 0.0) throw ValidationError("lambda residual needs two distinct times");
  const auto a = lambda_balance(before, sim), b = lambda_balance(after, sim);
  const double lam = 0.5 * (before.lambda_circ + after.lambda_circ);
  const double dlam = (after.lambda_circ - before.lambda_circ) / dt;
  return dlam / sim.harmonic().normalization + 0.5 * (a.gamma1 + b.gamma1) + 0.5 * (a.gamma2 + b.gamma2) * lam;
}

DiagnosticRecord evaluate(const SimState& s, const FlowFields& reference, double initial_lhs) {
  const auto& g = s.grid;
  const auto& cfg = s.config;
  const FlowFields f = s.fields();
  DiagnosticRecord r;
  r.t = s.t;
  r.energy = energy(f, g);
  const auto c = circulations(f, cfg, g);
  r.circ1 = c.inner;
  r.circ2 = c.outer;
  for (int k : {1, 2, 3}) {
    const auto fn = CasimirFunction::power(k);
    r.casimirs[fn.label()] = casimir(f, g, fn);
  }
  r.lyapunov = lyapunov(f, cfg, g);
  r.stability_lhs = stability_lhs(f, reference, cfg, g);
  r.stability_identity = r.stability_lhs - initial_lhs;
  r.max_xi = max_abs_xi(s.zeta, cfg, g);
  r.lambda_circ = s.lambda_circ;
  return r;
}

}  // namespace acc
