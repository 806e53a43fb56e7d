#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "accflow/diagnostics.hpp"
#include "accflow/errors.hpp"
#include "accflow/euler2d.hpp"
#include "accflow/interpolation.hpp"
#include "accflow/zonal.hpp"
#include "unit/helpers.hpp"

using namespace acc;

namespace {

ScalarField random_smooth(const AnnulusGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng), ph = 3.0 * u(rng);
  const double L = g.rho_length();
  return sample(g, [&](int i, int j) {
    const double x = (g.rho(i) - g.rho0()) / L;
    return a * std::sin(2 * g.phi(j) + ph) * x + b * std::cos(g.phi(j)) * x * x + c * std::sin(pi * x);
  });
}

/// Zonal state plus a 1% perturbation of wavenumber 1 on the gentle scenario.
struct PerturbedCase {
  BandConfig cfg;
  AnnulusGrid grid;
  FlowFields ref, init;
};

PerturbedCase perturbed(int n, double lambda, double amplitude = 0.01) {
  const auto c = testutil::gentle(lambda);
  const auto g = AnnulusGrid::from_band(c, n, n);
  auto ref = discrete_zonal_state(c, g);
  const auto p = make_perturbation(g, amplitude, 1, 42, max_speed(ref, c, g));
  FlowFields init{ref.psi + p.psi, ref.zeta + p.zeta};
  return {c, g, std::move(ref), std::move(init)};
}

}  // namespace

TEST(Euler2d, HarmonicComponent) {
  const auto g = AnnulusGrid::from_band(BandConfig{}, 33, 16);
  const auto h = harmonic_component(g);
  for (int j = 0; j < g.n_phi(); ++j) {
    EXPECT_EQ(h.psi_star(0, j), 1.0);
    EXPECT_EQ(h.psi_star(g.n_rho() - 1, j), 0.0);
  }
  EXPECT_NEAR(h.normalization, dirichlet_inner(h.psi_star, h.psi_star, g), 1e-12 * h.normalization);
  EXPECT_NEAR(h.normalization, two_pi / std::log(BandConfig{}.r2() / BandConfig{}.r1()), 1e-12);
  // Circulation of grad-perp psi* around the inner circle by a direct line
  // integral of the azimuthal velocity: 2 pi r1 U_phi = 2 pi r1 / (r1 log(r2/r1)).
  const double line = two_pi * g.r(0) * h.u_star.azimuthal(0, 0) * h.normalization;
  EXPECT_NEAR(line, h.normalization, 1e-12 * h.normalization);
}

TEST(Euler2d, DirichletPartIsOrthogonalToHarmonic) {
  const BandConfig c;
  const auto g = AnnulusGrid::from_band(c, 41, 32);
  const Simulation sim(c, g);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto xi = random_smooth(g, seed);
    ScalarField zeta(g);
    const auto b = beta_rows(c, g);
    for (int i = 0; i < g.n_rho(); ++i)
      for (int j = 0; j < g.n_phi(); ++j) zeta(i, j) = b[i] + 100.0 * xi(i, j);
    const auto G = sim.dirichlet_part(zeta);
    EXPECT_NEAR(dirichlet_inner(G, sim.harmonic().psi_star, g), 0.0, 1e-10 * G.max_abs());
  }
}

TEST(Euler2d, RestStateHasNoVelocity) {
  const BandConfig c;
  const auto g = AnnulusGrid::from_band(c, 33, 32);
  const Simulation sim(c, g);
  ScalarField zeta(g);
  const auto b = beta_rows(c, g);
  for (int i = 0; i < g.n_rho(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) zeta(i, j) = b[i];
  const auto s = sim.from_zeta(zeta, 0.0);
  const auto U = sim.reconstruct_velocity(s);
  EXPECT_EQ(U.radial.max_abs(), 0.0);
  EXPECT_LE(U.azimuthal.max_abs(), 1e-12);
}

TEST(Euler2d, SignConvention) {
  // zeta = -(Delta_sphere psi + 2 omega sin theta) for psi = sin + sin cos cos(phi),
  // whose Laplacian is -2 sin - 6 sin cos cos(phi).
  BandConfig c;
  c.omega = 3.0;
  double prev = 0.0;
  for (int n : {32, 64}) {
    const auto g = AnnulusGrid::from_band(c, n + 1, n);
    const auto psi = sample(g, [&](int i, int j) {
      return g.sin_theta(i) + g.sin_theta(i) * g.cos_theta(i) * std::cos(g.phi(j));
    });
    const auto z = zeta_from_stream(psi, c, g);
    double e = 0.0;
    for (int i = 0; i < g.n_rho(); ++i)
      for (int j = 0; j < g.n_phi(); ++j) {
        const double s = g.sin_theta(i), co = g.cos_theta(i);
        const double lap = -2 * s - 6 * s * co * std::cos(g.phi(j));
        e = std::max(e, std::abs(z(i, j) + lap + 2 * c.omega * s));
      }
    if (prev > 0) EXPECT_GE(prev / e, 3.5);
    prev = e;
  }
  EXPECT_LE(prev, 5e-3);
}

TEST(Euler2d, ZonalVelocityMatchesAnalytic) {
  BandConfig c;
  c.lambda = 0.0;
  const ClosedFormLambda0 cf(c);
  const auto prof = solve_closed_form_lambda0(c, 4000);
  double prev = 0.0;
  for (int n : {64, 128}) {
    const auto g = AnnulusGrid::from_band(c, n + 1, 16);
    const Simulation sim(c, g);
    const auto s = sim.initialize(zonal_fields(prof, c, g));
    const auto U = sim.reconstruct_velocity(s);
    double e = 0.0, scale = 0.0;
    for (int i = 0; i < g.n_rho(); ++i) {
      const double th = g.theta(i);
      const double exact = -cf.dpsi(th) * (1.0 - std::sin(th));
      scale = std::max(scale, std::abs(exact));
      for (int j = 0; j < g.n_phi(); ++j) {
        e = std::max(e, std::abs(U.azimuthal(i, j) - exact));
        ASSERT_EQ(U.radial(i, j), 0.0);
      }
    }
    if (prev > 0) EXPECT_GE(prev / e, 3.5);
    prev = e;
    EXPECT_LE(e / scale, 1e-3);
  }
}

TEST(Euler2d, DiscreteDivergenceAndImpermeability) {
  const auto pc = perturbed(48, -10.0, 0.2);
  const Simulation sim(pc.cfg, pc.grid);
  const auto s = sim.initialize(pc.init);
  const auto v = grid_velocity(s.fields(), pc.cfg, pc.grid);
  const auto& g = pc.grid;
  double div = 0.0, scale = 0.0;
  for (int i = 1; i + 1 < g.n_rho(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) {
      const int jp = (j + 1) % g.n_phi(), jm = (j + g.n_phi() - 1) % g.n_phi();
      // Flux form in grid coordinates: d(m v_rho)/d rho + d(m v_phi)/d phi.
      const double d = (g.metric(i + 1) * v.radial(i + 1, j) - g.metric(i - 1) * v.radial(i - 1, j)) /
                           (2 * g.d_rho()) +
                       g.metric(i) * (v.azimuthal(i, jp) - v.azimuthal(i, jm)) / (2 * g.d_phi());
      div = std::max(div, std::abs(d));
      scale = std::max(scale, g.metric(i) * std::abs(v.azimuthal(i, j)) / g.d_phi());
    }
  EXPECT_LE(div, 1e-12 * scale);
  for (int j = 0; j < g.n_phi(); ++j) {
    EXPECT_EQ(v.radial(0, j), 0.0);
    EXPECT_EQ(v.radial(g.n_rho() - 1, j), 0.0);
  }
}

TEST(Euler2d, InitialCoefficientIsProjection) {
  BandConfig c;
  const auto g = AnnulusGrid::from_band(c, 33, 16);
  const Simulation sim(c, g);
  const double k = 3.7;
  ScalarField psi = sim.harmonic().psi_star;
  psi *= k;
  for (double& v : psi.data()) v += c.psi2;
  const auto s = sim.initialize({psi, zeta_from_stream(psi, c, g)});
  EXPECT_NEAR(s.lambda_circ, k * sim.harmonic().normalization, 1e-12 * k * sim.harmonic().normalization);
  for (std::size_t q = 0; q < psi.size(); ++q) EXPECT_NEAR(s.psi.data()[q], psi.data()[q], 1e-12);
}

TEST(Euler2d, ClosureIsLinearInTarget) {
  const auto pc = perturbed(33, -10.0);
  const Simulation sim(pc.cfg, pc.grid);
  const double T = 2.5;
  const double l0 = sim.fix_circulation(pc.init.zeta, 0.0);
  const double l1 = sim.fix_circulation(pc.init.zeta, T);
  const double l2 = sim.fix_circulation(pc.init.zeta, 2 * T);
  EXPECT_NEAR(l2 - l1, l1 - l0, 1e-9 * std::abs(l1));
  EXPECT_NEAR(l1 - l0, -T * pc.grid.cos_theta(0), 1e-9);
}

TEST(Euler2d, AdvectWithZeroVelocityIsIdentity) {
  const auto pc = perturbed(33, 0.0);
  const Simulation sim(pc.cfg, pc.grid);
  const VectorField zero(pc.grid);
  const auto out = sim.advect(pc.init.zeta, zero, 0.1);
  EXPECT_LE((out - pc.init.zeta).max_abs(), 1e-13 * pc.init.zeta.max_abs());
}

TEST(Euler2d, SolidRotation) {
  // Range clipping flattens the peaks of sin(phi) whenever they fall between
  // nodes, so convergence at smooth extrema is only about first order.
  const BandConfig c;
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const auto g = AnnulusGrid::from_band(c, 17, n);
    const Simulation sim(c, g);
    VectorField v(g);
    const double omega_rot = 2.0;
    for (double& x : v.azimuthal.data()) x = omega_rot;
    const auto z0 = sample(g, [&](int, int j) { return std::sin(g.phi(j)); });
    const auto run = [&](int steps) {
      ScalarField z = z0;
      const double dt = two_pi / omega_rot / steps;
      for (int k = 0; k < steps; ++k) z = sim.advect(z, v, dt);
      return (z - z0).max_abs();
    };
    // A whole cell per step is a pure index shift.
    EXPECT_LE(run(n), 1e-12);
    err.push_back(run(4 * n / 3));
  }
  EXPECT_GE(err[0] / err[1], 2.0);
  EXPECT_GE(err[1] / err[2], 2.0);
  EXPECT_LE(err[2], 5e-3);
}

TEST(Euler2d, AdvectionRespectsRange) {
  const auto pc = perturbed(33, -10.0, 0.3);
  const Simulation sim(pc.cfg, pc.grid);
  auto s = sim.initialize(pc.init);
  const double lo = s.zeta.min(), hi = s.zeta.max();
  const double dt = sim.stable_dt(s, 0.7);
  for (int k = 0; k < 30; ++k) {
    sim.step(s, dt);
    ASSERT_GE(s.zeta.min(), lo);
    ASSERT_LE(s.zeta.max(), hi);
  }
  EXPECT_LE(max_abs_xi(s.zeta, pc.cfg, pc.grid), vorticity_bound(pc.init.zeta, pc.cfg) + 1e-10);
}

TEST(Euler2d, ZonalStateIsSteady) {
  const auto c = testutil::gentle(-10.0);
  const auto g = AnnulusGrid::from_band(c, 48, 32);
  const Simulation sim(c, g);
  auto s = sim.initialize(discrete_zonal_state(c, g));
  const double lam0 = s.lambda_circ;
  const auto U0 = sim.reconstruct_velocity(s);
  const double dt = sim.stable_dt(s, 0.5);
  for (int k = 0; k < 100; ++k) sim.step(s, dt);
  EXPECT_LE(std::abs(s.lambda_circ - lam0), 1e-8 * std::abs(lam0));
  const auto U = sim.reconstruct_velocity(s);
  double du = 0.0, nu = 0.0;
  for (std::size_t q = 0; q < U.azimuthal.size(); ++q) {
    du += std::pow(U.azimuthal.data()[q] - U0.azimuthal.data()[q], 2);
    nu += std::pow(U0.azimuthal.data()[q], 2);
  }
  EXPECT_LE(std::sqrt(du / nu), 1e-12);
}

TEST(Euler2d, FiniteDifferenceProfileIsSteady) {
  BandConfig c = testutil::gentle(-10.0);
  const auto g = AnnulusGrid::from_band(c, 48, 32);
  const Simulation sim(c, g);
  auto s = sim.initialize(zonal_fields(solve_fd(c, 400), c, g));
  const auto z0 = s.zeta;
  sim.run(s, 0.2, sim.stable_dt(s, 0.5), 10, {});
  double d = 0.0;
  for (std::size_t q = 0; q < z0.size(); ++q) d = std::max(d, std::abs(s.zeta.data()[q] - z0.data()[q]));
  EXPECT_LE(d, 1e-9 * z0.max_abs());
}

TEST(Euler2d, ConstantVorticityWithoutRotationStaysConstant) {
  BandConfig c;
  c.omega = 1e-300;
  c.lambda = 0.0;
  const auto g = AnnulusGrid::from_band(c, 33, 32);
  const Simulation sim(c, g);
  const ScalarField z(g, 1.7);
  auto s = sim.from_zeta(z, 0.0);
  for (int k = 0; k < 10; ++k) sim.step(s, 1e-4);
  for (double v : s.zeta.data()) EXPECT_EQ(v, 1.7);
}

TEST(Euler2d, CirculationConservation) {
  const auto pc = perturbed(40, -10.0);
  const Simulation sim(pc.cfg, pc.grid);
  auto s = sim.initialize(pc.init);
  const auto c0 = circulations(s.fields(), pc.cfg, pc.grid);
  const double dt = sim.stable_dt(s, 0.5);
  for (int k = 0; k < 100; ++k) sim.step(s, dt);
  const auto c1 = circulations(s.fields(), pc.cfg, pc.grid);
  EXPECT_LE(std::abs(c1.inner - c0.inner), 1e-8 * std::abs(c0.inner));
  EXPECT_LE(std::abs(c1.outer - c0.outer), 1e-3 * std::abs(c0.outer));
}

TEST(Euler2d, ReversibilitySmoke) {
  // One step forward and one back returns close to the start. What remains
  // is dominated by interpolation, so it does not shrink with dt.
  const auto pc = perturbed(64, -10.0, 0.05);
  const Simulation sim(pc.cfg, pc.grid);
  const auto s0 = sim.initialize(pc.init);
  const double dt0 = sim.stable_dt(s0, 0.5);
  ScalarField dz = s0.zeta - pc.ref.zeta;
  const double scale = dz.max_abs();
  std::vector<double> err;
  for (double dt : {dt0, dt0 / 2}) {
    auto s = s0;
    sim.step(s, dt);
    sim.step(s, -dt);
    err.push_back((s.zeta - s0.zeta).max_abs() / scale);
  }
  EXPECT_LE(err[0], 1e-2);
  EXPECT_LE(err[1], 1e-2);
}

TEST(Euler2d, CflViolationSuggestsStep) {
  const auto pc = perturbed(33, -10.0);
  const Simulation sim(pc.cfg, pc.grid);
  auto s = sim.initialize(pc.init);
  double suggested = 0.0;
  try {
    sim.step(s, 1.0);
    FAIL() << "expected CflViolation";
  } catch (const CflViolation& e) {
    suggested = e.suggested_dt();
  }
  EXPECT_GT(suggested, 0.0);
  EXPECT_NO_THROW(sim.step(s, suggested));
}

TEST(Euler2d, StepIsDeterministic) {
  const auto pc = perturbed(33, -10.0);
  const Simulation a(pc.cfg, pc.grid), b(pc.cfg, pc.grid);
  auto sa = a.initialize(pc.init), sb = b.initialize(pc.init);
  const double dt = a.stable_dt(sa, 0.5);
  for (int k = 0; k < 5; ++k) a.step(sa, dt), b.step(sb, dt);
  EXPECT_EQ(sa.zeta.data(), sb.zeta.data());
  EXPECT_EQ(sa.lambda_circ, sb.lambda_circ);
}

TEST(Euler2d, RunObserverSchedule) {
  const auto pc = perturbed(33, -10.0);
  const Simulation sim(pc.cfg, pc.grid);
  auto s = sim.initialize(pc.init);
  int calls = 0;
  sim.run(s, 0.0, 1e-3, 1, [&](const SimState&) { ++calls; });
  EXPECT_EQ(calls, 1);
  std::vector<double> times;
  sim.run(s, 0.01, 0.003, 2, [&](const SimState& st) { times.push_back(st.t); });
  ASSERT_EQ(times.size(), 3u);  // t = 0, after step 2, final step 4
  EXPECT_EQ(times.back(), 0.01);
  EXPECT_EQ(s.steps, 4u);
}

TEST(Euler2d, PerturbationProperties) {
  const auto g = AnnulusGrid::from_band(testutil::gentle(0.0), 33, 32);
  const auto a = make_perturbation(g, 0.01, 3, 42, 10.0), b = make_perturbation(g, 0.01, 3, 42, 10.0);
  EXPECT_EQ(a.psi.data(), b.psi.data());
  EXPECT_NE(a.phase, make_perturbation(g, 0.01, 3, 43, 10.0).phase);
  for (int j = 0; j < g.n_phi(); ++j) {
    EXPECT_EQ(a.psi(0, j), 0.0);
    EXPECT_EQ(a.psi(g.n_rho() - 1, j), 0.0);
  }
  EXPECT_THROW(make_perturbation(g, -1.0, 3, 1, 1.0), ValidationError);
  EXPECT_EQ(make_perturbation(g, 0.0, 3, 1, 1.0).psi.max_abs(), 0.0);
}

TEST(Euler2d, InterpolationReproducesCubics) {
  const auto g = AnnulusGrid::from_band(BandConfig{}, 17, 32);
  const auto f = sample(g, [&](int i, int) { return std::pow(g.rho(i), 3) - g.rho(i); });
  for (double t : {0.1, 0.5, 0.93}) {
    const double rho = g.rho0() + t * g.rho_length();
    EXPECT_NEAR(interpolate(f, g, rho, 1.0), std::pow(rho, 3) - rho, 1e-12);
  }
}
