#include <gtest/gtest.h>

#include <cmath>

#include "accflow/errors.hpp"
#include "accflow/sturm_liouville.hpp"
#include "accflow/zonal.hpp"
#include "oracles/oracles.hpp"
#include "unit/helpers.hpp"

using namespace acc;

namespace {

SLProblem unit_problem() {
  SLProblem p;
  p.a = 0.0;
  p.b = pi;
  p.p = [](double) { return 1.0; };
  p.q = [](double) { return 0.0; };
  p.w = [](double) { return 1.0; };
  return p;
}

SLProblem zonal_problem(const BandConfig& c = {}) {
  SLProblem p = homogenize_boundary(c).problem;
  p.h = nullptr;
  return p;
}

double weighted_inner(const SLProblem& p, const SLSpectrum& s, int a, int b) {
  const double h = s.x[1] - s.x[0];
  double acc = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) acc += p.w(s.x[i]) * s.eigenfunctions[a][i] * s.eigenfunctions[b][i];
  return acc * h;
}

}  // namespace

TEST(SturmLiouville, TextbookSpectrum) {
  const auto p = unit_problem();
  const auto s = eigen_solve(p, 5, 256);
  for (int n = 1; n <= 5; ++n) {
    EXPECT_LE(testutil::rel(s.eigenvalues[n - 1], n * n), 1e-6) << n;
    double err = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      err = std::max(err, std::abs(s.eigenfunctions[n - 1][i] - std::sqrt(2.0 / pi) * std::sin(n * s.x[i])));
    EXPECT_LE(err, 1e-4) << n;
    EXPECT_EQ(sign_changes(s.eigenfunctions[n - 1]), n - 1);
  }
  for (int n = 1; n < 5; ++n) EXPECT_LT(s.eigenvalues[n - 1], s.eigenvalues[n]);
}

TEST(SturmLiouville, Orthonormality) {
  const auto p = zonal_problem();
  const auto s = eigen_solve(p, 6, 512);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) EXPECT_NEAR(weighted_inner(p, s, a, b), a == b ? 1.0 : 0.0, 1e-8);
}

TEST(SturmLiouville, ZonalEigenvaluesMatchPrueferOracle) {
  const BandConfig c;
  const auto p = zonal_problem(c);
  const auto s = eigen_solve(p, 3, 512);
  const auto cosf = [](double t) { return std::cos(t); };
  const auto zero = [](double) { return 0.0; };
  for (int n = 1; n <= 3; ++n) {
    const double ref = oracle::pruefer_eigenvalue(cosf, zero, cosf, c.theta1, c.theta2, n, 0.0, 100.0);
    EXPECT_LE(testutil::rel(s.eigenvalues[n - 1], ref), 1e-6) << n;
  }
  // Sign convention: positive slope at the left end.
  EXPECT_GT(s.eigenfunctions[0][1], 0.0);
}

TEST(SturmLiouville, ShootingAgreesWithMatrix) {
  const auto p = zonal_problem();
  const auto s = eigen_solve(p, 5, 256);
  ASSERT_EQ(s.shooting_eigenvalues.size(), 5u);
  for (int k = 0; k < 5; ++k) EXPECT_LE(testutil::rel(s.eigenvalues[k], s.shooting_eigenvalues[k]), 1e-6);
}

TEST(SturmLiouville, RayleighQuotient) {
  const auto p = unit_problem();
  std::vector<double> x(1025), y(1025), y7(1025);
  for (int i = 0; i <= 1024; ++i) x[i] = pi * i / 1024, y[i] = std::sin(x[i]), y7[i] = 7.0 * y[i];
  EXPECT_NEAR(rayleigh_quotient(p, x, y), 1.0, 1e-8);
  EXPECT_NEAR(rayleigh_quotient(p, x, y7), rayleigh_quotient(p, x, y), 1e-13);
  std::vector<double> z(1025, 0.0);
  EXPECT_THROW(rayleigh_quotient(p, x, z), ZeroFunction);

  const auto zp = zonal_problem();
  const auto s = eigen_solve(zp, 2, 1024);
  for (int k = 0; k < 2; ++k)
    EXPECT_LE(testutil::rel(rayleigh_quotient(zp, s.x, s.eigenfunctions[k]), s.eigenvalues[k]), 1e-6);
}

TEST(SturmLiouville, InhomogeneousClosedForm) {
  auto p = unit_problem();
  p.h = [](double x) { return -std::sin(x); };
  const auto s = eigen_solve(unit_problem(), 8, 2048);
  const auto y = solve_inhomogeneous(p, 0.0, s, 4);
  double err = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) err = std::max(err, std::abs(y[i] - std::sin(s.x[i])));
  EXPECT_LE(err, 1e-6);

  p.h = [](double) { return 0.0; };
  for (double v : solve_inhomogeneous(p, 0.0, s, 4)) EXPECT_EQ(v, 0.0);
}

TEST(SturmLiouville, ResonanceIsReported) {
  auto p = unit_problem();
  const auto s = eigen_solve(unit_problem(), 3, 256);
  p.h = [](double x) { return std::sin(x); };
  EXPECT_THROW(solve_inhomogeneous(p, s.eigenvalues[0], s, 3), ResonantEigenvalue);
  // Forcing orthogonal to the resonant mode: the non-unique case, still reported.
  p.h = [](double x) { return std::sin(2.0 * x); };
  EXPECT_THROW(solve_inhomogeneous(p, s.eigenvalues[0], s, 3), ResonantEigenvalue);
}

TEST(SturmLiouville, ZonalExpansionMatchesFiniteDifferences) {
  BandConfig c;
  c.lambda = -10.0;
  const int n = 256;
  const auto fd = solve_fd(c, n);
  const auto sl = solve_sl_expansion(c, n, n - 2);
  double err = 0.0;
  for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(fd.psi[i] - sl.psi[i]));
  EXPECT_LE(err, 1e-6);
}

TEST(SturmLiouville, ExpansionResidualDecreasesWithTerms) {
  BandConfig c;
  c.lambda = -10.0;
  const auto hp = homogenize_boundary(c);
  auto homog = hp.problem;
  homog.h = nullptr;
  EigenOptions o;
  o.validate = false;
  const auto s = eigen_solve(homog, 32, 512, o);
  double prev = INFINITY;
  for (int terms : {4, 8, 16, 32}) {
    const auto y = solve_inhomogeneous(hp.problem, hp.mu, s, terms);
    const double r = inhomogeneous_residual(hp.problem, hp.mu, s.x, y);
    EXPECT_LT(r, prev) << terms;
    prev = r;
  }
}

TEST(SturmLiouville, HomogenizeBoundary) {
  BandConfig c;
  c.psi1 = c.psi2 = 0.0;
  auto hp = homogenize_boundary(c);
  EXPECT_EQ(hp.shift(c.theta1), 0.0);
  EXPECT_EQ(hp.shift(c.theta2), 0.0);
  const double th = -0.95;
  EXPECT_NEAR(hp.problem.h(th), c.upsilon * std::cos(th) - c.omega * std::sin(2 * th), 1e-9);

  c = BandConfig{};  // psi1 = -5, psi2 = -25 on [-60, -50] degrees
  hp = homogenize_boundary(c);
  EXPECT_NEAR(hp.shift_a, -20.0 / deg_to_rad(10.0), 1e-12);
  EXPECT_NEAR(hp.shift(c.theta1), c.psi1, 1e-12);
  EXPECT_NEAR(hp.shift(c.theta2), c.psi2, 1e-12);
  // Shifted solution plus shift meets the original boundary values.
  const auto prof = solve_sl_expansion(c, 128, 32);
  EXPECT_NEAR(prof.psi.front(), c.psi1, 1e-12);
  EXPECT_NEAR(prof.psi.back(), c.psi2, 1e-12);
}

TEST(SturmLiouville, InputValidation) {
  auto p = unit_problem();
  EXPECT_THROW(eigen_solve(p, 3, 32), ValidationError);
  p.p = [](double) { return -1.0; };
  EXPECT_THROW(eigen_solve(p, 3, 128), ValidationError);
}
