#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "accflow/errors.hpp"
#include "accflow/linalg.hpp"

using namespace acc;

TEST(Linalg, TridiagonalSolveMatchesKnownSolution) {
  const int n = 50;
  std::vector<double> sub(n, -1.0), diag(n, 2.5), sup(n, -1.0), x(n), rhs(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(0.3 * i) + 0.1 * i;
  for (int i = 0; i < n; ++i)
    rhs[i] = diag[i] * x[i] + (i > 0 ? sub[i] * x[i - 1] : 0.0) + (i + 1 < n ? sup[i] * x[i + 1] : 0.0);
  const auto s = solve_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(s.x[i], x[i], 1e-13);
  EXPECT_GT(s.min_abs_pivot, 1.0);
}

TEST(Linalg, SturmBisectionOnDiscreteLaplacian) {
  // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2 cos(k pi/(n+1)).
  const int n = 40;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  EXPECT_EQ(sturm_count(d, e, 0.0), 0);
  EXPECT_EQ(sturm_count(d, e, 4.0), n);
  for (int k = 0; k < n; ++k)
    EXPECT_NEAR(bisect_eigenvalue(d, e, k), 2.0 - 2.0 * std::cos((k + 1) * M_PI / (n + 1)), 1e-13);
  const auto [lo, hi] = gershgorin_bounds(d, e);
  EXPECT_LE(lo, 0.0);
  EXPECT_GE(hi, 4.0);
  const double mu = bisect_eigenvalue(d, e, 2);
  const auto v = inverse_iteration(d, e, mu);
  double nrm = 0.0, res = 0.0;
  for (int i = 0; i < n; ++i) {
    nrm += v[i] * v[i];
    const double Av = d[i] * v[i] + (i > 0 ? e[i - 1] * v[i - 1] : 0.0) + (i + 1 < n ? e[i] * v[i + 1] : 0.0);
    res = std::max(res, std::abs(Av - mu * v[i]));
  }
  EXPECT_NEAR(nrm, 1.0, 1e-12);
  EXPECT_LE(res, 1e-10);
}

TEST(Linalg, FornbergWeightsReproduceClassicStencils) {
  const std::vector<double> nodes{-2, -1, 0, 1, 2};
  const auto w = fornberg_weights(0.0, nodes, 2);
  const double d1[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  const double d2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(w[1][j], d1[j], 1e-14);
    EXPECT_NEAR(w[2][j], d2[j], 1e-14);
  }
}

TEST(Linalg, StencilDerivativeAndSimpson) {
  const int n = 101;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = i * 0.01, y[i] = std::exp(x[i]);
  const auto d = stencil_derivative(x, y, 1, 5);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(d[i], y[i], 1e-8);
  EXPECT_NEAR(simpson_uniform(y, 0.01), std::exp(1.0) - 1.0, 1e-10);
  // Odd interval count switches to the 3/8 rule at the end.
  std::vector<double> y2(y.begin(), y.end() - 1);
  EXPECT_NEAR(simpson_uniform(y2, 0.01), std::exp(0.99) - 1.0, 1e-10);
  std::vector<double> few{0.0, 1.0, 2.0};
  EXPECT_THROW(stencil_derivative(few, few, 1, 5), TooFewSamples);
}
