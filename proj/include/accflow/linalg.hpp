#pragma once

#include <span>
#include <utility>
#include <vector>

namespace acc {

/// Solution of a tridiagonal system together with the smallest pivot seen.
struct TridiagonalSolution {
  std::vector<double> x;
  double min_abs_pivot = 0.0;
};

/// Thomas algorithm for sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i].
///
/// sub[0] and sup[n-1] are ignored. No pivoting; the caller inspects
/// min_abs_pivot to decide whether the system was too close to singular.
TridiagonalSolution solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs);

/// Number of eigenvalues strictly below x of the symmetric tridiagonal
/// matrix with diagonal d and off-diagonal e (e[i] couples i and i+1).
int sturm_count(std::span<const double> d, std::span<const double> e, double x);

/// Gershgorin interval enclosing the whole spectrum.
std::pair<double, double> gershgorin_bounds(std::span<const double> d, std::span<const double> e);

/// k-th smallest eigenvalue (k = 0, 1, ...) by Sturm bisection.
double bisect_eigenvalue(std::span<const double> d, std::span<const double> e, int k);

/// Unit eigenvector for an (already accurate) eigenvalue by inverse iteration.
std::vector<double> inverse_iteration(std::span<const double> d, std::span<const double> e,
                                      double eigenvalue);

/// Finite-difference weights for derivatives 0..m at x0 from arbitrary nodes.
///
/// Returns w[k][j], the weight of node j in the k-th derivative.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int m);

/// Derivative of order `order` of samples y(x) at every node, using a
/// `width`-point stencil centered where possible and shifted at the ends.
std::vector<double> stencil_derivative(std::span<const double> x, std::span<const double> y,
                                       int order, int width);

/// Composite Simpson rule on a uniform grid, 3/8 rule on the last three
/// intervals when the interval count is odd.
double simpson_uniform(std::span<const double> y, double h);

}  // namespace acc
