#pragma once

#include <functional>
#include <vector>

#include "accflow/geometry.hpp"

namespace acc {

/// Boundary data alpha y(a) + beta y'(a) = 0 and gamma y(b) + delta y'(b) = 0.
struct SLBoundary {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;
};

/// Regular problem (p y')' + q y = -mu w y + h on [a, b].
struct SLProblem {
  double a = 0.0;
  double b = 1.0;
  std::function<double(double)> p;
  std::function<double(double)> q;
  std::function<double(double)> w;
  std::function<double(double)> h;  ///< empty for the homogeneous problem
  SLBoundary boundary;

  /// Checks a < b, positivity of p and w on a sample, and Dirichlet data.
  void validate(int samples = 257) const;
};

/// Eigenpairs on a uniform grid; eigenfunctions carry the boundary zeros.
struct SLSpectrum {
  std::vector<double> x;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;
  /// Independent shooting estimates; empty when validation was disabled.
  std::vector<double> shooting_eigenvalues;
  int grid_size = 0;  ///< number of intervals actually used
};

struct EigenOptions {
  bool validate = true;       ///< cross-check each eigenvalue by Pruefer shooting
  double rel_tol = 1e-6;      ///< matrix/shooting agreement required
  int max_grid_size = 1 << 17;
  int shooting_steps = 4000;  ///< RK4 steps across [a, b]
};

/// First n_max eigenpairs of a homogeneous Dirichlet problem.
///
/// The symmetric finite-difference pencil is reduced to a tridiagonal
/// matrix; eigenvalues come from Sturm bisection and eigenvectors from
/// inverse iteration. With validation on, the grid is doubled until every
/// eigenvalue agrees with the shooting count, else ConvergenceFailure.
SLSpectrum eigen_solve(const SLProblem& prob, int n_max, int grid_size,
                       const EigenOptions& opts = {});

/// Pruefer angle at x = b for spectral parameter mu (Dirichlet at a).
double pruefer_angle(const SLProblem& prob, double mu, int steps);

/// Eigenvalue with index n (1-based) located by shooting inside [lo, hi].
double shooting_eigenvalue(const SLProblem& prob, int n, double lo, double hi, int steps);

/// Rayleigh quotient of samples y on the uniform grid x.
double rayleigh_quotient(const SLProblem& prob, const std::vector<double>& x,
                         const std::vector<double>& y);

/// Number of strict sign changes in the interior samples.
int sign_changes(const std::vector<double>& y);

/// Eigenfunction expansion sum b_n y_n with b_n = <h/w, y_n>_w / (mu - mu_n).
std::vector<double> solve_inhomogeneous(const SLProblem& prob, double mu,
                                        const SLSpectrum& spectrum, int n_terms);

/// Weighted norm of the discrete residual (p y')' + q y + mu w y - h.
double inhomogeneous_residual(const SLProblem& prob, double mu, const std::vector<double>& x,
                              const std::vector<double>& y);

/// Zonal problem with homogeneous Dirichlet data plus the affine shift.
struct HomogenizedProblem {
  SLProblem problem;
  double mu = 0.0;       ///< spectral parameter, equal to lambda
  double shift_a = 0.0;  ///< slope of the shift
  double shift_b = 0.0;  ///< intercept of the shift
  double shift(double theta) const { return shift_a * theta + shift_b; }
};

HomogenizedProblem homogenize_boundary(const BandConfig& cfg);

}  // namespace acc
