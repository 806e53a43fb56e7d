#pragma once

#include <memory>

#include "accflow/geometry.hpp"

namespace acc {

/// Dirichlet Poisson solver on the annulus: discrete Delta psi = -f, psi = 0
/// on both circles.
///
/// In (rho, phi) the planar Laplacian is e^{-2 rho}(d_rho^2 + d_phi^2). The
/// solver takes a real FFT in phi and runs one tridiagonal solve in rho per
/// azimuthal mode, using the exact eigenvalues of the periodic second
/// difference so the result satisfies the five-point stencil to round-off.
/// The boundary rows of f are ignored.
class PoissonSolver {
public:
  explicit PoissonSolver(const AnnulusGrid& grid);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;

  /// Solves Delta psi = -f.
  ScalarField solve(const ScalarField& f) const;

  /// Solves (d_rho^2 + d_phi^2) psi = g directly in grid coordinates.
  ScalarField solve_grid(const ScalarField& g) const;

  const AnnulusGrid& grid() const { return grid_; }

private:
  struct Impl;
  AnnulusGrid grid_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper constructing a solver for one call.
ScalarField poisson_solve(const ScalarField& f, const AnnulusGrid& grid);

/// Five-point discrete (d_rho^2 + d_phi^2) psi at interior rows; zero on the
/// boundary rows.
ScalarField grid_laplacian(const ScalarField& psi, const AnnulusGrid& grid);

}  // namespace acc
