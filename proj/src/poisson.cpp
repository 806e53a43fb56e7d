#include "accflow/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include "accflow/errors.hpp"

namespace acc {

namespace {
// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct PoissonSolver::Impl {
  int n_phi = 0;
  int n_modes = 0;
  int n_int = 0;  // interior rows
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  // Per-mode Thomas factors: inv_pivot[m * n_int + k], upper[m * n_int + k].
  std::vector<double> inv_pivot, upper;
  double inv_h2 = 0.0;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

PoissonSolver::PoissonSolver(const AnnulusGrid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.n_phi = grid.n_phi();
  im.n_modes = im.n_phi / 2 + 1;
  im.n_int = grid.n_rho() - 2;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<double> rbuf(im.n_phi);
    std::vector<fftw_complex> cbuf(im.n_modes);
    // ESTIMATE keeps the plan, and therefore the bits, identical across runs.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    im.forward = fftw_plan_dft_r2c_1d(im.n_phi, rbuf.data(), cbuf.data(), flags);
    im.backward = fftw_plan_dft_c2r_1d(im.n_phi, cbuf.data(), rbuf.data(), flags | FFTW_DESTROY_INPUT);
  }
  if (!im.forward || !im.backward) throw NumericalError("FFTW planning failed");

  const double h2 = grid.d_rho() * grid.d_rho();
  im.inv_h2 = 1.0 / h2;
  const double dphi = grid.d_phi();
  im.inv_pivot.resize(static_cast<std::size_t>(im.n_modes) * im.n_int);
  im.upper.resize(im.inv_pivot.size());
  for (int m = 0; m < im.n_modes; ++m) {
    const double s = std::sin(0.5 * m * dphi);
    const double kappa = 4.0 * s * s / (dphi * dphi);
    const double off = 1.0 / h2;
    const double diag = -2.0 / h2 - kappa;
    double c_prev = 0.0;
    for (int k = 0; k < im.n_int; ++k) {
      const double piv = diag - off * c_prev;
      if (!(std::abs(piv) > 1e-300)) throw SingularMode("zero pivot in radial solve");
      const std::size_t idx = static_cast<std::size_t>(m) * im.n_int + k;
      im.inv_pivot[idx] = 1.0 / piv;
      c_prev = off / piv;
      im.upper[idx] = c_prev;
    }
  }
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

ScalarField PoissonSolver::solve_grid(const ScalarField& g) const {
  require_match(g, grid_, "PoissonSolver");
  const Impl& im = *impl_;
  const int np = im.n_phi, nm = im.n_modes, ni = im.n_int;
  ScalarField psi(grid_);
  if (ni <= 0) return psi;

  std::vector<std::complex<double>> spec(static_cast<std::size_t>(ni) * nm);
  std::vector<double> row(np);
  for (int k = 0; k < ni; ++k) {
    const double* src = g.row(k + 1);
    std::copy(src, src + np, row.begin());
    fftw_execute_dft_r2c(im.forward, row.data(),
                         reinterpret_cast<fftw_complex*>(spec.data() + static_cast<std::size_t>(k) * nm));
  }
  const double off = im.inv_h2;
  for (int m = 0; m < nm; ++m) {
    const double* ip = im.inv_pivot.data() + static_cast<std::size_t>(m) * ni;
    const double* up = im.upper.data() + static_cast<std::size_t>(m) * ni;
    // forward sweep
    std::complex<double> prev(0.0, 0.0);
    for (int k = 0; k < ni; ++k) {
      auto& v = spec[static_cast<std::size_t>(k) * nm + m];
      v = (v - off * prev) * ip[k];
      prev = v;
    }
    // back substitution
    for (int k = ni - 2; k >= 0; --k) {
      auto& v = spec[static_cast<std::size_t>(k) * nm + m];
      v -= up[k] * spec[static_cast<std::size_t>(k + 1) * nm + m];
    }
  }
  const double norm = 1.0 / np;
  for (int k = 0; k < ni; ++k) {
    fftw_execute_dft_c2r(im.backward,
                         reinterpret_cast<fftw_complex*>(spec.data() + static_cast<std::size_t>(k) * nm),
                         row.data());
    double* dst = psi.row(k + 1);
    for (int j = 0; j < np; ++j) dst[j] = row[j] * norm;
  }
  return psi;
}

ScalarField PoissonSolver::solve(const ScalarField& f) const {
  require_match(f, grid_, "PoissonSolver");
  ScalarField g(grid_);
  for (int i = 1; i + 1 < grid_.n_rho(); ++i) {
    const double r2 = grid_.r(i) * grid_.r(i);
    for (int j = 0; j < grid_.n_phi(); ++j) g(i, j) = -r2 * f(i, j);
  }
  return solve_grid(g);
}

ScalarField poisson_solve(const ScalarField& f, const AnnulusGrid& grid) {
  return PoissonSolver(grid).solve(f);
}

ScalarField grid_laplacian(const ScalarField& psi, const AnnulusGrid& g) {
  require_match(psi, g, "grid_laplacian");
  ScalarField out(g);
  const int np = g.n_phi();
  const double ih2 = 1.0 / (g.d_rho() * g.d_rho());
  const double ip2 = 1.0 / (g.d_phi() * g.d_phi());
  for (int i = 1; i + 1 < g.n_rho(); ++i)
    for (int j = 0; j < np; ++j) {
      const int jp = j + 1 == np ? 0 : j + 1, jm = j == 0 ? np - 1 : j - 1;
      out(i, j) = (psi(i + 1, j) - 2.0 * psi(i, j) + psi(i - 1, j)) * ih2 +
                  (psi(i, jp) - 2.0 * psi(i, j) + psi(i, jm)) * ip2;
    }
  return out;
}

}  // namespace acc
