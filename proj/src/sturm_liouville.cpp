#include "accflow/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "accflow/errors.hpp"
#include "accflow/linalg.hpp"

namespace acc {

namespace {

void require_dirichlet(const SLProblem& prob) {
  if (prob.boundary.beta != 0.0 || prob.boundary.delta != 0.0)
    throw ValidationError("only Dirichlet boundary data (beta = delta = 0) is supported");
}

std::vector<double> uniform_grid(double a, double b, int intervals) {
  std::vector<double> x(intervals + 1);
  const double h = (b - a) / intervals;
  for (int i = 0; i <= intervals; ++i) x[i] = a + i * h;
  x[intervals] = b;
  return x;
}

/// Symmetric tridiagonal W^{-1/2} A W^{-1/2} for the interior unknowns.
struct ReducedMatrix {
  std::vector<double> d, e, w;
};

ReducedMatrix build_matrix(const SLProblem& prob, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size()) - 2;
  const double h = x[1] - x[0];
  const double h2 = h * h;
  ReducedMatrix m;
  m.d.resize(n);
  m.e.resize(n > 0 ? n - 1 : 0);
  m.w.resize(n);
  std::vector<double> pm(n + 1);  // p at midpoints x_{i+1/2}, i = 0..n
  for (int i = 0; i <= n; ++i) pm[i] = prob.p(0.5 * (x[i] + x[i + 1]));
  for (int k = 0; k < n; ++k) m.w[k] = prob.w(x[k + 1]);
  for (int k = 0; k < n; ++k) {
    const double q = prob.q ? prob.q(x[k + 1]) : 0.0;
    m.d[k] = ((pm[k] + pm[k + 1]) / h2 - q) / m.w[k];
    if (k + 1 < n) m.e[k] = -pm[k + 1] / h2 / std::sqrt(m.w[k] * m.w[k + 1]);
  }
  return m;
}

/// Scaling constant for the modified Pruefer angle so that both terms of
/// the angle equation have comparable size.
double pruefer_scale(const SLProblem& prob, double mu) {
  const double mid = 0.5 * (prob.a + prob.b);
  const double pw = prob.p(mid) * prob.w(mid);
  return std::sqrt(std::max(std::abs(mu), 1.0) * pw) / prob.p(mid);
}

}  // namespace

void SLProblem::validate(int samples) const {
  if (!(a < b)) throw ValidationError("Sturm-Liouville interval needs a < b");
  if (!p || !w) throw ValidationError("Sturm-Liouville problem needs p and w");
  if (boundary.alpha == 0.0 && boundary.beta == 0.0)
    throw ValidationError("boundary data at a must not vanish identically");
  if (boundary.gamma == 0.0 && boundary.delta == 0.0)
    throw ValidationError("boundary data at b must not vanish identically");
  for (int k = 0; k < samples; ++k) {
    const double x = a + (b - a) * k / (samples - 1);
    if (!(p(x) > 0.0)) throw ValidationError("p must be positive on [a, b]");
    if (!(w(x) > 0.0)) throw ValidationError("w must be positive on [a, b]");
  }
}

double pruefer_angle(const SLProblem& prob, double mu, int steps) {
  // tan(theta) = K y / (p y'), so theta' = (K/p) cos^2 + ((q + mu w)/K) sin^2.
  const double K = pruefer_scale(prob, mu);
  auto rhs = [&](double x, double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double q = prob.q ? prob.q(x) : 0.0;
    return K / prob.p(x) * c * c + (q + mu * prob.w(x)) / K * s * s;
  };
  const double h = (prob.b - prob.a) / steps;
  double th = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double x = prob.a + k * h;
    const double k1 = rhs(x, th);
    const double k2 = rhs(x + 0.5 * h, th + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, th + 0.5 * h * k2);
    const double k4 = rhs(x + h, th + h * k3);
    th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return th;
}

double shooting_eigenvalue(const SLProblem& prob, int n, double lo, double hi, int steps) {
  auto f = [&](double mu) { return pruefer_angle(prob, mu, steps) - n * pi; };
  const double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream os;
    os << "shooting bracket for eigenvalue " << n << " does not straddle n*pi: [" << lo << ", "
       << hi << "]";
    throw ConvergenceFailure(os.str());
  }
  boost::uintmax_t iters = 200;
  auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-14 * std::max(1.0, std::abs(u)); };
  const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (br.first + br.second);
}

SLSpectrum eigen_solve(const SLProblem& prob, int n_max, int grid_size, const EigenOptions& opts) {
  prob.validate();
  require_dirichlet(prob);
  if (prob.h) throw ValidationError("eigen_solve expects a homogeneous problem (h absent)");
  if (grid_size < 64) throw ValidationError("eigen_solve needs grid_size >= 64");
  if (n_max < 1) throw ValidationError("eigen_solve needs n_max >= 1");

  int intervals = grid_size;
  for (;;) {
    if (n_max + 1 > intervals - 1)
      throw ValidationError("grid too coarse for the requested number of eigenvalues");
    const auto x = uniform_grid(prob.a, prob.b, intervals);
    const auto mat = build_matrix(prob, x);
    // One extra eigenvalue brackets the last requested one.
    std::vector<double> mus(n_max + 1);
    for (int k = 0; k <= n_max; ++k) mus[k] = bisect_eigenvalue(mat.d, mat.e, k);

    SLSpectrum out;
    out.x = x;
    out.grid_size = intervals;
    out.eigenvalues.assign(mus.begin(), mus.begin() + n_max);

    bool agreed = true;
    if (opts.validate) {
      for (int k = 0; k < n_max; ++k) {
        const double gap_lo = k == 0 ? (mus[1] - mus[0]) : (mus[k] - mus[k - 1]);
        const double lo = mus[k] - 0.5 * gap_lo;
        const double hi = 0.5 * (mus[k] + mus[k + 1]);
        double shoot = 0.0;
        try {
          shoot = shooting_eigenvalue(prob, k + 1, lo, hi, opts.shooting_steps);
        } catch (const ConvergenceFailure&) {
          agreed = false;  // a mode was skipped or misplaced on this grid
          break;
        }
        out.shooting_eigenvalues.push_back(shoot);
        if (std::abs(shoot - mus[k]) > opts.rel_tol * std::max(std::abs(shoot), 1e-300)) {
          agreed = false;
          break;
        }
      }
    }
    if (!agreed) {
      if (intervals * 2 > opts.max_grid_size)
        throw ConvergenceFailure("matrix and shooting eigenvalues still disagree at " +
                                 std::to_string(intervals) + " intervals");
      intervals *= 2;
      continue;
    }

    const double h = x[1] - x[0];
    const int n_int = intervals - 1;
    for (int k = 0; k < n_max; ++k) {
      const auto z = inverse_iteration(mat.d, mat.e, mus[k]);
      std::vector<double> y(intervals + 1, 0.0);
      double norm = 0.0;
      for (int i = 0; i < n_int; ++i) {
        y[i + 1] = z[i] / std::sqrt(mat.w[i]);
        norm += mat.w[i] * y[i + 1] * y[i + 1];
      }
      const double s = (y[1] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm * h);
      for (double& v : y) v *= s;
      out.eigenfunctions.push_back(std::move(y));
    }
    return out;
  }
}

double rayleigh_quotient(const SLProblem& prob, const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 5) throw TooFewSamples("Rayleigh quotient needs >= 5 samples");
  const double h = x[1] - x[0];
  const auto dy = stencil_derivative(x, y, 1, 5);
  std::vector<double> num(x.size()), den(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double q = prob.q ? prob.q(x[i]) : 0.0;
    num[i] = prob.p(x[i]) * dy[i] * dy[i] - q * y[i] * y[i];
    den[i] = prob.w(x[i]) * y[i] * y[i];
  }
  const double denom = simpson_uniform(den, h);
  if (!(denom >= 1e-14)) throw ZeroFunction("weighted norm of the trial function is below 1e-14");
  const std::size_t n = x.size() - 1;
  const double boundary = prob.p(x[0]) * y[0] * dy[0] - prob.p(x[n]) * y[n] * dy[n];
  return (boundary + simpson_uniform(num, h)) / denom;
}

int sign_changes(const std::vector<double>& y) {
  // Skip exact zeros (the Dirichlet end values) and count strict flips.
  int count = 0;
  double last = 0.0;
  for (double v : y) {
    if (v == 0.0) continue;
    if (last != 0.0 && (v > 0.0) != (last > 0.0)) ++count;
    last = v;
  }
  return count;
}

std::vector<double> solve_inhomogeneous(const SLProblem& prob, double mu,
                                        const SLSpectrum& spectrum, int n_terms) {
  require_dirichlet(prob);
  if (n_terms < 0 || n_terms > static_cast<int>(spectrum.eigenvalues.size()))
    throw ValidationError("n_terms exceeds the size of the spectrum");
  const auto& x = spectrum.x;
  const double h = x[1] - x[0];
  std::vector<double> hv(x.size(), 0.0);
  if (prob.h)
    for (std::size_t i = 0; i < x.size(); ++i) hv[i] = prob.h(x[i]);

  std::vector<double> y(x.size(), 0.0);
  for (int n = 0; n < n_terms; ++n) {
    const auto& yn = spectrum.eigenfunctions[n];
    double c = 0.0;  // <h/w, y_n>_w on the grid
    for (std::size_t i = 1; i + 1 < x.size(); ++i) c += hv[i] * yn[i];
    c *= h;
    const double mun = spectrum.eigenvalues[n];
    if (std::abs(mu - mun) < 1e-8 * std::max(std::abs(mun), 1e-300)) {
      std::ostringstream os;
      os << "mu = " << mu << " is within 1e-8 of eigenvalue " << n + 1 << " (" << mun << "); ";
      if (std::abs(c) > 1e-10)
        os << "case (a): forcing not orthogonal to the eigenfunction, no solution";
      else
        os << "case (b): forcing orthogonal to the eigenfunction, solutions not unique";
      throw ResonantEigenvalue(os.str());
    }
    const double bn = c / (mu - mun);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += bn * yn[i];
  }
  return y;
}

double inhomogeneous_residual(const SLProblem& prob, double mu, const std::vector<double>& x,
                              const std::vector<double>& y) {
  const double h = x[1] - x[0];
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double pp = prob.p(0.5 * (x[i] + x[i + 1]));
    const double pm = prob.p(0.5 * (x[i] + x[i - 1]));
    const double q = prob.q ? prob.q(x[i]) : 0.0;
    const double w = prob.w(x[i]);
    const double hv = prob.h ? prob.h(x[i]) : 0.0;
    const double r = (pp * (y[i + 1] - y[i]) - pm * (y[i] - y[i - 1])) / (h * h) + q * y[i] +
                     mu * w * y[i] - hv;
    s += r * r / w;
  }
  return std::sqrt(s * h);
}

HomogenizedProblem homogenize_boundary(const BandConfig& cfg) {
  if (!(cfg.theta1 < cfg.theta2)) throw ValidationError("homogenize_boundary needs theta1 < theta2");
  HomogenizedProblem out;
  const double dth = cfg.theta2 - cfg.theta1;
  const double a = (cfg.psi2 - cfg.psi1) / dth;
  const double b = (cfg.theta2 * cfg.psi1 - cfg.theta1 * cfg.psi2) / dth;
  out.shift_a = a;
  out.shift_b = b;
  out.mu = cfg.lambda;
  const double lam = cfg.lambda, ups = cfg.upsilon, om = cfg.omega;
  SLProblem& p = out.problem;
  p.a = cfg.theta1;
  p.b = cfg.theta2;
  p.p = [](double th) { return std::cos(th); };
  p.w = [](double th) { return std::cos(th); };
  p.q = [](double) { return 0.0; };
  p.h = [=](double th) {
    return a * std::sin(th) + (ups - lam * (a * th + b)) * std::cos(th) - om * std::sin(2.0 * th);
  };
  return out;
}

}  // namespace acc
