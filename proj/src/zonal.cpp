#include "accflow/zonal.hpp"

#include <algorithm>
#include <cmath>

#include "accflow/errors.hpp"
#include "accflow/linalg.hpp"
#include "accflow/sturm_liouville.hpp"

namespace acc {

std::string to_string(ZonalMethod m) {
  switch (m) {
    case ZonalMethod::closed_form: return "closed_form";
    case ZonalMethod::finite_difference: return "finite_difference";
    case ZonalMethod::picard: return "picard";
    case ZonalMethod::sl_expansion: return "sl_expansion";
  }
  return "unknown";
}

ZonalMethod zonal_method_from_string(const std::string& s) {
  if (s == "closed_form") return ZonalMethod::closed_form;
  if (s == "finite_difference" || s == "fd") return ZonalMethod::finite_difference;
  if (s == "picard") return ZonalMethod::picard;
  if (s == "sl_expansion") return ZonalMethod::sl_expansion;
  throw ValidationError("unknown zonal method '" + s + "'");
}

namespace {

std::vector<double> uniform_thetas(const BandConfig& cfg, int n) {
  if (n < 2) throw ValidationError("zonal solvers need at least 2 intervals");
  std::vector<double> th(n + 1);
  const double h = (cfg.theta2 - cfg.theta1) / n;
  for (int k = 0; k <= n; ++k) th[k] = cfg.theta1 + k * h;
  th[n] = cfg.theta2;
  return th;
}

ZonalProfile make_profile(const BandConfig& cfg, std::vector<double> th, std::vector<double> psi,
                          ZonalMethod m) {
  ZonalProfile p;
  p.thetas = std::move(th);
  p.psi = std::move(psi);
  p.psi.front() = cfg.psi1;
  p.psi.back() = cfg.psi2;
  p.u_scale = cfg.u_scale;
  p.method = m;
  return velocity_profile(std::move(p));
}

}  // namespace

double zonal_eta(double theta) { return std::atanh(std::sin(theta)); }

ClosedFormLambda0::ClosedFormLambda0(const BandConfig& cfg)
    : upsilon_(cfg.upsilon), omega_(cfg.omega) {
  const double z1 = particular(cfg.theta1), z2 = particular(cfg.theta2);
  const double e1 = zonal_eta(cfg.theta1), e2 = zonal_eta(cfg.theta2);
  c1_ = ((cfg.psi2 - z2) - (cfg.psi1 - z1)) / (e2 - e1);
  c2_ = cfg.psi1 - z1 - c1_ * e1;
}

double ClosedFormLambda0::particular(double th) const {
  const double s = std::sin(th);
  return -upsilon_ * std::log(std::cos(th)) + omega_ * s - 0.5 * omega_ * std::atanh(s);
}

double ClosedFormLambda0::psi(double th) const { return particular(th) + c1_ * zonal_eta(th) + c2_; }

double ClosedFormLambda0::dpsi(double th) const {
  const double c = std::cos(th);
  return upsilon_ * std::tan(th) + omega_ * c - 0.5 * omega_ / c + c1_ / c;
}

double ClosedFormLambda0::d2psi(double th) const {
  const double c = std::cos(th), s = std::sin(th);
  const double c2 = c * c;
  return upsilon_ / c2 - omega_ * s - 0.5 * omega_ * s / c2 + c1_ * s / c2;
}

double ClosedFormLambda0::residual(double th) const {
  const double c = std::cos(th), s = std::sin(th);
  return d2psi(th) * c - dpsi(th) * s - (upsilon_ * c - omega_ * std::sin(2.0 * th));
}

ZonalProfile solve_closed_form_lambda0(const BandConfig& cfg, int n) {
  cfg.validate();
  if (cfg.lambda != 0.0) throw LambdaNotZero("closed form requires lambda = 0");
  const ClosedFormLambda0 cf(cfg);
  auto th = uniform_thetas(cfg, n);
  std::vector<double> psi(th.size());
  for (std::size_t k = 0; k < th.size(); ++k) psi[k] = cf.psi(th[k]);
  return make_profile(cfg, std::move(th), std::move(psi), ZonalMethod::closed_form);
}

ZonalProfile solve_fd(const BandConfig& cfg, int n) {
  cfg.validate();
  auto th = uniform_thetas(cfg, n);
  const double h = th[1] - th[0];
  const double h2 = h * h;
  const int m = n - 1;
  std::vector<double> sub(m), diag(m), sup(m), rhs(m);
  double scale = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double pp = std::cos(th[k] + 0.5 * h);
    const double pm = std::cos(th[k] - 0.5 * h);
    const double c = std::cos(th[k]);
    sub[k - 1] = pm / h2;
    sup[k - 1] = pp / h2;
    diag[k - 1] = -(pp + pm) / h2 + cfg.lambda * c;
    rhs[k - 1] = cfg.upsilon * c - cfg.omega * std::sin(2.0 * th[k]);
    scale = std::max(scale, (pp + pm) / h2);
  }
  rhs[0] -= sub[0] * cfg.psi1;
  rhs[m - 1] -= sup[m - 1] * cfg.psi2;
  const auto sol = solve_tridiagonal(sub, diag, sup, rhs);
  // Pivots of a discrete Dirichlet operator scale like 1/h^2 away from the
  // spectrum and like h^0 near an eigenvalue.
  if (!(sol.min_abs_pivot > 1e-10 * scale))
    throw NearEigenvalue("tridiagonal pivot " + std::to_string(sol.min_abs_pivot) +
                         " is too small; lambda is near an eigenvalue");
  std::vector<double> psi(n + 1);
  psi[0] = cfg.psi1;
  psi[n] = cfg.psi2;
  for (int k = 1; k <= m; ++k) psi[k] = sol.x[k - 1];
  return make_profile(cfg, std::move(th), std::move(psi), ZonalMethod::finite_difference);
}

ZonalProfile solve_picard(const BandConfig& cfg, int n, double tol, int max_iter,
                          PicardReport* report) {
  cfg.validate();
  if (n < 4) throw ValidationError("solve_picard needs at least 4 intervals");
  const double r1 = cfg.r1(), r2 = cfg.r2();
  const double t1 = -std::log(r2), t2 = -std::log(r1);
  const double len = t2 - t1;
  const double lam = cfg.lambda;
  PicardReport rep;
  rep.contraction_estimate = 2.0 * std::abs(lam) * len * len;
  if (lam != 0.0 && len > 1.0 / std::sqrt(2.0 * std::abs(lam)))
    throw ContractionViolated("r2/r1 = " + std::to_string(r2 / r1) + " exceeds exp((2|lambda|)^-1/2) = " +
                              std::to_string(std::exp(1.0 / std::sqrt(2.0 * std::abs(lam)))));

  const double dt = len / n;
  std::vector<double> tau(n + 1), sech2(n + 1), forcing(n + 1);
  for (int k = 0; k <= n; ++k) {
    tau[k] = k * dt;
    const double t = t1 + tau[k];
    const double ch = std::cosh(t);
    sech2[k] = 1.0 / (ch * ch);
    forcing[k] = cfg.upsilon * sech2[k] + 2.0 * cfg.omega * std::sinh(t) / (ch * ch * ch);
  }

  // Start from the straight line joining the boundary values.
  std::vector<double> u(n + 1), next(n + 1), g(n + 1);
  for (int k = 0; k <= n; ++k) u[k] = cfg.psi2 + (cfg.psi1 - cfg.psi2) * tau[k] / len;

  auto apply = [&]() {
    for (int k = 0; k <= n; ++k) g[k] = forcing[k] - lam * u[k] * sech2[k];
    // I(t_k) = int_{t1}^{t_k} (t_k - s) g(s) ds = tau_k G0 - G1 by cumulative trapezoid.
    double G0 = 0.0, G1 = 0.0;
    std::vector<double> I(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
      G0 += 0.5 * dt * (g[k - 1] + g[k]);
      G1 += 0.5 * dt * (tau[k - 1] * g[k - 1] + tau[k] * g[k]);
      I[k] = tau[k] * G0 - G1;
    }
    const double mu = (cfg.psi1 - cfg.psi2 - I[n]) / len;
    double inc = 0.0;
    for (int k = 0; k <= n; ++k) {
      next[k] = cfg.psi2 + mu * tau[k] + I[k];
      inc = std::max(inc, std::abs(next[k] - u[k]));
    }
    u.swap(next);
    return inc;
  };

  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    const double inc = apply();
    rep.iterations = it;
    if (!rep.increments.empty() && rep.increments.back() > 0.0)
      rep.ratios.push_back(inc / rep.increments.back());
    rep.increments.push_back(inc);
    // For lambda = 0 the map is affine in the data only: one application is exact.
    if (lam == 0.0 || inc <= tol) {
      converged = true;
      break;
    }
  }
  if (report) *report = rep;
  if (!converged)
    throw MaxIterExceeded("Picard iteration did not reach tol " + std::to_string(tol) + " in " +
                          std::to_string(max_iter) + " iterations");

  // t ascending means theta descending; reverse into ascending latitude.
  std::vector<double> th(n + 1), psi(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = t1 + tau[k];
    th[n - k] = 2.0 * std::atan(std::exp(-t)) - pi / 2;
    psi[n - k] = u[k];
  }
  th.front() = cfg.theta1;
  th.back() = cfg.theta2;
  return make_profile(cfg, std::move(th), std::move(psi), ZonalMethod::picard);
}

ZonalProfile solve_sl_expansion(const BandConfig& cfg, int n, int n_terms) {
  cfg.validate();
  const auto hp = homogenize_boundary(cfg);
  SLProblem homog = hp.problem;
  homog.h = nullptr;
  EigenOptions opts;
  opts.validate = false;
  const auto spec = eigen_solve(homog, n_terms, n, opts);
  const auto y = solve_inhomogeneous(hp.problem, hp.mu, spec, n_terms);
  std::vector<double> psi(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) psi[k] = y[k] + hp.shift(spec.x[k]);
  return make_profile(cfg, spec.x, std::move(psi), ZonalMethod::sl_expansion);
}

ZonalProfile velocity_profile(ZonalProfile profile) {
  const std::size_t n = profile.psi.size();
  if (n < 5 || profile.thetas.size() != n)
    throw TooFewSamples("velocity_profile needs at least 5 samples");
  auto d = stencil_derivative(profile.thetas, profile.psi, 1, 5);
  profile.u.resize(n);
  profile.u_dimensional.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    profile.u[k] = -d[k];
    profile.u_dimensional[k] = profile.u[k] * profile.u_scale;
  }
  return profile;
}

double interpolate_profile(const std::vector<double>& th, const std::vector<double>& v,
                           double theta) {
  const int n = static_cast<int>(th.size());
  if (n < 4) throw TooFewSamples("interpolation needs at least 4 samples");
  const int k = static_cast<int>(std::upper_bound(th.begin(), th.end(), theta) - th.begin()) - 1;
  const int start = std::clamp(k - 1, 0, n - 4);
  double s = 0.0;
  for (int a = start; a < start + 4; ++a) {
    double l = 1.0;
    for (int b = start; b < start + 4; ++b)
      if (b != a) l *= (theta - th[b]) / (th[a] - th[b]);
    s += l * v[a];
  }
  return s;
}

std::vector<double> zonal_residual(const BandConfig& cfg, const ZonalProfile& p) {
  const auto& th = p.thetas;
  const std::size_t n = th.size();
  std::vector<double> r;
  if (n < 3) return r;
  const double h = th[1] - th[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double pp = std::cos(th[k] + 0.5 * h), pm = std::cos(th[k] - 0.5 * h);
    const double c = std::cos(th[k]);
    r.push_back((pp * (p.psi[k + 1] - p.psi[k]) - pm * (p.psi[k] - p.psi[k - 1])) / (h * h) +
                cfg.lambda * p.psi[k] * c - cfg.upsilon * c + cfg.omega * std::sin(2.0 * th[k]));
  }
  return r;
}

JetSummary jet_summary(const ZonalProfile& p) {
  JetSummary s;
  const auto& u = p.u_dimensional;
  s.jet_speed = std::min(std::abs(u.front()), std::abs(u.back()));
  const double a = p.thetas.front(), b = p.thetas.back();
  const double lo = a + 0.25 * (b - a), hi = b - 0.25 * (b - a);
  for (std::size_t k = 0; k < u.size(); ++k)
    if (p.thetas[k] >= lo && p.thetas[k] <= hi) s.interior_speed = std::max(s.interior_speed, std::abs(u[k]));
  s.ratio = s.interior_speed > 0.0 ? s.jet_speed / s.interior_speed : INFINITY;
  return s;
}

}  // namespace acc
