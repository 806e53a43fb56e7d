#include "accflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "accflow/errors.hpp"

namespace acc {

void BandConfig::validate() const {
  if (!(theta1 > -pi / 2 && theta1 < theta2 && theta2 < 0.0))
    throw ValidationError("band latitudes must satisfy -pi/2 < theta1 < theta2 < 0");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  for (double v : {psi1, psi2, lambda, upsilon, u_scale})
    if (!std::isfinite(v)) throw ValidationError("band parameters must be finite");
  const double a = r1(), b = r2();
  if (!(0.0 < a && a < b && b < 1.0))
    throw ValidationError("projected radii must satisfy 0 < r1 < r2 < 1");
}

double BandConfig::r1() const { return radius_of_latitude(theta1); }
double BandConfig::r2() const { return radius_of_latitude(theta2); }

PlanePoint project(const SpherePoint& p) {
  const double k = std::cos(p.theta) / (1.0 - std::sin(p.theta));
  return {k * std::cos(p.phi), k * std::sin(p.phi)};
}

SpherePoint unproject(const PlanePoint& q) {
  const double r2 = q.x * q.x + q.y * q.y;
  if (r2 == 0.0) throw OriginUndefined("longitude is undefined at the projection origin");
  const double r = std::sqrt(r2);
  double phi = std::atan2(q.y, q.x);
  if (phi < 0.0) phi += two_pi;
  if (phi >= two_pi) phi -= two_pi;
  // atan2 form avoids the loss of precision of asin near the poles
  return {phi, std::atan2(-(1.0 - r2), 2.0 * r)};
}

double radius_of_latitude(double theta) { return std::cos(theta) / (1.0 - std::sin(theta)); }

double latitude_of_radius(double r) { return 2.0 * std::atan(r) - pi / 2; }

double alpha_of_radius(double r) {
  const double s = 1.0 + r * r;
  return 0.25 * s * s;
}

double alpha(const PlanePoint& q) { return alpha_of_radius(std::hypot(q.x, q.y)); }

double beta_of_radius(double r, double omega) {
  const double r2 = r * r;
  return 2.0 * omega * (1.0 - r2) / (1.0 + r2);
}

double beta(const PlanePoint& q, double omega) {
  const double r2 = q.x * q.x + q.y * q.y;
  return 2.0 * omega * (1.0 - r2) / (1.0 + r2);
}

PlaneVector vector_to_plane(double u, double v, const SpherePoint& p) {
  const double s = 1.0 - std::sin(p.theta);
  const double c = std::cos(p.phi), sn = std::sin(p.phi);
  return {s * (v * c - u * sn), s * (u * c + v * sn)};
}

SphereVector vector_to_sphere(double U, double V, const PlanePoint& q) {
  const double r2 = q.x * q.x + q.y * q.y;
  if (r2 == 0.0) throw OriginUndefined("direction is undefined at the projection origin");
  const double r = std::sqrt(r2);
  const double c = q.x / r, sn = q.y / r;
  // 1 - sin(theta) = 2/(1 + r^2)
  const double inv_s = 0.5 * (1.0 + r2);
  return {inv_s * (V * c - U * sn), inv_s * (U * c + V * sn)};
}

AnnulusGrid::AnnulusGrid(double r1, double r2, int n_rho, int n_phi)
    : n_rho_(n_rho), n_phi_(n_phi) {
  if (n_rho < 8 || n_phi < 8) throw ValidationError("grid needs n_rho >= 8 and n_phi >= 8");
  if (!(0.0 < r1 && r1 < r2)) throw ValidationError("grid radii must satisfy 0 < r1 < r2");
  rho0_ = std::log(r1);
  d_rho_ = (std::log(r2) - rho0_) / (n_rho - 1);
  d_phi_ = two_pi / n_phi;
  r_.resize(n_rho);
  theta_.resize(n_rho);
  sin_.resize(n_rho);
  cos_.resize(n_rho);
  alpha_.resize(n_rho);
  metric_.resize(n_rho);
  for (int i = 0; i < n_rho; ++i) {
    const double r = std::exp(rho(i));
    const double rr = r * r;
    r_[i] = r;
    theta_[i] = latitude_of_radius(r);
    sin_[i] = -(1.0 - rr) / (1.0 + rr);
    cos_[i] = 2.0 * r / (1.0 + rr);
    alpha_[i] = alpha_of_radius(r);
    metric_[i] = rr / alpha_[i];
  }
}

AnnulusGrid AnnulusGrid::from_band(const BandConfig& cfg, int n_rho, int n_phi) {
  cfg.validate();
  return AnnulusGrid(cfg.r1(), cfg.r2(), n_rho, n_phi);
}

bool AnnulusGrid::same_shape(const AnnulusGrid& o) const {
  return n_rho_ == o.n_rho_ && n_phi_ == o.n_phi_;
}

bool AnnulusGrid::operator==(const AnnulusGrid& o) const {
  return same_shape(o) && rho0_ == o.rho0_ && d_rho_ == o.d_rho_;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!matches(o)) throw GridMismatch("field shapes differ in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!matches(o)) throw GridMismatch("field shapes differ in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

PlaneVector VectorField::cartesian(const AnnulusGrid& g, int i, int j) const {
  const double c = std::cos(g.phi(j)), s = std::sin(g.phi(j));
  const double ur = radial(i, j), up = azimuthal(i, j);
  return {ur * c - up * s, ur * s + up * c};
}

void require_match(const ScalarField& f, const AnnulusGrid& g, const char* what) {
  if (!f.matches(g))
    throw GridMismatch(std::string(what) + ": field is " + std::to_string(f.n_rho()) + "x" +
                       std::to_string(f.n_phi()) + ", grid is " + std::to_string(g.n_rho()) +
                       "x" + std::to_string(g.n_phi()));
}

double band_integral(const ScalarField& f, const AnnulusGrid& g) {
  require_match(f, g, "band_integral");
  double total = 0.0;
  for (int i = 0; i < g.n_rho(); ++i) {
    const double* row = f.row(i);
    double s = 0.0;
    for (int j = 0; j < g.n_phi(); ++j) s += row[j];
    total += g.trap_weight(i) * g.metric(i) * s;
  }
  return total * g.d_rho() * g.d_phi();
}

}  // namespace acc
