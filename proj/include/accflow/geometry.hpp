#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace acc {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

/// Physical parameters of one circumpolar-band scenario.
///
/// Latitudes are in radians. The defaults reproduce the boundary-jet profile
/// used for the dimensional velocity figure (fronts near 60S and 50S).
struct BandConfig {
  double theta1 = deg_to_rad(-60.0);
  double theta2 = deg_to_rad(-50.0);
  double psi1 = -5.0;
  double psi2 = -25.0;
  double omega = 4650.0;
  double lambda = -3000.0;
  double upsilon = 30000.0;
  double u_scale = 0.1;  ///< m/s per nondimensional velocity unit

  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  double r1() const;  ///< projected radius of the southern boundary
  double r2() const;  ///< projected radius of the northern boundary
};

struct SpherePoint {
  double phi = 0.0;    ///< longitude in [0, 2pi)
  double theta = 0.0;  ///< latitude in (-pi/2, pi/2)
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Planar velocity (U, V) in Cartesian components.
struct PlaneVector {
  double U = 0.0;
  double V = 0.0;
};

/// Spherical velocity: u eastward, v northward.
struct SphereVector {
  double u = 0.0;
  double v = 0.0;
};

/// Stereographic projection from the north pole onto the equatorial plane.
PlanePoint project(const SpherePoint& p);

/// Inverse projection. Throws OriginUndefined at (0, 0).
SpherePoint unproject(const PlanePoint& q);

/// Radius of the image of the circle of latitude theta.
double radius_of_latitude(double theta);
/// Latitude whose image is the circle of radius r.
double latitude_of_radius(double r);

/// Conformal factor (1 + x^2 + y^2)^2 / 4.
double alpha(const PlanePoint& q);
double alpha_of_radius(double r);

/// Planetary term 2 omega (1 - r^2)/(1 + r^2), equal to -2 omega sin(theta).
double beta(const PlanePoint& q, double omega);
double beta_of_radius(double r, double omega);

PlaneVector vector_to_plane(double u, double v, const SpherePoint& p);
SphereVector vector_to_sphere(double U, double V, const PlanePoint& q);

/// Periodic grid on the projected annulus, uniform in rho = log r and phi.
///
/// Node (i, j) sits at rho_i = log r1 + i d_rho for i = 0..n_rho-1 (both
/// boundary circles included) and phi_j = j d_phi for j = 0..n_phi-1.
class AnnulusGrid {
public:
  AnnulusGrid(double r1, double r2, int n_rho, int n_phi);
  static AnnulusGrid from_band(const BandConfig& cfg, int n_rho, int n_phi);

  int n_rho() const { return n_rho_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_rho_) * n_phi_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi_ + j; }

  double rho0() const { return rho0_; }
  double rho_end() const { return rho0_ + (n_rho_ - 1) * d_rho_; }
  double rho_length() const { return rho_end() - rho0_; }
  double d_rho() const { return d_rho_; }
  double d_phi() const { return d_phi_; }

  double rho(int i) const { return rho0_ + i * d_rho_; }
  double phi(int j) const { return j * d_phi_; }
  double r(int i) const { return r_[i]; }
  double theta(int i) const { return theta_[i]; }
  double sin_theta(int i) const { return sin_[i]; }
  double cos_theta(int i) const { return cos_[i]; }
  double alpha(int i) const { return alpha_[i]; }

  /// Area weight m = r^2/alpha so that d(sigma) = m d(rho) d(phi).
  double metric(int i) const { return metric_[i]; }

  /// Trapezoid weight in rho (1/2 on the boundary rows, 1 elsewhere).
  double trap_weight(int i) const { return (i == 0 || i == n_rho_ - 1) ? 0.5 : 1.0; }

  bool same_shape(const AnnulusGrid& other) const;
  bool operator==(const AnnulusGrid& other) const;

private:
  int n_rho_;
  int n_phi_;
  double rho0_;
  double d_rho_;
  double d_phi_;
  std::vector<double> r_, theta_, sin_, cos_, alpha_, metric_;
};

/// Scalar data at the nodes of an AnnulusGrid, row-major in (rho, phi).
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(int n_rho, int n_phi, double value = 0.0)
      : n_rho_(n_rho), n_phi_(n_phi), data_(static_cast<std::size_t>(n_rho) * n_phi, value) {}
  explicit ScalarField(const AnnulusGrid& g, double value = 0.0)
      : ScalarField(g.n_rho(), g.n_phi(), value) {}

  int n_rho() const { return n_rho_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_phi_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_phi_ + j]; }

  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * n_phi_; }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_phi_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool matches(const AnnulusGrid& g) const { return n_rho_ == g.n_rho() && n_phi_ == g.n_phi(); }
  bool matches(const ScalarField& f) const { return n_rho_ == f.n_rho_ && n_phi_ == f.n_phi_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  double max_abs() const;
  double min() const;
  double max() const;

private:
  int n_rho_ = 0;
  int n_phi_ = 0;
  std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Planar velocity at grid nodes in polar components: radial and azimuthal.
struct VectorField {
  ScalarField radial;
  ScalarField azimuthal;

  VectorField() = default;
  explicit VectorField(const AnnulusGrid& g) : radial(g), azimuthal(g) {}

  /// Cartesian (U, V) at node (i, j) for a grid g.
  PlaneVector cartesian(const AnnulusGrid& g, int i, int j) const;
};

/// Throws GridMismatch unless f has the node layout of g.
void require_match(const ScalarField& f, const AnnulusGrid& g, const char* what);

/// Quadrature of f over the spherical band, d(sigma) = dx dy / alpha.
///
/// Trapezoid in rho including the boundary rows, periodic rectangle rule in phi.
double band_integral(const ScalarField& f, const AnnulusGrid& g);

/// Sample a function of (rho index, phi index) onto the grid.
template <class F>
ScalarField sample(const AnnulusGrid& g, F&& f) {
  ScalarField out(g);
  for (int i = 0; i < g.n_rho(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) out(i, j) = f(i, j);
  return out;
}

}  // namespace acc
