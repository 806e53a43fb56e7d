#include "accflow/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace acc {

namespace {

/// Lagrange weights for nodes 0..3 at local coordinate x (node k sits at k).
inline void lagrange4(double x, double w[4]) {
  const double a = x, b = x - 1.0, c = x - 2.0, d = x - 3.0;
  w[0] = -b * c * d / 6.0;
  w[1] = a * c * d / 2.0;
  w[2] = -a * b * d / 2.0;
  w[3] = a * b * c / 6.0;
}

}  // namespace

BicubicStencil make_stencil(const AnnulusGrid& g, double rho, double phi) {
  BicubicStencil s;
  const int n = g.n_rho();
  const double sr = std::clamp((rho - g.rho0()) / g.d_rho(), 0.0, static_cast<double>(n - 1));
  const int kr = std::min(static_cast<int>(std::floor(sr)), n - 2);
  s.i0 = std::clamp(kr - 1, 0, n - 4);
  lagrange4(sr - s.i0, s.wr);

  const int np = g.n_phi();
  const double sp = phi / g.d_phi();
  const double fl = std::floor(sp);
  const int kp = static_cast<int>(fl);
  lagrange4(sp - fl + 1.0, s.wp);
  for (int a = 0; a < 4; ++a) {
    int j = (kp - 1 + a) % np;
    if (j < 0) j += np;
    s.j[a] = j;
  }
  return s;
}

double apply_stencil(const BicubicStencil& s, const ScalarField& f) {
  double total = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double* row = f.row(s.i0 + a);
    const double v = s.wp[0] * row[s.j[0]] + s.wp[1] * row[s.j[1]] + s.wp[2] * row[s.j[2]] +
                     s.wp[3] * row[s.j[3]];
    total += s.wr[a] * v;
  }
  return total;
}

double apply_stencil_clipped(const BicubicStencil& s, const ScalarField& f) {
  double total = 0.0;
  double lo = INFINITY, hi = -INFINITY;
  for (int a = 0; a < 4; ++a) {
    const double* row = f.row(s.i0 + a);
    double v = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double x = row[s.j[b]];
      v += s.wp[b] * x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    total += s.wr[a] * v;
  }
  return std::clamp(total, lo, hi);
}

double interpolate(const ScalarField& f, const AnnulusGrid& g, double rho, double phi, bool clip) {
  const auto s = make_stencil(g, rho, phi);
  return clip ? apply_stencil_clipped(s, f) : apply_stencil(s, f);
}

}  // namespace acc
