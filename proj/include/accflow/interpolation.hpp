#pragma once

#include "accflow/geometry.hpp"

namespace acc {

/// Four-point Lagrange stencil in both grid directions at one location.
///
/// In rho the stencil is shifted inward next to the boundary circles, so no
/// ghost rows are needed; in phi it wraps periodically.
struct BicubicStencil {
  int i0 = 0;
  int j[4] = {0, 0, 0, 0};
  double wr[4] = {0, 0, 0, 0};
  double wp[4] = {0, 0, 0, 0};
};

/// Builds the stencil at (rho, phi). rho must already lie within the grid.
BicubicStencil make_stencil(const AnnulusGrid& g, double rho, double phi);

/// Weighted sum over the 4x4 stencil.
double apply_stencil(const BicubicStencil& s, const ScalarField& f);

/// Same sum clipped to the min/max of the 16 samples it uses.
double apply_stencil_clipped(const BicubicStencil& s, const ScalarField& f);

/// Bicubic value of f at (rho, phi), with rho clamped into the grid.
double interpolate(const ScalarField& f, const AnnulusGrid& g, double rho, double phi,
                   bool clip = false);

}  // namespace acc
