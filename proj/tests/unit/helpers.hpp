#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "accflow/geometry.hpp"

namespace testutil {

/// Moderate scenario used by the dynamics tests: the planetary term is
/// balanced at mid-band and the boundary values differ by one unit.
inline acc::BandConfig gentle(double lambda) {
  acc::BandConfig c;
  c.lambda = lambda;
  c.upsilon = 2.0 * c.omega * std::sin(0.5 * (c.theta1 + c.theta2));
  c.psi1 = -0.5;
  c.psi2 = 0.5;
  return c;
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("accflow_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testutil
