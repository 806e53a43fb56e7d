#include "accflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accflow/errors.hpp"

namespace acc {

TridiagonalSolution solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  TridiagonalSolution out;
  out.x.assign(n, 0.0);
  if (n == 0) return out;
  std::vector<double> c(n), d(n);
  double piv = diag[0];
  out.min_abs_pivot = std::abs(piv);
  c[0] = n > 1 ? sup[0] / piv : 0.0;
  d[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    out.min_abs_pivot = std::min(out.min_abs_pivot, std::abs(piv));
    c[i] = i + 1 < n ? sup[i] / piv : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
  }
  out.x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) out.x[i] = d[i] - c[i] * out.x[i + 1];
  return out;
}

int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  // LDL^T pivots of (T - x I); negative pivots count eigenvalues below x.
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(std::span<const double> d, std::span<const double> e) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(e[i - 1]);
    if (i + 1 < n) rad += std::abs(e[i]);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  return {lo, hi};
}

double bisect_eigenvalue(std::span<const double> d, std::span<const double> e, int k) {
  auto [lo, hi] = gershgorin_bounds(d, e);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * scale;
  hi += 1e-12 * scale;
  // Invariant: count(lo) <= k < count(hi).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(d, e, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(std::span<const double> d, std::span<const double> e,
                                      double eigenvalue) {
  const std::size_t n = d.size();
  const auto [lo, hi] = gershgorin_bounds(d, e);
  const double shift =
      eigenvalue + 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  std::vector<double> sub(n, 0.0), dg(n), sup(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    dg[i] = d[i] - shift;
    if (i > 0) sub[i] = e[i - 1];
    if (i + 1 < n) sup[i] = e[i];
  }
  // Deterministic start vector with components along every eigenvector.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + 3.7 * static_cast<double>(i));
  for (int it = 0; it < 4; ++it) {
    auto sol = solve_tridiagonal(sub, dg, sup, v);
    double norm = 0.0;
    for (double x : sol.x) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw ConvergenceFailure("inverse iteration produced a degenerate vector");
    for (std::size_t i = 0; i < n; ++i) v[i] = sol.x[i] / norm;
  }
  return v;
}

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> stencil_derivative(std::span<const double> x, std::span<const double> y,
                                       int order, int width) {
  const int n = static_cast<int>(x.size());
  if (n < width) throw TooFewSamples("derivative stencil needs at least " + std::to_string(width) +
                                     " samples, got " + std::to_string(n));
  std::vector<double> out(n);
  const int half = width / 2;
  for (int k = 0; k < n; ++k) {
    const int start = std::clamp(k - half, 0, n - width);
    const auto w = fornberg_weights(x[k], x.subspan(start, width), order);
    double s = 0.0;
    for (int j = 0; j < width; ++j) s += w[order][j] * y[start + j];
    out[k] = s;
  }
  return out;
}

double simpson_uniform(std::span<const double> y, double h) {
  const int intervals = static_cast<int>(y.size()) - 1;
  if (intervals < 1) return 0.0;
  if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
  if (intervals == 2) return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
  int even = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = y[0] + y[even];
  for (int i = 1; i < even; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  double total = h / 3.0 * s;
  if (even != intervals)
    total += 3.0 * h / 8.0 * (y[even] + 3.0 * y[even + 1] + 3.0 * y[even + 2] + y[even + 3]);
  return total;
}

}  // namespace acc
