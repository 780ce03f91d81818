#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <vector>

#include "ist/grid.hpp"

namespace ist {

/// Composite trapezoid weights on a uniform grid: dx/2 at the ends, dx inside.
inline std::vector<double> trapezoid_weights(const Grid1D& g) {
  std::vector<double> w(static_cast<std::size_t>(g.n), g.dx);
  w.front() = 0.5 * g.dx;
  w.back() = 0.5 * g.dx;
  return w;
}

template <typename T>
inline T integrate(const Grid1D& g, const std::vector<T>& v) {
  T acc{};
  acc += 0.5 * v.front() + 0.5 * v.back();
  for (int j = 1; j + 1 < g.n; ++j) acc += v[static_cast<std::size_t>(j)];
  return acc * g.dx;
}

inline double integrate(const RealField1D& f) { return integrate(f.grid, f.values); }
inline complex integrate(const ComplexField1D& f) { return integrate(f.grid, f.values); }

inline double l2_norm_sq(const ComplexField1D& f) {
  double acc = 0.0;
  for (int j = 0; j < f.grid.n; ++j) {
    double m = std::norm(f[j]);
    acc += (j == 0 || j == f.grid.n - 1) ? 0.5 * m : m;
  }
  return acc * f.grid.dx;
}

inline double l2_norm(const ComplexField1D& f) { return std::sqrt(l2_norm_sq(f)); }

/// 2D trapezoid integral of samples on a tensor grid.
inline double integrate2d(const Grid2D& g, const std::vector<double>& v) {
  double acc = 0.0;
  for (int i = 0; i < g.gx.n; ++i) {
    double wx = (i == 0 || i == g.gx.n - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int j = 0; j < g.gy.n; ++j) {
      double wy = (j == 0 || j == g.gy.n - 1) ? 0.5 : 1.0;
      row += wy * v[static_cast<std::size_t>(i) * g.gy.n + j];
    }
    acc += wx * row;
  }
  return acc * g.gx.dx * g.gy.dx;
}

enum class Direction { from_left, from_right };

/// Running integral of real samples: trapezoid sums with the Euler-Maclaurin
/// endpoint correction -(dx^2/12)(f'(x) - f'(x_min)), which lifts the partial
/// integrals to fourth order. from_left is 0 at the left edge; from_right is
/// defined as (full integral) - from_left, so at every point the two
/// directions sum to the full-grid integral exactly.
inline RealField1D cumulative_integral(const RealField1D& f, Direction dir) {
  const Grid1D& g = f.grid;
  if (g.n < 3) {
    RealField1D out(g);
    double seg = 0.5 * g.dx * (f[0] + f[g.n - 1]);
    if (dir == Direction::from_left)
      out[g.n - 1] = seg;
    else
      out[0] = seg;
    return out;
  }
  auto slope = [&](int j) {
    if (j == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * g.dx);
    if (j == g.n - 1)
      return (3.0 * f[g.n - 1] - 4.0 * f[g.n - 2] + f[g.n - 3]) / (2.0 * g.dx);
    return (f[j + 1] - f[j - 1]) / (2.0 * g.dx);
  };
  const double c = g.dx * g.dx / 12.0;
  const double s0 = slope(0);
  RealField1D left(g);
  left[0] = 0.0;
  double trap = 0.0;
  for (int j = 1; j < g.n; ++j) {
    trap += 0.5 * g.dx * (f[j - 1] + f[j]);
    left[j] = trap - c * (slope(j) - s0);
  }
  if (dir == Direction::from_left) return left;
  RealField1D right(g);
  double total = left[g.n - 1];
  for (int j = 0; j < g.n; ++j) right[j] = total - left[j];
  return right;
}

/// Cumulative integral of |f|^2, the building block of Eq.-of-motion traces.
inline RealField1D cumulative_abs2(const ComplexField1D& f, Direction dir) {
  RealField1D sq(f.grid);
  for (int j = 0; j < f.grid.n; ++j) sq[j] = std::norm(f[j]);
  return cumulative_integral(sq, dir);
}

/// True when the field has decayed at both grid edges relative to its peak.
inline bool edge_decayed(const ComplexField1D& f, double rel_threshold = 1e-8) {
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return true;
  double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
  return edge <= rel_threshold * peak;
}

inline void warn_edge_decay(const ComplexField1D& f, const char* where,
                            double rel_threshold = 1e-8) {
  if (!edge_decayed(f, rel_threshold))
    std::cerr << "[ist] warning: " << where
              << ": field has not decayed at the grid edges; widen the domain\n";
}

}  // namespace ist
