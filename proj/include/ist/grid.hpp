#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ist/errors.hpp"

namespace ist {

using complex = std::complex<double>;

/// Uniform one-dimensional grid x_j = x_min + j*dx, j = 0..n-1.
struct Grid1D {
  int n = 0;
  double x_min = 0.0;
  double dx = 0.0;

  Grid1D() = default;
  Grid1D(int n_, double x_min_, double dx_) : n(n_), x_min(x_min_), dx(dx_) {
    validate();
  }

  /// Grid covering [a, b] with n points (dx = (b-a)/(n-1)).
  static Grid1D over(double a, double b, int n) {
    if (n < 2) throw dimension_error("Grid1D: need at least 2 points");
    return Grid1D(n, a, (b - a) / (n - 1));
  }

  double point(int j) const { return x_min + j * dx; }
  double x_max() const { return point(n - 1); }

  std::vector<double> points() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)] = point(j);
    return xs;
  }

  void validate() const {
    if (n < 2) throw dimension_error("Grid1D: n must be >= 2");
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min))
      throw dimension_error("Grid1D: dx must be positive and finite");
  }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.n == b.n && a.x_min == b.x_min && a.dx == b.dx;
  }
};

struct Grid2D {
  Grid1D gx;
  Grid1D gy;

  Grid2D() = default;
  Grid2D(Grid1D gx_, Grid1D gy_) : gx(gx_), gy(gy_) {
    gx.validate();
    gy.validate();
  }

  std::size_t size() const {
    return static_cast<std::size_t>(gx.n) * static_cast<std::size_t>(gy.n);
  }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.gx == b.gx && a.gy == b.gy;
  }
};

struct ComplexField1D {
  Grid1D grid;
  std::vector<complex> values;

  ComplexField1D() = default;
  explicit ComplexField1D(Grid1D g)
      : grid(g), values(static_cast<std::size_t>(g.n), complex(0.0, 0.0)) {}
  ComplexField1D(Grid1D g, std::vector<complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != static_cast<std::size_t>(grid.n))
      throw dimension_error("ComplexField1D: value count does not match grid");
  }

  template <typename F>
  static ComplexField1D sample(Grid1D g, F&& f) {
    ComplexField1D out(g);
    for (int j = 0; j < g.n; ++j)
      out.values[static_cast<std::size_t>(j)] = complex(f(g.point(j)));
    return out;
  }

  complex& operator[](int j) { return values[static_cast<std::size_t>(j)]; }
  const complex& operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
};

struct RealField1D {
  Grid1D grid;
  std::vector<double> values;

  RealField1D() = default;
  explicit RealField1D(Grid1D g)
      : grid(g), values(static_cast<std::size_t>(g.n), 0.0) {}
  RealField1D(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != static_cast<std::size_t>(grid.n))
      throw dimension_error("RealField1D: value count does not match grid");
  }

  template <typename F>
  static RealField1D sample(Grid1D g, F&& f) {
    RealField1D out(g);
    for (int j = 0; j < g.n; ++j)
      out.values[static_cast<std::size_t>(j)] = f(g.point(j));
    return out;
  }

  double& operator[](int j) { return values[static_cast<std::size_t>(j)]; }
  const double& operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
};

/// Complex samples in row-major order: x outer, y inner.
struct ComplexField2D {
  Grid2D grid;
  std::vector<complex> values;

  ComplexField2D() = default;
  explicit ComplexField2D(Grid2D g) : grid(g), values(g.size(), complex(0.0, 0.0)) {}
  ComplexField2D(Grid2D g, std::vector<complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw dimension_error("ComplexField2D: value count does not match grid");
  }

  complex& at(int ix, int iy) {
    return values[static_cast<std::size_t>(ix) * grid.gy.n + iy];
  }
  const complex& at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * grid.gy.n + iy];
  }
};

struct RealField2D {
  Grid2D grid;
  std::vector<double> values;

  RealField2D() = default;
  explicit RealField2D(Grid2D g) : grid(g), values(g.size(), 0.0) {}

  double& at(int ix, int iy) {
    return values[static_cast<std::size_t>(ix) * grid.gy.n + iy];
  }
  const double& at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * grid.gy.n + iy];
  }
};

}  // namespace ist
