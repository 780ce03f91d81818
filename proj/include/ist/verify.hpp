#pragma once

#include "ist/fft.hpp"
#include "ist/quadrature.hpp"
#include "ist/rank1.hpp"
#include "ist/scattering.hpp"

namespace ist {

struct ResidualReport {
  double t = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
  int interior_margin = 3;
};

/// Residual of i u_t + u_xx + u_yy + (v1 + v2) u on interior points, with
/// u_t by the centered difference of the bracketing snapshots and the
/// Laplacian by second-order centered differences. Points within
/// interior_margin of any edge are excluded.
inline ResidualReport pde_residual(const SolutionSnapshot& prev,
                                   const SolutionSnapshot& mid,
                                   const SolutionSnapshot& next,
                                   int interior_margin = 3) {
  const Grid2D& grid = mid.u.grid;
  if (!(prev.u.grid == grid) || !(next.u.grid == grid))
    throw dimension_error("pde_residual: snapshot grids differ");
  double dt2 = next.t - prev.t;
  if (!(dt2 > 0.0))
    throw precondition_error("pde_residual: snapshots must be time-ordered");
  const double dx = grid.gx.dx, dy = grid.gy.dx;
  const int m = interior_margin;

  ResidualReport rep;
  rep.t = mid.t;
  rep.interior_margin = m;
  double sumsq = 0.0;
  int count = 0;
  for (int i = m; i < grid.gx.n - m; ++i)
    for (int j = m; j < grid.gy.n - m; ++j) {
      complex ut = (next.u.at(i, j) - prev.u.at(i, j)) / dt2;
      complex uxx =
          (mid.u.at(i + 1, j) - 2.0 * mid.u.at(i, j) + mid.u.at(i - 1, j)) / (dx * dx);
      complex uyy =
          (mid.u.at(i, j + 1) - 2.0 * mid.u.at(i, j) + mid.u.at(i, j - 1)) / (dy * dy);
      complex r = complex(0.0, 1.0) * ut + uxx + uyy +
                  (mid.v1.at(i, j) + mid.v2.at(i, j)) * mid.u.at(i, j);
      rep.linf = std::max(rep.linf, std::abs(r));
      sumsq += std::norm(r);
      ++count;
    }
  rep.l2 = count > 0 ? std::sqrt(sumsq * dx * dy) : 0.0;
  return rep;
}

/// The conserved quantity of rank-1 data: integral of |u|^2 equals |ln(1-k^2)|.
inline double conserved_norm(double k) {
  detail::check_coupling(k);
  return std::abs(std::log(1.0 - k * k));
}

inline double field_norm_sq(const ComplexField2D& u) {
  std::vector<double> s(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) s[i] = std::norm(u.values[i]);
  return integrate2d(u.grid, s);
}

/// Residuals of the time identities obeyed by freely evolving unit factors:
///   i d/dt F(x,t) = conj(f) f_x - conj(f_x) f   (F the left cumulative of |f|^2)
/// checked with a centered time difference and spectral x derivatives.
/// Returns the max abs residual over interior points.
inline double rank1_time_identity(const ComplexField1D& f_prev,
                                  const ComplexField1D& f_mid,
                                  const ComplexField1D& f_next, double dt,
                                  int interior_margin = 3) {
  const Grid1D& g = f_mid.grid;
  if (!(f_prev.grid == g) || !(f_next.grid == g))
    throw dimension_error("rank1_time_identity: grids differ");
  RealField1D Fp = cumulative_abs2(f_prev, Direction::from_left);
  RealField1D Fn = cumulative_abs2(f_next, Direction::from_left);
  ComplexField1D fx = fft::derivative(f_mid);
  double worst = 0.0;
  for (int j = interior_margin; j < g.n - interior_margin; ++j) {
    complex lhs = complex(0.0, 1.0) * (Fn[j] - Fp[j]) / (2.0 * dt);
    complex rhs = std::conj(f_mid[j]) * fx[j] - std::conj(fx[j]) * f_mid[j];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace ist
