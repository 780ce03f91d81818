#pragma once

#include <Eigen/LU>
#include <cstdlib>
#include <thread>

#include "ist/evolution.hpp"
#include "ist/kernel.hpp"
#include "ist/quadrature.hpp"
#include "ist/rank1.hpp"

namespace ist {

/// Boundary values of the pseudopotentials at infinity: p_-(y,t), q_+(x,t).
struct BoundaryData {
  Potential1D p_minus = zero_potential();
  Potential1D q_plus = zero_potential();

  static BoundaryData zero() { return BoundaryData{}; }
};

struct SolutionSnapshot {
  double t = 0.0;
  ComplexField2D u;
  RealField2D v1;
  RealField2D v2;
};

namespace detail {

inline int thread_count() {
  if (const char* env = std::getenv("IST_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

template <typename Fn>
inline void parallel_for(int n, Fn&& fn) {
  int threads = std::min(thread_count(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Explicit rank-1 reconstruction
///   u(x,y) = conj(k f(x) g(y)) / (1 - k^2 F(x) G(y)),
/// F the left cumulative of |f|^2 and G the right cumulative of |g|^2.
/// k < 1 keeps the denominator >= 1 - k^2 > 0.
inline ComplexField2D reconstruct_rank1(const Rank1Data& data) {
  data.validate();
  const Grid1D& gx = data.f_hat.grid;
  const Grid1D& gy = data.g_hat.grid;
  RealField1D F = cumulative_abs2(data.f_hat, Direction::from_left);
  RealField1D G = cumulative_abs2(data.g_hat, Direction::from_right);
  double k2 = data.k * data.k;
  ComplexField2D u(Grid2D(gx, gy));
  for (int i = 0; i < gx.n; ++i) {
    complex fx = std::conj(data.k * data.f_hat[i]);
    for (int j = 0; j < gy.n; ++j) {
      double den = 1.0 - k2 * F[i] * G[j];
      u.at(i, j) = fx * std::conj(data.g_hat[j]) / den;
    }
  }
  return u;
}

/// Pseudopotentials from Eq.-(1.5)-type representations:
///   v1 = p_-(y,t) + 2 int_{-inf}^x d/dy |u|^2,
///   v2 = q_+(x,t) - 2 int_y^{+inf} d/dx |u|^2,
/// derivatives by centered differences (one-sided at the edges).
inline std::pair<RealField2D, RealField2D> pseudopotentials(const ComplexField2D& u,
                                                            const BoundaryData& bd,
                                                            double t) {
  const Grid1D& gx = u.grid.gx;
  const Grid1D& gy = u.grid.gy;
  RealField2D s(u.grid);
  for (int i = 0; i < gx.n; ++i)
    for (int j = 0; j < gy.n; ++j) s.at(i, j) = std::norm(u.at(i, j));

  auto dyv = [&](int i, int j) {
    if (j == 0) return (s.at(i, 1) - s.at(i, 0)) / gy.dx;
    if (j == gy.n - 1) return (s.at(i, j) - s.at(i, j - 1)) / gy.dx;
    return (s.at(i, j + 1) - s.at(i, j - 1)) / (2.0 * gy.dx);
  };
  auto dxv = [&](int i, int j) {
    if (i == 0) return (s.at(1, j) - s.at(0, j)) / gx.dx;
    if (i == gx.n - 1) return (s.at(i, j) - s.at(i - 1, j)) / gx.dx;
    return (s.at(i + 1, j) - s.at(i - 1, j)) / (2.0 * gx.dx);
  };

  RealField2D v1(u.grid), v2(u.grid);
  // v1: cumulative from the left in x of d/dy |u|^2, per y line
  for (int j = 0; j < gy.n; ++j) {
    double p = bd.p_minus(gy.point(j), t);
    double acc = 0.0;
    double prev = dyv(0, j);
    v1.at(0, j) = p;
    for (int i = 1; i < gx.n; ++i) {
      double curr = dyv(i, j);
      acc += 0.5 * gx.dx * (prev + curr);
      v1.at(i, j) = p + 2.0 * acc;
      prev = curr;
    }
  }
  // v2: cumulative towards the right edge in y of d/dx |u|^2, per x line
  for (int i = 0; i < gx.n; ++i) {
    double q = bd.q_plus(gx.point(i), t);
    double acc = 0.0;
    double prev = dxv(i, gy.n - 1);
    v2.at(i, gy.n - 1) = q;
    for (int j = gy.n - 2; j >= 0; --j) {
      double curr = dxv(i, j);
      acc += 0.5 * gy.dx * (prev + curr);
      v2.at(i, j) = q - 2.0 * acc;
      prev = curr;
    }
  }
  return {std::move(v1), std::move(v2)};
}

/// Closed-form free Gaussian p(x,t) = (2/pi)^{1/4} (1+4it)^{-1/2} e^{-x^2/(1+4it)}
/// (principal square root); unit L2 norm for all t.
inline ComplexField1D gaussian_profile(const Grid1D& grid, double t) {
  complex z(1.0, 4.0 * t);
  complex amp = std::pow(2.0 / M_PI, 0.25) / std::sqrt(z);
  ComplexField1D out(grid);
  for (int j = 0; j < grid.n; ++j) {
    double x = grid.point(j);
    out[j] = amp * std::exp(-x * x / z);
  }
  return out;
}

/// The explicit Gaussian family u(x,y;t) = k p(x,t) p(y,t) / (1 - k^2 P(x) Phat(y)),
/// P the left cumulative of |p|^2 (by quadrature) and Phat = 1 - P; homogeneous
/// boundary data.
inline SolutionSnapshot gaussian_solution(const Grid2D& grid, double t, double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw precondition_error("gaussian_solution: k must lie in [0,1)");
  ComplexField1D px = gaussian_profile(grid.gx, t);
  ComplexField1D py = gaussian_profile(grid.gy, t);
  RealField1D P = cumulative_abs2(px, Direction::from_left);
  RealField1D Phat = cumulative_abs2(py, Direction::from_right);

  SolutionSnapshot snap;
  snap.t = t;
  snap.u = ComplexField2D(grid);
  for (int i = 0; i < grid.gx.n; ++i)
    for (int j = 0; j < grid.gy.n; ++j)
      snap.u.at(i, j) = k * px[i] * py[j] / (1.0 - k * k * P[i] * Phat[j]);
  auto [v1, v2] = pseudopotentials(snap.u, BoundaryData::zero(), t);
  snap.v1 = std::move(v1);
  snap.v2 = std::move(v2);
  return snap;
}

/// Inverse scattering by direct Nystrom discretization of
///   U_{lambda,mu} = (I - F* Q_lambda F P_mu)^{-1} F*,  u(x,y) = U(y,x; x,y),
/// with sharp projector masks (weight 1/2 at the boundary index). Requires
/// ||F|| < 1 and one shared grid on both axes.
inline ComplexField2D nystrom_reconstruct(const KernelOperator& F) {
  if (!F.square())
    throw dimension_error("nystrom_reconstruct: xi and eta grids must coincide");
  if (operator_norm(F) >= 1.0)
    throw precondition_error(
        "nystrom_reconstruct: scattering data must have operator norm < 1");
  const Grid1D& g = F.row_grid;
  const int n = g.n;
  const Matrix Fapp = F.app_matrix();
  const Matrix Fadj = adjoint(F).app_matrix();
  Eigen::VectorXd winv = F.weights.cwiseInverse();

  ComplexField2D u(Grid2D(g, g));
  detail::parallel_for(n, [&](int i) {
    // Q_{x_i} mask on the xi variable
    Eigen::VectorXd qmask = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < i; ++s) qmask(s) = 1.0;
    qmask(i) = 0.5;
    Matrix left = Fadj * qmask.asDiagonal() * Fapp;  // F* Q_x F (app form)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd pmask = Eigen::VectorXd::Zero(n);
      for (int s = j + 1; s < n; ++s) pmask(s) = 1.0;
      pmask(j) = 0.5;
      Matrix M = Matrix::Identity(n, n) - left * pmask.asDiagonal();
      Eigen::PartialPivLU<Matrix> lu(M);
      // kernel row y_j of (I - M)^{-1} F*: solve the transposed system
      Vector ej = Vector::Zero(n);
      ej(j) = complex(1.0, 0.0);
      Vector row = lu.transpose().solve(ej);
      complex val = row.dot(Fadj.col(i).conjugate());  // dot conjugates lhs
      u.at(i, j) = val * winv(i);
    }
  });
  return u;
}

/// Forward scattering for the 2D Dirac system with skew-symmetric potential:
///   d/dx psi1 = -u psi2,   d/dy psi2 = conj(u) psi1,
/// incident wave a1 = delta at eta_j (quadrature-normalized), a2 = 0; the
/// kernel column is b2 read at the top y edge. The delta part of psi1 is
/// integrated analytically (a Heaviside step in y); the remainder and psi2
/// are swept with locally-implicit trapezoid product integration.
inline KernelOperator forward_scattering(const ComplexField2D& u) {
  const Grid1D& gx = u.grid.gx;
  const Grid1D& gy = u.grid.gy;
  const int nx = gx.n, ny = gy.n;
  for (const auto& v : u.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw precondition_error("forward_scattering: potential must be finite");

  KernelOperator F(gx, gy);
  const double dx = gx.dx, dy = gy.dx;

  detail::parallel_for(ny, [&](int j) {
    // chi1 = psi1 - delta part; psi2 includes the step response
    Matrix chi1 = Matrix::Zero(nx, ny);
    Matrix psi2 = Matrix::Zero(nx, ny);
    Matrix Ix = Matrix::Zero(nx, ny);  // int_{-inf}^x u psi2
    Matrix Iy = Matrix::Zero(nx, ny);  // int_{-inf}^y conj(u) chi1

    for (int i = 0; i < nx; ++i) {
      for (int m = 0; m < ny; ++m) {
        double step = (m > j) ? 1.0 : (m == j ? 0.5 : 0.0);
        complex d = std::conj(u.at(i, j)) * step;
        complex ax(0.0, 0.0), ay(0.0, 0.0);
        if (i > 0)
          ax = Ix(i - 1, m) + 0.5 * dx * u.at(i - 1, m) * psi2(i - 1, m);
        if (m > 0)
          ay = Iy(i, m - 1) + 0.5 * dy * std::conj(u.at(i, m - 1)) * chi1(i, m - 1);
        // psi2 = d + ay + dy/2 conj(u) chi1;  chi1 = -(ax + dx/2 u psi2)
        complex uu = u.at(i, m);
        complex rhs = d + ay - 0.5 * dy * std::conj(uu) * ax;
        complex den = 1.0 + 0.25 * dx * dy * std::norm(uu);
        psi2(i, m) = rhs / den;
        chi1(i, m) = -(ax + 0.5 * dx * uu * psi2(i, m));
        Ix(i, m) = ax + 0.5 * dx * uu * psi2(i, m);
        Iy(i, m) = ay + 0.5 * dy * std::conj(uu) * chi1(i, m);
      }
    }
    for (int i = 0; i < nx; ++i) F.kernel(i, j) = psi2(i, ny - 1);
  });
  return F;
}

/// Cauchy-problem pipeline: evolve the rank-1 data to each requested time,
/// reconstruct, and assemble the pseudopotentials.
inline std::vector<SolutionSnapshot> solve_cauchy(const Rank1Data& data0,
                                                  const BoundaryData& boundary,
                                                  const std::vector<double>& times,
                                                  double dt) {
  std::vector<SolutionSnapshot> out;
  out.reserve(times.size());
  for (double t : times) {
    Rank1Data dt_data =
        (t == 0.0) ? data0
                   : evolve_rank1(data0, boundary.p_minus, boundary.q_plus, t, dt);
    SolutionSnapshot snap;
    snap.t = t;
    snap.u = reconstruct_rank1(dt_data);
    auto [v1, v2] = pseudopotentials(snap.u, boundary, t);
    snap.v1 = std::move(v1);
    snap.v2 = std::move(v2);
    out.push_back(std::move(snap));
  }
  return out;
}

}  // namespace ist
