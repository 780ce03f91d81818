#pragma once

#include <cmath>
#include <functional>

#include "ist/fft.hpp"
#include "ist/kernel.hpp"
#include "ist/quadrature.hpp"
#include "ist/rank1.hpp"

namespace ist {

/// Real bounded potential w(coordinate, time).
using Potential1D = std::function<double(double, double)>;

inline Potential1D zero_potential() {
  return [](double, double) { return 0.0; };
}

namespace detail {

/// Free kinetic step on a zero-padded copy of the field. Padding keeps the
/// periodic images of the spectral method pad_factor*width away; the crop
/// back to the original grid assumes the field stays inside it.
inline void kinetic_step(std::vector<complex>& values, const Grid1D& g, int sign,
                         double t, int pad_factor) {
  const int n = g.n;
  const int m = std::max(n, pad_factor * n);
  std::vector<complex> buf(static_cast<std::size_t>(m), complex(0.0, 0.0));
  std::copy(values.begin(), values.end(), buf.begin());
  fft::forward(buf);
  for (int q = 0; q < m; ++q) {
    double lam = fft::frequency(q, m, g.dx);
    buf[static_cast<std::size_t>(q)] *=
        std::exp(complex(0.0, -static_cast<double>(sign) * lam * lam * t));
  }
  fft::inverse(buf);
  std::copy(buf.begin(), buf.begin() + n, values.begin());
}

}  // namespace detail

/// Solves i u_t + sign * u_xx = 0 for time t with the Fourier multiplier
/// exp(-i*sign*lambda^2*t), lambda_m = 2 pi m / (N dx) on the padded grid.
inline ComplexField1D propagate_free(const ComplexField1D& field, int sign, double t,
                                     int pad_factor = 2) {
  if (sign != 1 && sign != -1)
    throw precondition_error("propagate_free: sign must be +1 or -1");
  if (t < 0.0) throw precondition_error("propagate_free: t must be >= 0");
  warn_edge_decay(field, "propagate_free");
  ComplexField1D out = field;
  if (t == 0.0) return out;
  detail::kinetic_step(out.values, out.grid, sign, t, pad_factor);
  return out;
}

/// Strang split-step for i u_t + sign * u_xx + w(x,t) u = 0: half potential
/// phase, full kinetic step, half potential phase, with w sampled at the
/// midpoint of each step. The last step is shortened to land exactly on t.
inline ComplexField1D propagate_potential(const ComplexField1D& field, int sign,
                                          const Potential1D& w, double t, double dt,
                                          double t_start = 0.0, int pad_factor = 2) {
  if (sign != 1 && sign != -1)
    throw precondition_error("propagate_potential: sign must be +1 or -1");
  if (!(dt > 0.0)) throw precondition_error("propagate_potential: dt must be > 0");
  if (t < 0.0) throw precondition_error("propagate_potential: t must be >= 0");
  warn_edge_decay(field, "propagate_potential");

  ComplexField1D out = field;
  const Grid1D& g = out.grid;
  std::vector<double> xs = g.points();
  double done = 0.0;
  while (done < t - 1e-15 * std::max(1.0, t)) {
    double h = std::min(dt, t - done);
    double t_mid = t_start + done + 0.5 * h;
    std::vector<double> wv(static_cast<std::size_t>(g.n));
    for (int j = 0; j < g.n; ++j) {
      double v = w(xs[static_cast<std::size_t>(j)], t_mid);
      if (!std::isfinite(v))
        throw precondition_error("propagate_potential: potential not finite");
      wv[static_cast<std::size_t>(j)] = v;
    }
    for (int j = 0; j < g.n; ++j)
      out.values[static_cast<std::size_t>(j)] *=
          std::exp(complex(0.0, 0.5 * h * wv[static_cast<std::size_t>(j)]));
    detail::kinetic_step(out.values, g, sign, h, pad_factor);
    for (int j = 0; j < g.n; ++j)
      out.values[static_cast<std::size_t>(j)] *=
          std::exp(complex(0.0, 0.5 * h * wv[static_cast<std::size_t>(j)]));
    done += h;
  }
  return out;
}

/// Evolves the scattering kernel f(xi,eta;t) under
/// (i d/dt - d^2/dxi^2 - d^2/deta^2 - p(eta,t) - q(xi,t)) f = 0
/// by conjugating, evolving the standard equation axis by axis (the two 1D
/// propagators act on different variables and commute exactly), and
/// conjugating back.
inline KernelOperator propagate_kernel_2d(const KernelOperator& op,
                                          const Potential1D& p, const Potential1D& q,
                                          double t, double dt, int pad_factor = 2) {
  const int nr = op.row_grid.n, nc = op.col_grid.n;
  Matrix work = op.kernel.conjugate();

  // xi axis (rows), potential q
  for (int j = 0; j < nc; ++j) {
    ComplexField1D col(op.row_grid);
    for (int i = 0; i < nr; ++i) col[i] = work(i, j);
    col = propagate_potential(col, +1, q, t, dt, 0.0, pad_factor);
    for (int i = 0; i < nr; ++i) work(i, j) = col[i];
  }
  // eta axis (columns), potential p
  for (int i = 0; i < nr; ++i) {
    ComplexField1D row(op.col_grid);
    for (int j = 0; j < nc; ++j) row[j] = work(i, j);
    row = propagate_potential(row, +1, p, t, dt, 0.0, pad_factor);
    for (int j = 0; j < nc; ++j) work(i, j) = row[j];
  }

  KernelOperator out = op;
  out.kernel = work.conjugate();
  return out;
}

/// Evolves rank-1 scattering data: the conjugate factors satisfy the standard
/// 1D equations with potentials q_plus (xi axis) and p_minus (eta axis).
/// Norms are conserved, so the unit normalization is re-imposed and k is
/// returned unchanged.
inline Rank1Data evolve_rank1(const Rank1Data& data, const Potential1D& p_minus,
                              const Potential1D& q_plus, double t, double dt,
                              int pad_factor = 2) {
  data.validate();
  auto evolve_factor = [&](const ComplexField1D& f, const Potential1D& w) {
    ComplexField1D conj_f(f.grid);
    for (int j = 0; j < f.grid.n; ++j) conj_f[j] = std::conj(f[j]);
    conj_f = propagate_potential(conj_f, +1, w, t, dt, 0.0, pad_factor);
    double nrm = l2_norm(conj_f);
    if (nrm == 0.0) throw singularity_error("evolve_rank1: factor vanished");
    ComplexField1D out(f.grid);
    for (int j = 0; j < f.grid.n; ++j) out[j] = std::conj(conj_f[j]) / nrm;
    return out;
  };
  Rank1Data out;
  out.k = data.k;
  out.f_hat = evolve_factor(data.f_hat, q_plus);
  out.g_hat = evolve_factor(data.g_hat, p_minus);
  return out;
}

}  // namespace ist
