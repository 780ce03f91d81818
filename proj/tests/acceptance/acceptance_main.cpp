// Acceptance gate: one line per criterion, nonzero exit if any fails.
// All tolerances are pinned here.

#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ist/ist.hpp"

using namespace ist;

namespace {

ComplexField1D unit_gaussian(const Grid1D& g, double center, double width) {
  auto f = ComplexField1D::sample(g, [&](double x) {
    double s = (x - center) / width;
    return std::exp(-s * s);
  });
  double n = l2_norm(f);
  for (auto& v : f.values) v /= n;
  return f;
}

ComplexField1D random_bumps(const Grid1D& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> cen(-4.0, 4.0), wid(0.8, 2.5), amp(-1.0, 1.0);
  ComplexField1D f(g);
  for (int b = 0; b < 3; ++b) {
    double c = cen(rng), w = wid(rng);
    complex a(amp(rng), amp(rng));
    for (int j = 0; j < g.n; ++j) {
      double s = (g.point(j) - c) / w;
      f[j] += a * std::exp(-s * s);
    }
  }
  return f;
}

int failures = 0;

void report(int idx, const char* what, bool ok, double measured, double tol) {
  std::printf("criterion %2d [%s]: %s (measured %.3e, tolerance %.3e)\n", idx,
              what, ok ? "PASS" : "FAIL", measured, tol);
  if (!ok) ++failures;
}

// 1. conservation of the reconstructed field norm
void criterion1() {
  const double tol = 1e-5;
  Grid1D g = Grid1D::over(-10.0, 10.0, 256);
  double worst = 0.0;
  for (double k : {0.3, 0.5, 0.9}) {
    auto d = Rank1Data::make(k, unit_gaussian(g, 0.0, 1.0), unit_gaussian(g, 0.0, 1.0));
    double got = field_norm_sq(reconstruct_rank1(d));
    worst = std::max(worst, std::abs(got - conserved_norm(k)) / conserved_norm(k));
  }
  report(1, "conserved norm", worst < tol, worst, tol);
}

// 2. free propagation against the spreading-gaussian closed form
void criterion2() {
  const double tol = 1e-8;
  Grid1D g = Grid1D::over(-12.0, 12.0, 512);
  ComplexField1D u0 = gaussian_profile(g, 0.0);
  double worst = 0.0;
  for (double t : {0.1, 0.25, 1.0}) {
    ComplexField1D u = propagate_free(u0, +1, t);
    ComplexField1D exact = gaussian_profile(g, t);
    for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(u[j] - exact[j]));
  }
  report(2, "free gaussian closed form", worst < tol, worst, tol);
}

double residual_level(int n, double dt, double k, const BoundaryData& bd,
                      std::function<SolutionSnapshot(const Grid2D&, double)> at) {
  Grid1D g = Grid1D::over(-10.0, 10.0, n);
  Grid2D grid(g, g);
  double t = 0.2;
  return pde_residual(at(grid, t - dt), at(grid, t), at(grid, t + dt)).linf;
}

// 3. centered-difference field-equation residual converges at second order
void criterion3() {
  const double lo = 1.7, hi = 2.3;
  auto closed = [](const Grid2D& grid, double t) {
    return gaussian_solution(grid, t, 0.5);
  };
  double e1 = residual_level(128, 2e-3, 0.5, BoundaryData::zero(), closed);
  double e2 = residual_level(256, 1e-3, 0.5, BoundaryData::zero(), closed);
  double e3 = residual_level(512, 5e-4, 0.5, BoundaryData::zero(), closed);
  double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
  double order = 0.5 * (o1 + o2);
  report(3, "residual order", order > lo && order < hi, order, 2.0);
}

// 4. resolvent, volterra inverse and factorization against dense inverses
void criterion4() {
  const double tol_resolvent = 1e-10;
  const double tol = 1e-8;
  Grid1D g = Grid1D::over(-8.0, 8.0, 128);
  const int n = g.n;
  Matrix I = Matrix::Identity(n, n);
  ComplexField1D f = unit_gaussian(g, 0.4, 1.2);
  ComplexField1D h = unit_gaussian(g, -0.5, 1.0);
  for (auto& v : h.values) v *= complex(0.6, 0.3);

  auto K = KernelOperator::rank_one(f, h, complex(0.8, 0.0));
  Matrix dense = (I - K.app_matrix()).inverse() - I;
  double e1 = (resolvent_rank1(K).app_matrix() - dense).cwiseAbs().maxCoeff();
  report(4, "rank-1 resolvent vs dense", e1 < tol_resolvent, e1, tol_resolvent);

  auto Kp = volterra_mask(KernelOperator::rank_one(f, h), Polarity::positive);
  Matrix denseV = (I - Kp.app_matrix()).inverse() - I;
  double e2 = (volterra_inverse_rank1(f, h, VolterraForm::plain).app_matrix() - denseV)
                  .cwiseAbs()
                  .maxCoeff();

  auto Kd = volterra_predivided_operator(f, h);
  Matrix denseD = I - (I + Kd.app_matrix()).inverse();
  double e3 =
      (volterra_inverse_rank1(f, h, VolterraForm::predivided).app_matrix() - denseD)
          .cwiseAbs()
          .maxCoeff();
  double eV = std::max(e2, e3);
  report(4, "volterra inverses vs dense", eV < tol, eV, tol);

  auto F = factorize_rank1(K);
  Matrix inv = (I - K.app_matrix()).inverse();
  double e4 = std::max(
      ((I + F.A_minus.app_matrix()) * (I + F.A_plus.app_matrix()) - inv)
          .cwiseAbs()
          .maxCoeff(),
      ((I + F.B_plus.app_matrix()) * (I + F.B_minus.app_matrix()) - inv)
          .cwiseAbs()
          .maxCoeff());
  report(4, "two-sided factorization vs dense", e4 < tol, e4, tol);
}

// 5. nonlinear scaling map: norm preservation and inverse round trip
void criterion5() {
  const double tol = 1e-8;
  Grid1D g = Grid1D::over(-16.0, 16.0, 512);
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> kd(0.05, 0.95);
  double worst = 0.0;
  for (int c = 0; c < 20; ++c) {
    ComplexField1D f = random_bumps(g, rng);
    double k = kd(rng);
    ComplexField1D Af = apply_Ak(f, k);
    worst = std::max(worst, std::abs(l2_norm(Af) - l2_norm(f)));
    ComplexField1D back = apply_Ak_inv(Af, k);
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst, std::abs(back[j] - f[j]));
  }
  report(5, "scaling map calculus", worst < tol, worst, tol);
}

// 6. scattering block norms and the off-diagonal factorization identity
void criterion6() {
  const double tol_norm = 1e-8;
  const double tol_identity = 1e-6;
  Grid1D g = Grid1D::over(-12.0, 12.0, 128);
  const int n = g.n;
  Matrix I = Matrix::Identity(n, n);
  auto d =
      Rank1Data::make(0.6, unit_gaussian(g, 0.3, 1.2), unit_gaussian(g, -0.4, 1.0));
  auto S = scattering_elements(d);
  double en = std::abs(operator_norm(S.F12) - d.k);
  report(6, "off-diagonal block norm equals k", en < tol_norm, en, tol_norm);

  Matrix lhs = (I + S.F11.app_matrix()) * (I + adjoint(S.F11).app_matrix());
  Matrix rhs = I - compose(S.F12, adjoint(S.F12)).app_matrix();
  double ei = (lhs - rhs).cwiseAbs().maxCoeff();
  report(6, "unitarity factorization identity", ei < tol_identity, ei, tol_identity);
}

// 7. evolution invariances: 1d unitarity and 2d kernel norm drift
void criterion7() {
  const double tol = 1e-8;
  Grid1D g = Grid1D::over(-20.0, 20.0, 512);
  ComplexField1D u0 = unit_gaussian(g, 0.0, 1.0);
  auto w = [](double x, double t) { return 0.5 * std::cos(x) * std::exp(-t); };
  ComplexField1D u = propagate_potential(u0, +1, w, 1.0, 1e-3);
  double drift1 = std::abs(l2_norm(u) - 1.0);
  report(7, "1d unitarity drift", drift1 < tol, drift1, tol);

  Grid1D g2 = Grid1D::over(-20.0, 20.0, 128);
  auto d = Rank1Data::make(0.6, unit_gaussian(g2, 0.2, 1.1), unit_gaussian(g2, -0.3, 1.3));
  auto p = [](double y, double t) { return 0.3 * std::exp(-y * y) * std::cos(t); };
  auto K = d.kernel();
  auto Kt = propagate_kernel_2d(K, p, w, 0.5, 1e-3);
  double drift2 = std::abs(operator_norm(Kt) - operator_norm(K));
  report(7, "2d kernel norm drift", drift2 < tol, drift2, tol);
}

// 8. direct integral-equation solve against the explicit formula
void criterion8() {
  const double tol = 1e-5;
  auto gap = [](int n) {
    Grid1D g = Grid1D::over(-10.0, 10.0, n);
    auto d =
        Rank1Data::make(0.5, unit_gaussian(g, 0.3, 1.2), unit_gaussian(g, -0.2, 1.0));
    ComplexField2D direct = nystrom_reconstruct(d.kernel());
    ComplexField2D closed = reconstruct_rank1(d);
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.values.size(); ++i)
      worst = std::max(worst, std::abs(direct.values[i] - closed.values[i]));
    return worst;
  };
  double e64 = gap(64);
  double e96 = gap(96);
  bool ok = e64 < tol && e96 < e64;
  report(8, "direct solve vs closed form", ok, e64, tol);
}

// 9. forward scattering inverts reconstruction
void criterion9() {
  const double tol_norm = 2e-3;
  const double tol_factor = 1e-2;
  Grid1D g = Grid1D::over(-10.0, 10.0, 128);
  double k = 0.5;
  auto d = Rank1Data::make(k, unit_gaussian(g, 0.2, 1.1), unit_gaussian(g, -0.3, 1.2));
  ComplexField2D u = reconstruct_rank1(d);
  KernelOperator F = forward_scattering(u);
  double en = std::abs(operator_norm(F) - k);
  report(9, "round-trip kernel norm", en < tol_norm, en, tol_norm);

  auto d2 = rank1_from_kernel(F);
  // phase-free comparison through the full kernels
  double ef = (d2.kernel().kernel - d.kernel().kernel).cwiseAbs().maxCoeff();
  report(9, "round-trip factor shapes", ef < tol_factor, ef, tol_factor);
}

// 10. cauchy pipeline with nonzero boundary data
void criterion10() {
  const double tol_drift = 1e-6;
  const double lo = 1.7, hi = 2.3;
  BoundaryData bd;
  bd.q_plus = [](double x, double t) { return 0.5 * std::cos(x) * std::exp(-t); };

  Grid1D g = Grid1D::over(-16.0, 16.0, 256);
  auto d0 = Rank1Data::make(0.5, unit_gaussian(g, 0.0, 1.0), unit_gaussian(g, 0.0, 1.0));
  double n0 = operator_norm(d0.kernel());
  double drift = 0.0;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    auto dt_data = evolve_rank1(d0, bd.p_minus, bd.q_plus, t, 1e-3);
    drift = std::max(drift, std::abs(operator_norm(dt_data.kernel()) - n0));
  }
  report(10, "scattering norm constant in t", drift < tol_drift, drift, tol_drift);

  auto level = [&](int n, double dt_fd) {
    Grid1D gn = Grid1D::over(-16.0, 16.0, n);
    auto d = Rank1Data::make(0.5, unit_gaussian(gn, 0.0, 1.0),
                             unit_gaussian(gn, 0.0, 1.0));
    double t = 0.2;
    auto snap_at = [&](double tt) {
      auto dd = evolve_rank1(d, bd.p_minus, bd.q_plus, tt, 2.5e-4);
      SolutionSnapshot s;
      s.t = tt;
      s.u = reconstruct_rank1(dd);
      auto [v1, v2] = pseudopotentials(s.u, bd, tt);
      s.v1 = std::move(v1);
      s.v2 = std::move(v2);
      return s;
    };
    return pde_residual(snap_at(t - dt_fd), snap_at(t), snap_at(t + dt_fd)).linf;
  };
  double e1 = level(128, 2e-3);
  double e2 = level(256, 1e-3);
  double e3 = level(512, 5e-4);
  double order = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
  report(10, "evolved-field residual order", order > lo && order < hi, order, 2.0);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures) {
    std::printf("%d criterion check(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
