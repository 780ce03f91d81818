#include <catch_amalgamated.hpp>

#include "ist/fft.hpp"
#include "ist/grid.hpp"
#include "ist/kernel.hpp"
#include "ist/quadrature.hpp"

using namespace ist;

TEST_CASE("grid points and construction") {
  Grid1D g = Grid1D::over(-10.0, 10.0, 201);
  CHECK(g.n == 201);
  CHECK(g.dx == Catch::Approx(0.1));
  CHECK(g.point(0) == Catch::Approx(-10.0));
  CHECK(g.point(200) == Catch::Approx(10.0));
  CHECK(g.point(100) == Catch::Approx(0.0).margin(1e-13));

  CHECK_THROWS_AS(Grid1D::over(0.0, 1.0, 1), dimension_error);
  CHECK_THROWS_AS(Grid1D(16, 0.0, -0.5), dimension_error);
  CHECK_THROWS_AS(Grid1D(16, 0.0, 0.0), dimension_error);
}

TEST_CASE("trapezoid weights: dx/2 at the ends, dx inside") {
  Grid1D g(5, 0.0, 0.25);
  auto w = trapezoid_weights(g);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == Catch::Approx(0.125));
  CHECK(w[1] == Catch::Approx(0.25));
  CHECK(w[4] == Catch::Approx(0.125));
  double total = 0.0;
  for (double v : w) total += v;
  CHECK(total == Catch::Approx(g.dx * (g.n - 1)));
}

TEST_CASE("gaussian integral converges superalgebraically") {
  // oracle: int exp(-x^2) dx = sqrt(pi), tails below 1e-28 at |x|=8
  Grid1D g = Grid1D::over(-8.0, 8.0, 129);
  auto f = RealField1D::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(integrate(f) == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("cumulative integrals are complementary and exact for constants") {
  Grid1D g = Grid1D::over(-3.0, 5.0, 97);
  auto f = RealField1D::sample(g, [](double x) { return std::cos(x) + 2.0; });
  RealField1D L = cumulative_integral(f, Direction::from_left);
  RealField1D R = cumulative_integral(f, Direction::from_right);
  double total = L[g.n - 1];
  // analytic: int (cos + 2) = sin(5) - sin(-3) + 2*8
  CHECK(total == Catch::Approx(std::sin(5.0) - std::sin(-3.0) + 16.0).epsilon(1e-8));
  CHECK(L[0] == 0.0);
  CHECK(R[g.n - 1] == 0.0);
  for (int j = 0; j < g.n; ++j)
    CHECK(L[j] + R[j] == Catch::Approx(total).margin(1e-13));
  // partial integrals are fourth-order accurate
  int mid = 48;
  double exact_mid = std::sin(g.point(mid)) - std::sin(-3.0) + 2.0 * (g.point(mid) + 3.0);
  CHECK(L[mid] == Catch::Approx(exact_mid).margin(1e-7));

  auto one = RealField1D::sample(g, [](double) { return 1.0; });
  RealField1D Lc = cumulative_integral(one, Direction::from_left);
  for (int j = 0; j < g.n; ++j)
    CHECK(Lc[j] == Catch::Approx(g.point(j) - g.x_min).margin(1e-13));
}

TEST_CASE("unit-norm gaussian has unit l2 norm") {
  Grid1D g = Grid1D::over(-10.0, 10.0, 257);
  auto f = ComplexField1D::sample(
      g, [](double x) { return std::pow(2.0 / M_PI, 0.25) * std::exp(-x * x); });
  CHECK(l2_norm(f) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral derivative of a gaussian") {
  Grid1D g = Grid1D::over(-12.0, 12.0, 256);
  auto f = ComplexField1D::sample(g, [](double x) { return std::exp(-x * x); });
  ComplexField1D df = fft::derivative(f);
  for (int j = 0; j < g.n; ++j) {
    double x = g.point(j);
    CHECK(std::abs(df[j] - complex(-2.0 * x * std::exp(-x * x))) < 1e-9);
  }
}

TEST_CASE("fft frequency layout is signed") {
  CHECK(fft::frequency(0, 8, 1.0) == 0.0);
  CHECK(fft::frequency(1, 8, 1.0) == Catch::Approx(2.0 * M_PI / 8.0));
  CHECK(fft::frequency(7, 8, 1.0) == Catch::Approx(-2.0 * M_PI / 8.0));
}

TEST_CASE("kernel application matches the quadrature sum") {
  Grid1D gr = Grid1D::over(-1.0, 1.0, 17);
  Grid1D gc = Grid1D::over(0.0, 2.0, 23);
  auto K = KernelOperator::sample(
      gr, gc, [](double x, double y) { return complex(x * y, x - y); });
  auto a = ComplexField1D::sample(gc, [](double y) { return complex(std::sin(y), y); });
  ComplexField1D out = apply_kernel(K, a);
  auto w = trapezoid_weights(gc);
  for (int i = 0; i < gr.n; ++i) {
    complex acc(0.0, 0.0);
    for (int j = 0; j < gc.n; ++j)
      acc += w[static_cast<std::size_t>(j)] * K.kernel(i, j) * a[j];
    CHECK(std::abs(out[i] - acc) < 1e-14);
  }
  auto bad = ComplexField1D(gr);
  CHECK_THROWS_AS(apply_kernel(K, bad), dimension_error);
}

TEST_CASE("operator and hilbert-schmidt norms of a unit rank-1 kernel") {
  Grid1D g = Grid1D::over(-10.0, 10.0, 129);
  auto f = ComplexField1D::sample(
      g, [](double x) { return std::pow(2.0 / M_PI, 0.25) * std::exp(-x * x); });
  double nf = l2_norm(f);
  for (auto& v : f.values) v /= nf;
  auto K = KernelOperator::rank_one(f, f, complex(0.7, 0.0));
  CHECK(operator_norm(K) == Catch::Approx(0.7).epsilon(1e-12));
  CHECK(hs_norm(K) == Catch::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("adjoint and composition behave like matrices") {
  Grid1D g = Grid1D::over(-2.0, 2.0, 33);
  auto A = KernelOperator::sample(
      g, g, [](double x, double y) { return complex(std::exp(-x * x - y * y), x * y); });
  auto B = KernelOperator::sample(
      g, g, [](double x, double y) { return complex(std::cos(x + y), 0.1 * y); });
  // adjoint is an involution
  auto Aaa = adjoint(adjoint(A));
  CHECK((Aaa.kernel - A.kernel).cwiseAbs().maxCoeff() < 1e-15);
  // (A o B)* = B* o A*
  auto lhs = adjoint(compose(A, B));
  auto rhs = compose(adjoint(B), adjoint(A));
  CHECK((lhs.kernel - rhs.kernel).cwiseAbs().maxCoeff() < 1e-13);
  // app matrix of the composition is the product of app matrices
  auto AB = compose(A, B);
  CHECK((AB.app_matrix() - A.app_matrix() * B.app_matrix()).cwiseAbs().maxCoeff() <
        1e-13);
}

TEST_CASE("adjoint pairing in the weighted inner product") {
  Grid1D g = Grid1D::over(-2.0, 2.0, 41);
  auto A = KernelOperator::sample(
      g, g, [](double x, double y) { return complex(std::sin(x) * y, x + 0.3); });
  auto a = ComplexField1D::sample(g, [](double x) { return complex(x, std::cos(x)); });
  auto b = ComplexField1D::sample(g, [](double x) { return complex(1.0, x * x); });
  auto w = trapezoid_weights(g);
  auto dot = [&](const ComplexField1D& u, const ComplexField1D& v) {
    complex acc(0.0, 0.0);
    for (int j = 0; j < g.n; ++j)
      acc += w[static_cast<std::size_t>(j)] * std::conj(u[j]) * v[j];
    return acc;
  };
  complex lhs = dot(apply_kernel(A, a), b);
  complex rhs = dot(a, apply_kernel(adjoint(A), b));
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("volterra mask keeps half of the diagonal") {
  Grid1D g = Grid1D::over(0.0, 1.0, 9);
  auto K = KernelOperator::sample(g, g, [](double, double) { return complex(1.0); });
  auto P = volterra_mask(K, Polarity::positive);
  auto N = volterra_mask(K, Polarity::negative);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double expect_p = (i == j) ? 0.5 : (i > j ? 1.0 : 0.0);
      double expect_n = (i == j) ? 0.5 : (i < j ? 1.0 : 0.0);
      CHECK(P.kernel(i, j).real() == expect_p);
      CHECK(N.kernel(i, j).real() == expect_n);
    }
  // masks of the constant kernel sum back to it
  CHECK((P.kernel + N.kernel - K.kernel).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sym matrix roundtrip") {
  Grid1D g = Grid1D::over(-1.0, 3.0, 21);
  auto K = KernelOperator::sample(
      g, g, [](double x, double y) { return complex(x - y, x * y); });
  auto back = from_sym_matrix(g, g, K.sym_matrix());
  CHECK((back.kernel - K.kernel).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("trace is the weighted diagonal sum") {
  Grid1D g = Grid1D::over(0.0, 1.0, 11);
  auto K = KernelOperator::sample(
      g, g, [](double x, double y) { return complex(x + y, 0.0); });
  complex tr = trace(K);
  // int 2x dx on [0,1] = 1, trapezoid is exact for linear integrands
  CHECK(tr.real() == Catch::Approx(1.0).margin(1e-14));
  Grid1D g2 = Grid1D::over(0.0, 1.0, 7);
  KernelOperator R(g, g2);
  CHECK_THROWS_AS(trace(R), dimension_error);
}
