#pragma once

#include <Eigen/Cholesky>
#include <cmath>

#include "ist/kernel.hpp"
#include "ist/quadrature.hpp"

namespace ist {

/// Unit-normalized rank-1 scattering data: the kernel is k * f_hat(xi) g_hat(eta).
struct Rank1Data {
  double k = 0.0;
  ComplexField1D f_hat;  // xi axis
  ComplexField1D g_hat;  // eta axis

  void validate(double tol = 1e-8) const {
    if (!(k >= 0.0 && k < 1.0))
      throw precondition_error("Rank1Data: coupling k must lie in [0,1)");
    if (std::abs(l2_norm(f_hat) - 1.0) > tol || std::abs(l2_norm(g_hat) - 1.0) > tol)
      throw precondition_error("Rank1Data: factors must have unit L2 norm");
  }

  /// Normalizes the factors and returns validated data.
  static Rank1Data make(double k, ComplexField1D f, ComplexField1D g) {
    double nf = l2_norm(f), ng = l2_norm(g);
    if (nf == 0.0 || ng == 0.0)
      throw precondition_error("Rank1Data: factors must be nonzero");
    for (auto& v : f.values) v /= nf;
    for (auto& v : g.values) v /= ng;
    Rank1Data d{k, std::move(f), std::move(g)};
    d.validate();
    return d;
  }

  KernelOperator kernel() const {
    return KernelOperator::rank_one(f_hat, g_hat, complex(k, 0.0));
  }
};

struct ScatteringMatrix {
  KernelOperator F11;  // eta x eta, Volterra positive polarity
  KernelOperator F12;  // eta x xi
  KernelOperator F21;  // xi x eta
  KernelOperator F22;  // xi x xi, Volterra positive polarity
};

namespace detail {

inline void check_coupling(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw precondition_error("coupling k must lie in [0,1)");
}

}  // namespace detail

/// The norm-preserving map A_k: f -> sqrt(1-k^2) f(x) / (1 - k^2/||f||^2 * F(x))
/// with F the left cumulative of |f|^2. Maps 0 to 0.
inline ComplexField1D apply_Ak(const ComplexField1D& f, double k) {
  detail::check_coupling(k);
  double nsq = l2_norm_sq(f);
  if (nsq == 0.0) return f;
  RealField1D cum = cumulative_abs2(f, Direction::from_left);
  double scale = std::sqrt(1.0 - k * k);
  ComplexField1D out(f.grid);
  for (int j = 0; j < f.grid.n; ++j) {
    double den = 1.0 - (k * k / nsq) * cum[j];
    if (std::abs(den) < 1e-12)
      throw singularity_error("apply_Ak: vanishing denominator");
    out[j] = scale * f[j] / den;
  }
  return out;
}

/// Inverse map, Eq. with the right cumulative of |F|^2.
inline ComplexField1D apply_Ak_inv(const ComplexField1D& F, double k) {
  detail::check_coupling(k);
  double nsq = l2_norm_sq(F);
  if (nsq == 0.0) return F;
  RealField1D cum = cumulative_abs2(F, Direction::from_right);
  double scale = std::sqrt(1.0 - k * k);
  ComplexField1D out(F.grid);
  for (int j = 0; j < F.grid.n; ++j) {
    double den = 1.0 - (k * k / nsq) * cum[j];
    if (std::abs(den) < 1e-12)
      throw singularity_error("apply_Ak_inv: vanishing denominator");
    out[j] = scale * F[j] / den;
  }
  return out;
}

/// Resolvent of a rank-1 operator: (I-K)^{-1} - I = K / (1 - tr K).
/// Exact in the discrete algebra (Sherman-Morrison with the quadrature trace).
inline KernelOperator resolvent_rank1(const KernelOperator& K) {
  complex tr = trace(K);
  complex den = complex(1.0, 0.0) - tr;
  if (std::abs(den) < 1e-12)
    throw singularity_error("resolvent_rank1: 1 - tr K vanishes");
  return scaled(K, complex(1.0, 0.0) / den);
}

namespace detail {

/// Extracts separable factors f_i, g_j from a rank-1 kernel matrix by pivoting
/// on its largest entry. Returns false when the kernel is identically zero.
inline bool separable_factors(const Matrix& kern, std::vector<complex>& f,
                              std::vector<complex>& g) {
  Eigen::Index pi = 0, pj = 0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < kern.rows(); ++i)
    for (Eigen::Index j = 0; j < kern.cols(); ++j)
      if (std::abs(kern(i, j)) > best) {
        best = std::abs(kern(i, j));
        pi = i;
        pj = j;
      }
  if (best == 0.0) return false;
  f.resize(static_cast<std::size_t>(kern.rows()));
  g.resize(static_cast<std::size_t>(kern.cols()));
  complex pivot = kern(pi, pj);
  for (Eigen::Index i = 0; i < kern.rows(); ++i)
    f[static_cast<std::size_t>(i)] = kern(i, pj);
  for (Eigen::Index j = 0; j < kern.cols(); ++j)
    g[static_cast<std::size_t>(j)] = kern(pi, j) / pivot;
  return true;
}

/// Exact correction kernel H for the discrete Volterra resolvent:
/// with K+ the positive-polarity mask (1/2 on the diagonal) of phi_i gamma_j,
/// (I - s K+)^{-1} = I + s H. The running products are the quadrature-exact
/// analogue of the exponential of the running trace.
inline Matrix volterra_resolvent_correction(const std::vector<complex>& phi,
                                            const std::vector<complex>& gamma,
                                            const Eigen::VectorXd& w, double s) {
  const int n = static_cast<int>(phi.size());
  std::vector<complex> beta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    beta[static_cast<std::size_t>(i)] = s * w(i) * phi[static_cast<std::size_t>(i)] *
                                        gamma[static_cast<std::size_t>(i)];
  // prefix[i] = prod_{s<i} (1 + beta_s/2) / (1 - beta_s/2)
  std::vector<complex> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = complex(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    complex num = complex(1.0, 0.0) + 0.5 * beta[static_cast<std::size_t>(i)];
    complex den = complex(1.0, 0.0) - 0.5 * beta[static_cast<std::size_t>(i)];
    if (std::abs(den) < 1e-12)
      throw singularity_error("volterra inverse: degenerate diagonal panel");
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] * num / den;
  }
  Matrix H = Matrix::Zero(n, n);
  std::vector<complex> fh(static_cast<std::size_t>(n)), gh(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    complex den = complex(1.0, 0.0) - 0.5 * beta[static_cast<std::size_t>(i)];
    fh[static_cast<std::size_t>(i)] =
        phi[static_cast<std::size_t>(i)] * prefix[static_cast<std::size_t>(i)] / den;
    gh[static_cast<std::size_t>(i)] = gamma[static_cast<std::size_t>(i)] /
                                      (prefix[static_cast<std::size_t>(i) + 1] * den);
    H(i, i) = 0.5 * phi[static_cast<std::size_t>(i)] *
              gamma[static_cast<std::size_t>(i)] / den;
  }
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j)
      H(i, j) = fh[static_cast<std::size_t>(i)] * gh[static_cast<std::size_t>(j)];
  return H;
}

}  // namespace detail

enum class VolterraForm { plain, predivided };

namespace detail {

/// Row factor f(x) / (1 - T(x)) with T the left running trace of f*g.
inline ComplexField1D predivided_row_factor(const ComplexField1D& f,
                                            const ComplexField1D& g) {
  if (!(f.grid == g.grid))
    throw dimension_error("predivided operator: grids differ");
  std::vector<complex> T(static_cast<std::size_t>(f.grid.n), complex(0.0, 0.0));
  for (int j = 1; j < f.grid.n; ++j)
    T[static_cast<std::size_t>(j)] =
        T[static_cast<std::size_t>(j) - 1] +
        0.5 * f.grid.dx * (f[j - 1] * g[j - 1] + f[j] * g[j]);
  ComplexField1D fd(f.grid);
  for (int j = 0; j < f.grid.n; ++j) {
    complex den = complex(1.0, 0.0) - T[static_cast<std::size_t>(j)];
    if (std::abs(den) < 1e-12)
      throw singularity_error("predivided operator: 1 - T(x) vanishes");
    fd[j] = f[j] / den;
  }
  return fd;
}

}  // namespace detail

/// The Eq.(4.7)-style operator f(x) g(y) theta(x-y) / (1 - T(x)) with T the
/// left running trace of f*g.
inline KernelOperator volterra_predivided_operator(const ComplexField1D& f,
                                                   const ComplexField1D& g) {
  return volterra_mask(
      KernelOperator::rank_one(detail::predivided_row_factor(f, g), g),
      Polarity::positive);
}

/// Correction kernel of the Volterra inverses of Lemma 4.3 / 4.4 type:
///  - plain:      (I - K+)^{-1} = I + Khat, K+ = mask(f g)
///  - predivided: (I + K+)^{-1} = I - Khat, K+ = mask(f g / (1 - T(x)))
/// The returned kernel carries the mask (including its diagonal) baked in, and
/// inverts the discrete weighted matrix exactly.
inline KernelOperator volterra_inverse_rank1(const ComplexField1D& f,
                                             const ComplexField1D& g,
                                             VolterraForm form) {
  if (!(f.grid == g.grid))
    throw dimension_error("volterra_inverse_rank1: grids differ");
  KernelOperator out(f.grid, f.grid);
  if (form == VolterraForm::plain) {
    out.kernel = detail::volterra_resolvent_correction(f.values, g.values,
                                                       out.weights, +1.0);
  } else {
    ComplexField1D fd = detail::predivided_row_factor(f, g);
    out.kernel = detail::volterra_resolvent_correction(fd.values, g.values,
                                                       out.weights, -1.0);
  }
  return out;
}

/// Extracts rank-1 data from an (approximately) separable kernel: the leading
/// singular triple of the symmetrized matrix gives k and the unit factors.
/// The phase convention makes the largest entry of f_hat real positive.
inline Rank1Data rank1_from_kernel(const KernelOperator& K) {
  Eigen::BDCSVD<Matrix> svd(K.sym_matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  double k = svd.singularValues()(0);
  if (k == 0.0)
    throw precondition_error("rank1_from_kernel: kernel is identically zero");
  Vector uvec = svd.matrixU().col(0);
  Vector vvec = svd.matrixV().col(0);
  std::vector<double> wr = trapezoid_weights(K.row_grid);
  ComplexField1D f(K.row_grid), g(K.col_grid);
  for (int i = 0; i < K.row_grid.n; ++i)
    f[i] = uvec(i) / std::sqrt(wr[static_cast<std::size_t>(i)]);
  for (int j = 0; j < K.col_grid.n; ++j)
    g[j] = std::conj(vvec(j)) / std::sqrt(K.weights(j));
  Eigen::Index imax = 0;
  uvec.cwiseAbs().maxCoeff(&imax);
  complex phase = f[static_cast<int>(imax)] / std::abs(f[static_cast<int>(imax)]);
  for (auto& v : f.values) v /= phase;
  for (auto& v : g.values) v *= phase;
  return Rank1Data::make(std::min(k, std::nextafter(1.0, 0.0)), std::move(f),
                         std::move(g));
}

struct Factorization {
  KernelOperator A_plus;   // support x >= y
  KernelOperator A_minus;  // support y > x
  KernelOperator B_plus;   // support x > y
  KernelOperator B_minus;  // support y >= x
};

/// Two-sided Volterra factorization of I - K for a rank-1 K with ||K|| < 1:
///   I - K = (I + A+)^{-1} (I + A-)^{-1} = (I + B-)^{-1} (I + B+)^{-1}.
/// The running denominators 1/(1 - tr K Q_x) resp. 1/(1 - tr K P_x) are
/// realized by their quadrature-exact recursions, so the factorization holds
/// to rounding error in the discrete weighted algebra.
inline Factorization factorize_rank1(const KernelOperator& K) {
  if (!K.square()) throw dimension_error("factorize_rank1: operator is not square");
  if (operator_norm(K) >= 1.0)
    throw precondition_error("factorize_rank1: operator norm must be < 1");
  const int n = K.row_grid.n;
  Factorization out{KernelOperator(K.row_grid, K.col_grid),
                    KernelOperator(K.row_grid, K.col_grid),
                    KernelOperator(K.row_grid, K.col_grid),
                    KernelOperator(K.row_grid, K.col_grid)};
  std::vector<complex> f, g;
  if (!detail::separable_factors(K.kernel, f, g)) return out;  // K = 0

  std::vector<complex> a(static_cast<std::size_t>(n));
  complex tr(0.0, 0.0);
  for (int s = 0; s < n; ++s) {
    a[static_cast<std::size_t>(s)] =
        K.weights(s) * f[static_cast<std::size_t>(s)] * g[static_cast<std::size_t>(s)];
    tr += a[static_cast<std::size_t>(s)];
  }
  complex one(1.0, 0.0);
  if (std::abs(one - tr) < 1e-12)
    throw singularity_error("factorize_rank1: 1 - tr K vanishes");
  complex c = one / (one - tr);

  // e[i] is the discrete 1/(1 - tr K Q_x) at x_i, built backwards from c.
  std::vector<complex> e(static_cast<std::size_t>(n));
  e[static_cast<std::size_t>(n) - 1] = c;
  for (int s = n - 1; s >= 1; --s) {
    complex den = one + a[static_cast<std::size_t>(s)] * e[static_cast<std::size_t>(s)];
    if (std::abs(den) < 1e-12)
      throw singularity_error("factorize_rank1: degenerate running denominator");
    e[static_cast<std::size_t>(s) - 1] = e[static_cast<std::size_t>(s)] / den;
  }
  // eb[i] is the discrete 1/(1 - tr K P_x) ahead of x_i, built forwards.
  std::vector<complex> eb(static_cast<std::size_t>(n) + 1);
  eb[0] = c;
  for (int s = 0; s < n; ++s) {
    complex den = one + a[static_cast<std::size_t>(s)] * eb[static_cast<std::size_t>(s)];
    if (std::abs(den) < 1e-12)
      throw singularity_error("factorize_rank1: degenerate running denominator");
    eb[static_cast<std::size_t>(s) + 1] = eb[static_cast<std::size_t>(s)] / den;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i >= j)
        out.A_plus.kernel(i, j) =
            f[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)] *
            g[static_cast<std::size_t>(j)];
      if (j > i)
        out.A_minus.kernel(i, j) =
            f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)] *
            e[static_cast<std::size_t>(j) - 1];
      if (i > j)
        out.B_plus.kernel(i, j) =
            f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)] *
            eb[static_cast<std::size_t>(j) + 1];
      if (j >= i)
        out.B_minus.kernel(i, j) =
            f[static_cast<std::size_t>(i)] * eb[static_cast<std::size_t>(i)] *
            g[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

namespace detail {

/// Lower factor of the Cholesky split I - K = (I + L)(I + L*) for a
/// Hermitian K with ||K|| < 1, returned as a kernel operator.
inline KernelOperator cholesky_volterra_factor(const KernelOperator& K) {
  Matrix sym = Matrix::Identity(K.row_grid.n, K.col_grid.n) - K.sym_matrix();
  sym = 0.5 * (sym + sym.adjoint()).eval();
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success)
    throw singularity_error("scattering_elements: I - K is not positive definite");
  Matrix L = llt.matrixL();
  L -= Matrix::Identity(K.row_grid.n, K.col_grid.n);
  return from_sym_matrix(K.row_grid, K.col_grid, L);
}

}  // namespace detail

/// All four blocks of the scattering operator S = I + F for rank-1 data.
/// F21 and F12 are the explicit rank-1 kernels; the Volterra diagonal blocks
/// are the positive-polarity factors of I - F12 F12* resp. I - F21 F21*,
/// which realizes the factorization identities of the scattering operator
/// exactly on the grid (their kernels converge to the closed forms in g and f).
inline ScatteringMatrix scattering_elements(const Rank1Data& data) {
  data.validate();
  ComplexField1D Af = apply_Ak(data.f_hat, data.k);
  ComplexField1D Aig = apply_Ak_inv(data.g_hat, data.k);
  ComplexField1D AfC(Af.grid), AigC(Aig.grid);
  for (int j = 0; j < Af.grid.n; ++j) AfC[j] = std::conj(Af[j]);
  for (int j = 0; j < Aig.grid.n; ++j) AigC[j] = std::conj(Aig[j]);

  ScatteringMatrix S;
  S.F21 = KernelOperator::rank_one(data.f_hat, data.g_hat, complex(data.k, 0.0));
  S.F12 = KernelOperator::rank_one(AigC, AfC, complex(-data.k, 0.0));
  S.F11 = detail::cholesky_volterra_factor(compose(S.F12, adjoint(S.F12)));
  S.F22 = detail::cholesky_volterra_factor(compose(S.F21, adjoint(S.F21)));
  return S;
}

}  // namespace ist
