#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ist/grid.hpp"
#include "ist/quadrature.hpp"

namespace ist {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Polarity { positive, negative };  // support x >= y resp. x <= y

/// Discretized Hilbert-Schmidt integral operator: kernel samples k(xi_i, eta_j)
/// on a tensor grid plus trapezoid quadrature weights on the column grid.
/// Application is (K a)(xi_i) = sum_j w_j k_ij a_j.
struct KernelOperator {
  Grid1D row_grid;
  Grid1D col_grid;
  Matrix kernel;
  Eigen::VectorXd weights;  // per column-grid point

  KernelOperator() = default;
  KernelOperator(Grid1D rg, Grid1D cg)
      : row_grid(rg), col_grid(cg), kernel(Matrix::Zero(rg.n, cg.n)) {
    auto w = trapezoid_weights(cg);
    weights = Eigen::Map<Eigen::VectorXd>(w.data(), cg.n);
  }
  KernelOperator(Grid1D rg, Grid1D cg, Matrix k) : KernelOperator(rg, cg) {
    if (k.rows() != rg.n || k.cols() != cg.n)
      throw dimension_error("KernelOperator: kernel shape does not match grids");
    kernel = std::move(k);
  }

  static KernelOperator zero(Grid1D rg, Grid1D cg) { return KernelOperator(rg, cg); }

  /// Separable (rank-1) kernel f(xi) g(eta).
  static KernelOperator rank_one(const ComplexField1D& f, const ComplexField1D& g,
                                 complex scale = complex(1.0, 0.0)) {
    KernelOperator op(f.grid, g.grid);
    for (int i = 0; i < f.grid.n; ++i)
      for (int j = 0; j < g.grid.n; ++j) op.kernel(i, j) = scale * f[i] * g[j];
    return op;
  }

  template <typename F>
  static KernelOperator sample(Grid1D rg, Grid1D cg, F&& f) {
    KernelOperator op(rg, cg);
    for (int i = 0; i < rg.n; ++i)
      for (int j = 0; j < cg.n; ++j) op.kernel(i, j) = complex(f(rg.point(i), cg.point(j)));
    return op;
  }

  bool square() const { return row_grid == col_grid; }

  Eigen::VectorXd row_weights() const {
    auto w = trapezoid_weights(row_grid);
    return Eigen::Map<Eigen::VectorXd>(w.data(), row_grid.n);
  }

  /// Application matrix: composition of operators is the product of these.
  Matrix app_matrix() const { return kernel * weights.asDiagonal(); }

  /// diag(sqrt(w_row)) K diag(sqrt(w_col)); the L2 -> L2 picture where
  /// adjoints are conjugate transposes and the operator norm is sigma_max.
  Matrix sym_matrix() const {
    return row_weights().cwiseSqrt().asDiagonal() * kernel *
           weights.cwiseSqrt().array().matrix().asDiagonal();
  }
};

/// Kernel built back from a symmetrized matrix (inverse of sym_matrix).
inline KernelOperator from_sym_matrix(Grid1D rg, Grid1D cg, const Matrix& sym) {
  KernelOperator op(rg, cg);
  Eigen::VectorXd srw = op.row_weights().cwiseSqrt().cwiseInverse();
  Eigen::VectorXd scw = op.weights.cwiseSqrt().cwiseInverse();
  op.kernel = srw.asDiagonal() * sym * scw.asDiagonal();
  return op;
}

/// L2 operator norm: largest singular value of the symmetrically weighted matrix.
inline double operator_norm(const KernelOperator& op) {
  if (op.kernel.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(op.sym_matrix());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// Discrete Hilbert-Schmidt norm sqrt(sum_ij w_i w_j |k_ij|^2).
inline double hs_norm(const KernelOperator& op) {
  double acc = 0.0;
  Eigen::VectorXd rw = op.row_weights();
  for (int i = 0; i < op.row_grid.n; ++i)
    for (int j = 0; j < op.col_grid.n; ++j)
      acc += rw(i) * op.weights(j) * std::norm(op.kernel(i, j));
  return std::sqrt(acc);
}

inline ComplexField1D apply_kernel(const KernelOperator& op, const ComplexField1D& a) {
  if (!(a.grid == op.col_grid))
    throw dimension_error("apply_kernel: field grid does not match col_grid");
  Eigen::Map<const Vector> av(a.values.data(), a.grid.n);
  Vector out = op.kernel * (op.weights.asDiagonal() * av);
  ComplexField1D res(op.row_grid);
  Eigen::Map<Vector>(res.values.data(), op.row_grid.n) = out;
  return res;
}

/// Discrete trace sum_i w_i k(x_i, x_i); defined on square operators.
inline complex trace(const KernelOperator& op) {
  if (!op.square()) throw dimension_error("trace: operator is not square");
  complex acc(0.0, 0.0);
  for (int i = 0; i < op.row_grid.n; ++i) acc += op.weights(i) * op.kernel(i, i);
  return acc;
}

/// Adjoint with respect to the weighted L2 inner product: kernel conj(k(y,x)).
inline KernelOperator adjoint(const KernelOperator& op) {
  KernelOperator out(op.col_grid, op.row_grid);
  out.kernel = op.kernel.adjoint();
  return out;
}

/// Operator composition (a o b) with trapezoid quadrature in the middle variable.
inline KernelOperator compose(const KernelOperator& a, const KernelOperator& b) {
  if (!(a.col_grid == b.row_grid))
    throw dimension_error("compose: inner grids do not match");
  KernelOperator out(a.row_grid, b.col_grid);
  out.kernel = a.kernel * (a.weights.asDiagonal() * b.kernel);
  return out;
}

/// theta(x-y) (positive polarity) or theta(y-x) mask with 1/2 on the diagonal.
inline KernelOperator volterra_mask(const KernelOperator& op, Polarity pol) {
  if (!op.square()) throw dimension_error("volterra_mask: operator is not square");
  KernelOperator out = op;
  for (int i = 0; i < op.row_grid.n; ++i)
    for (int j = 0; j < op.col_grid.n; ++j) {
      double m;
      if (i == j)
        m = 0.5;
      else if (pol == Polarity::positive)
        m = (i > j) ? 1.0 : 0.0;
      else
        m = (i < j) ? 1.0 : 0.0;
      out.kernel(i, j) *= m;
    }
  return out;
}

inline KernelOperator scaled(const KernelOperator& op, complex c) {
  KernelOperator out = op;
  out.kernel *= c;
  return out;
}

}  // namespace ist
