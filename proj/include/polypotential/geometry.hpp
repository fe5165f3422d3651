#pragma once

// Points of R^n, the bracket [x,y], Mobius automorphisms of the unit ball,
// singular-value based matrix norms and the quasiconformal dilatation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "polypotential/errors.hpp"

namespace polypotential {

template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SquareMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Point = PointT<double>;
using SquareMatrix = SquareMatrixT<double>;

/// Tolerance below which [x,y] is treated as a degenerate (boundary-coincident) pair.
inline constexpr double kBracketDegeneracy = 1e-12;

namespace detail {

template <typename A, typename B>
void require_same_dimension(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  if (x.size() != y.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
}

}  // namespace detail

/// North pole N = (0,...,0,1).
template <typename Scalar = double>
PointT<Scalar> north_pole(int n) {
  PointT<Scalar> p = PointT<Scalar>::Zero(n);
  p(n - 1) = Scalar(1);
  return p;
}

/// Squared bracket [x,y]^2 = |x|^2|y|^2 - 2<x,y> + 1, evaluated as
/// |x-y|^2 + (1-|x|^2)(1-|y|^2) which is nonnegative on the closed ball.
template <typename A, typename B>
typename A::Scalar bracket_squared(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  detail::require_same_dimension(x, y);
  using Scalar = typename A::Scalar;
  const Scalar d2 = (x - y).squaredNorm();
  const Scalar v = d2 + (Scalar(1) - x.squaredNorm()) * (Scalar(1) - y.squaredNorm());
  return std::max(v, Scalar(0));
}

template <typename A, typename B>
typename A::Scalar bracket(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  using std::sqrt;
  return sqrt(bracket_squared(x, y));
}

/// The Mobius automorphism phi_x of the ball; phi_x(0) = x, phi_x(x) = 0 and
/// phi_x is an involution.
template <typename A, typename B>
PointT<typename A::Scalar> mobius(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  using Scalar = typename A::Scalar;
  detail::require_same_dimension(x, y);
  const Scalar xx = x.squaredNorm();
  if (!(xx < Scalar(1))) throw DomainError("mobius: |x| must be < 1");
  if (y.squaredNorm() > Scalar(1) + Scalar(1e-12)) throw DomainError("mobius: |y| must be <= 1");
  const Scalar b2 = bracket_squared(x, y);
  if (b2 < Scalar(kBracketDegeneracy * kBracketDegeneracy)) {
    throw DegenerateError("mobius: [x,y] below degeneracy tolerance");
  }
  const Scalar d2 = (x - y).squaredNorm();
  return (d2 * x - (Scalar(1) - xx) * (y - x)) / b2;
}

/// |J_{phi_x}(y)| = (1-|x|^2)^n / [x,y]^{2n}.
template <typename A, typename B>
typename A::Scalar mobius_jacobian_abs(const Eigen::MatrixBase<A>& x,
                                       const Eigen::MatrixBase<B>& y) {
  using Scalar = typename A::Scalar;
  using std::pow;
  detail::require_same_dimension(x, y);
  const Scalar xx = x.squaredNorm();
  if (!(xx < Scalar(1))) throw DomainError("mobius_jacobian_abs: |x| must be < 1");
  const Scalar b2 = bracket_squared(x, y);
  if (b2 < Scalar(kBracketDegeneracy * kBracketDegeneracy)) {
    throw DegenerateError("mobius_jacobian_abs: [x,y] below degeneracy tolerance");
  }
  const int n = static_cast<int>(x.size());
  return pow((Scalar(1) - xx) / b2, n);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> singular_values(
    const Eigen::MatrixBase<Derived>& a) {
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(a);
  return svd.singularValues();
}

/// |A| = sup_{|x|=1} |Ax|, the largest singular value.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return typename Derived::Scalar(0);
  return singular_values(a).maxCoeff();
}

/// l(A) = inf_{|x|=1} |Ax|, the smallest singular value (0 for singular A).
template <typename Derived>
typename Derived::Scalar min_stretch(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return typename Derived::Scalar(0);
  return singular_values(a).minCoeff();
}

template <typename Derived>
typename Derived::Scalar det(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw DimensionError("det: matrix must be square");
  return a.determinant();
}

/// Smallest K >= 1 with |A|^n / K <= det A <= K l(A)^n.
template <typename Derived>
typename Derived::Scalar qc_dilatation(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using std::pow;
  if (a.rows() != a.cols()) throw DimensionError("qc_dilatation: matrix must be square");
  const Scalar j = a.determinant();
  if (!(j > Scalar(0))) throw OrientationError("qc_dilatation: det(A) <= 0");
  const auto sv = singular_values(a);
  const int n = static_cast<int>(a.rows());
  const Scalar outer = pow(sv.maxCoeff(), n) / j;
  const Scalar inner = j / pow(sv.minCoeff(), n);
  return std::max({outer, inner, Scalar(1)});
}

/// Householder reflection H with H e_1 = axis (axis must be a unit vector).
/// Columns of H form an orthonormal frame whose first vector is the axis.
template <typename Derived>
SquareMatrixT<typename Derived::Scalar> frame_with_axis(const Eigen::MatrixBase<Derived>& axis) {
  using Scalar = typename Derived::Scalar;
  const auto n = axis.size();
  SquareMatrixT<Scalar> h = SquareMatrixT<Scalar>::Identity(n, n);
  PointT<Scalar> v = -axis;
  v(0) += Scalar(1);
  const Scalar vv = v.squaredNorm();
  if (vv < Scalar(1e-30)) return h;
  h.noalias() -= (Scalar(2) / vv) * v * v.transpose();
  return h;
}

}  // namespace polypotential
