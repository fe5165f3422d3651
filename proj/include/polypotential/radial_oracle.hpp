#pragma once

// Exact calculus on radial polynomials p(t) = sum_k a_k t^k, t = |x|^2.
// Coefficients are templated; use boost::multiprecision::cpp_rational for
// bit-exact results or double for quick evaluation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <utility>
#include <vector>

#include "polypotential/errors.hpp"

namespace polypotential {

using Rational = boost::multiprecision::cpp_rational;

template <typename Coeff>
class RadialPoly {
 public:
  RadialPoly() = default;
  RadialPoly(int n, std::vector<Coeff> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
    if (n_ < 3) throw DomainError("RadialPoly: n must be >= 3");
    trim();
  }

  static RadialPoly constant(int n, const Coeff& c) { return RadialPoly(n, {c}); }
  static RadialPoly monomial(int n, int k, const Coeff& c = Coeff(1)) {
    std::vector<Coeff> a(static_cast<std::size_t>(k) + 1, Coeff(0));
    a[k] = c;
    return RadialPoly(n, std::move(a));
  }

  int dimension() const { return n_; }
  /// Degree in t; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  Coeff coeff(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : Coeff(0);
  }
  bool is_zero() const { return coeffs_.empty(); }

  template <typename T>
  T evaluate(const T& t) const {
    T v(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + static_cast<T>(*it);
    return v;
  }

  RadialPoly operator+(const RadialPoly& o) const {
    check(o);
    std::vector<Coeff> a(std::max(coeffs_.size(), o.coeffs_.size()), Coeff(0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k] += coeffs_[k];
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) a[k] += o.coeffs_[k];
    return RadialPoly(n_, std::move(a));
  }
  RadialPoly operator-(const RadialPoly& o) const { return *this + o * Coeff(-1); }
  RadialPoly operator*(const Coeff& c) const {
    std::vector<Coeff> a = coeffs_;
    for (auto& v : a) v *= c;
    return RadialPoly(n_, std::move(a));
  }
  RadialPoly operator*(const RadialPoly& o) const {
    check(o);
    if (is_zero() || o.is_zero()) return RadialPoly(n_, {});
    std::vector<Coeff> a(coeffs_.size() + o.coeffs_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j) a[i + j] += coeffs_[i] * o.coeffs_[j];
    return RadialPoly(n_, std::move(a));
  }
  bool operator==(const RadialPoly& o) const { return n_ == o.n_ && coeffs_ == o.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == Coeff(0)) coeffs_.pop_back();
  }
  void check(const RadialPoly& o) const {
    if (n_ != o.n_) throw DimensionError("RadialPoly: dimension mismatch");
  }

  int n_ = 3;
  std::vector<Coeff> coeffs_;
};

/// Delta t^k = 2k(2k + n - 2) t^{k-1}.
template <typename Coeff>
RadialPoly<Coeff> laplacian(const RadialPoly<Coeff>& p) {
  const int n = p.dimension();
  std::vector<Coeff> a;
  for (int k = 1; k <= p.degree(); ++k) {
    a.push_back(p.coeff(k) * Coeff(2 * k) * Coeff(2 * k + n - 2));
  }
  return RadialPoly<Coeff>(n, std::move(a));
}

/// The Green operator on radial polynomials:
/// G[t^k] = (1 - t^{k+1}) / ((2k + 2)(2k + n)), so that Delta G[p] = -p and G[p](1) = 0.
template <typename Coeff>
RadialPoly<Coeff> green_apply(const RadialPoly<Coeff>& p) {
  const int n = p.dimension();
  std::vector<Coeff> a(static_cast<std::size_t>(std::max(p.degree(), -1) + 2), Coeff(0));
  for (int k = 0; k <= p.degree(); ++k) {
    const Coeff c = p.coeff(k) / (Coeff(2 * k + 2) * Coeff(2 * k + n));
    a[0] += c;
    a[k + 1] -= c;
  }
  return RadialPoly<Coeff>(n, std::move(a));
}

/// f = M (1 - t^{m-1}) with its Dirichlet chain phi_k = Delta^k f (phi_k
/// restricted to t = 1 for k < m, the full polynomial for k = m).
template <typename Coeff>
struct PolyharmonicOracle {
  RadialPoly<Coeff> f;
  std::vector<Coeff> boundary;  ///< phi_0 .. phi_{m-1}
  RadialPoly<Coeff> source;     ///< phi_m
  std::vector<RadialPoly<Coeff>> laplacians;  ///< Delta^k f, k = 0..m
};

template <typename Coeff>
PolyharmonicOracle<Coeff> polyharmonic_oracle(int n, int m, const Coeff& M) {
  if (n < 3) throw DomainError("polyharmonic_oracle: n must be >= 3");
  if (m < 2) throw DomainError("polyharmonic_oracle: m must be >= 2");
  PolyharmonicOracle<Coeff> o;
  o.f = RadialPoly<Coeff>::constant(n, M) - RadialPoly<Coeff>::monomial(n, m - 1, M);
  o.laplacians.push_back(o.f);
  for (int k = 1; k <= m; ++k) o.laplacians.push_back(laplacian(o.laplacians.back()));
  for (int k = 0; k < m; ++k) o.boundary.push_back(o.laplacians[k].evaluate(Coeff(1)));
  o.source = o.laplacians[m];
  return o;
}

/// Radial solution of the chain with constant boundary data c_0..c_{m-1} and
/// polynomial source: c_0 + sum_k (-1)^k G^k[c_k] + (-1)^m G^m[source].
template <typename Coeff>
RadialPoly<Coeff> represent(int n, const std::vector<Coeff>& boundary, const RadialPoly<Coeff>& source) {
  const int m = static_cast<int>(boundary.size());
  RadialPoly<Coeff> f = RadialPoly<Coeff>::constant(n, m > 0 ? boundary[0] : Coeff(0));
  for (int k = 1; k <= m; ++k) {
    RadialPoly<Coeff> layer = k < m ? RadialPoly<Coeff>::constant(n, boundary[k]) : source;
    for (int j = 0; j < k; ++j) layer = green_apply(layer);
    f = f + layer * Coeff(k % 2 == 0 ? 1 : -1);
  }
  return f;
}

}  // namespace polypotential
