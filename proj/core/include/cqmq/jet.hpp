#pragma once

// Truncated multivariate Taylor expansions ("jets").
//
// A jet of order d in n variables about a point p stores the Taylor
// coefficients a_alpha for all multi-indices |alpha| <= d, with the convention
//
//     f(p + h) = sum_alpha a_alpha h^alpha,      a_alpha = d^alpha f(p) / alpha!
//
// Coefficients are laid out in graded order (all degree-0 terms, then degree 1,
// ...), so truncating to a lower order is a prefix of the coefficient vector.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cqmq/errors.hpp"

namespace cqmq {

/// Index tables shared by all jets with the same (vars, order).
class JetLayout {
 public:
  struct Product {
    std::uint32_t lhs, rhs, out;
  };

  /// Cached, thread-safe factory.
  static std::shared_ptr<const JetLayout> get(int vars, int order);

  int vars() const noexcept { return vars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return degree_.size(); }

  /// Exponent of variable k in the multi-index stored at position idx.
  int exponent(std::size_t idx, int k) const noexcept {
    return exponents_[idx * static_cast<std::size_t>(vars_) + static_cast<std::size_t>(k)];
  }
  std::span<const std::uint8_t> multi_index(std::size_t idx) const noexcept {
    return {exponents_.data() + idx * static_cast<std::size_t>(vars_),
            static_cast<std::size_t>(vars_)};
  }
  int degree(std::size_t idx) const noexcept { return degree_[idx]; }

  /// Position of alpha, or npos when |alpha| > order.
  std::size_t index_of(std::span<const int> alpha) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Number of multi-indices with degree <= d (the prefix length of order d).
  std::size_t prefix(int d) const noexcept;

  /// Position of alpha + e_k for every alpha of degree <= order - 1.
  std::span<const std::uint32_t> raise(int k) const noexcept {
    return raise_[static_cast<std::size_t>(k)];
  }
  /// Position of alpha - e_k, or npos when alpha_k == 0.
  std::size_t lower(std::size_t idx, int k) const noexcept {
    return lower_[idx * static_cast<std::size_t>(vars_) + static_cast<std::size_t>(k)];
  }

  const std::vector<Product>& products() const noexcept { return products_; }

  JetLayout(int vars, int order);

 private:
  int vars_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> encoded_;  // mixed-radix code -> position
  std::vector<std::vector<std::uint32_t>> raise_;
  std::vector<std::size_t> lower_;
  std::vector<Product> products_;
};

template <class T>
class Jet {
 public:
  using value_type = T;
  using LayoutPtr = std::shared_ptr<const JetLayout>;

  Jet() = default;
  Jet(LayoutPtr layout, T constant = T{})
      : layout_(std::move(layout)), c_(layout_->size(), T{}) {
    c_[0] = constant;
  }
  Jet(LayoutPtr layout, std::vector<T> coefficients)
      : layout_(std::move(layout)), c_(std::move(coefficients)) {
    if (c_.size() != layout_->size()) throw std::invalid_argument("jet coefficient count mismatch");
  }

  static Jet constant(int vars, int order, T value) {
    return Jet(JetLayout::get(vars, order), value);
  }
  /// The jet of the coordinate function x_k about a point whose k-th coordinate is `base`.
  static Jet variable(int vars, int order, int k, T base) {
    Jet j(JetLayout::get(vars, order), base);
    if (order >= 1) {
      std::vector<int> alpha(static_cast<std::size_t>(vars), 0);
      alpha[static_cast<std::size_t>(k)] = 1;
      j.c_[j.layout_->index_of(alpha)] = T{1};
    }
    return j;
  }

  bool valid() const noexcept { return static_cast<bool>(layout_); }
  const LayoutPtr& layout() const noexcept { return layout_; }
  int vars() const noexcept { return layout_->vars(); }
  int order() const noexcept { return layout_->order(); }
  std::size_t size() const noexcept { return c_.size(); }

  const T& operator[](std::size_t i) const noexcept { return c_[i]; }
  T& operator[](std::size_t i) noexcept { return c_[i]; }
  const std::vector<T>& coefficients() const noexcept { return c_; }

  T value() const noexcept { return c_[0]; }
  /// Taylor coefficient a_alpha (zero beyond the truncation order).
  T coeff(std::span<const int> alpha) const {
    const auto idx = layout_->index_of(alpha);
    return idx == JetLayout::npos ? T{} : c_[idx];
  }
  T coeff(std::initializer_list<int> alpha) const {
    return coeff(std::span<const int>(alpha.begin(), alpha.size()));
  }
  /// Partial derivative d^alpha f at the base point.
  T derivative_value(std::span<const int> alpha) const;
  T derivative_value(std::initializer_list<int> alpha) const {
    return derivative_value(std::span<const int>(alpha.begin(), alpha.size()));
  }

  Jet truncated(int order) const;
  /// d/dx_k; the result has order one less.
  Jet derivative(int k) const;

  Jet operator-() const {
    Jet r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Jet& operator+=(const Jet& o) { return accumulate(o, T{1}); }
  Jet& operator-=(const Jet& o) { return accumulate(o, T{-1}); }
  Jet& operator*=(const Jet& o) {
    *this = multiply(*this, o);
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = multiply(*this, o.reciprocal());
    return *this;
  }
  Jet& operator+=(const T& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const T& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator/=(const T& s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }
  friend Jet operator/(const Jet& a, const Jet& b) { return multiply(a, b.reciprocal()); }
  friend Jet operator+(Jet a, const T& s) { return a += s; }
  friend Jet operator+(const T& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const T& s) { return a -= s; }
  friend Jet operator-(const T& s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const T& s) { return a /= s; }
  friend Jet operator/(const T& s, const Jet& a) { return a.reciprocal() * s; }

  /// 1/f; DomainError when the constant term vanishes.
  Jet reciprocal() const;

  /// sum_k coeffs[k] (f - f(p))^k, i.e. g(f) for g with Taylor coefficients `coeffs` at f(p).
  Jet compose_series(std::span<const T> coeffs) const;

  static Jet multiply(const Jet& a, const Jet& b);

 private:
  Jet& accumulate(const Jet& o, T sign);

  LayoutPtr layout_;
  std::vector<T> c_;
};

using RealJet = Jet<double>;
using ComplexJet = Jet<std::complex<double>>;

// Elementary functions on jets. Real versions raise DomainError outside the
// real domain (log/sqrt of non-positive values); complex versions use the
// principal branch and only reject zero.
template <class T> Jet<T> exp(const Jet<T>& x);
template <class T> Jet<T> log(const Jet<T>& x);
template <class T> Jet<T> sin(const Jet<T>& x);
template <class T> Jet<T> cos(const Jet<T>& x);
template <class T> Jet<T> tan(const Jet<T>& x);
template <class T> Jet<T> sinh(const Jet<T>& x);
template <class T> Jet<T> cosh(const Jet<T>& x);
template <class T> Jet<T> sqrt(const Jet<T>& x);
template <class T> Jet<T> pow(const Jet<T>& x, int n);
/// x^a for real a; requires a positive (real) or non-zero (complex) base value.
template <class T> Jet<T> pow(const Jet<T>& x, double a);

ComplexJet complexify(const RealJet& x);
RealJet real_part(const ComplexJet& x);
RealJet imag_part(const ComplexJet& x);

/// Substitutes x - p = delta(y) into a jet in x. `deltas` are jets in y with
/// zero constant terms, one per variable of `outer`. The result has order
/// min(outer.order(), deltas order).
template <class T>
Jet<T> compose(const Jet<T>& outer, std::span<const RealJet> deltas);

/// Drops the trailing variables of a jet (sets their displacements to zero).
template <class T>
Jet<T> restrict_to_leading(const Jet<T>& x, int vars);

/// Largest absolute coefficient.
template <class T>
double max_abs(const Jet<T>& x);

}  // namespace cqmq
