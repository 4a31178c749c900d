#pragma once

// Lazily evaluated scalar fields on a chart. A field answers "give me your jet
// of order d at p"; operators wrap their inputs and request the extra orders
// they differentiate away, so compositions of operators stay exact.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cqmq/expression.hpp"
#include "cqmq/jet.hpp"

namespace cqmq {

template <class T>
class Field {
 public:
  using Fn = std::function<Jet<T>(std::span<const double>, int)>;

  Field() = default;
  Field(int dim, Fn fn) : dim_(dim), fn_(std::make_shared<const Fn>(std::move(fn))) {}

  static Field constant(int dim, T value) {
    return Field(dim, [dim, value](std::span<const double>, int order) {
      return Jet<T>::constant(dim, order, value);
    });
  }
  /// Field of an expression in x1..x{dim}. Real fields reject the imaginary unit.
  static Field from_expression(const Expression& e, int dim);
  /// The coordinate function x_{k+1}.
  static Field coordinate(int dim, int k) {
    return Field(dim, [dim, k](std::span<const double> p, int order) {
      return Jet<T>::variable(dim, order, k, T(p[static_cast<std::size_t>(k)]));
    });
  }

  bool valid() const noexcept { return static_cast<bool>(fn_); }
  int dim() const noexcept { return dim_; }

  Jet<T> jet(std::span<const double> p, int order) const { return (*fn_)(p, order); }
  T value(std::span<const double> p) const { return jet(p, 0).value(); }

  Field derivative(int k) const {
    auto self = *this;
    return Field(dim_, [self, k](std::span<const double> p, int order) {
      return self.jet(p, order + 1).derivative(k);
    });
  }

  friend Field operator+(const Field& a, const Field& b) {
    return Field(a.dim_, [a, b](std::span<const double> p, int d) { return a.jet(p, d) + b.jet(p, d); });
  }
  friend Field operator-(const Field& a, const Field& b) {
    return Field(a.dim_, [a, b](std::span<const double> p, int d) { return a.jet(p, d) - b.jet(p, d); });
  }
  friend Field operator*(const Field& a, const Field& b) {
    return Field(a.dim_, [a, b](std::span<const double> p, int d) { return a.jet(p, d) * b.jet(p, d); });
  }
  friend Field operator*(T s, const Field& a) {
    return Field(a.dim_, [a, s](std::span<const double> p, int d) { return a.jet(p, d) * s; });
  }
  friend Field operator-(const Field& a) {
    return Field(a.dim_, [a](std::span<const double> p, int d) { return -a.jet(p, d); });
  }

 private:
  int dim_ = 0;
  std::shared_ptr<const Fn> fn_;
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

template <>
RealField RealField::from_expression(const Expression& e, int dim);
template <>
ComplexField ComplexField::from_expression(const Expression& e, int dim);

ComplexField complexify(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
/// Pointwise product of a complex field with a real one.
ComplexField operator*(const RealField& a, const ComplexField& b);

}  // namespace cqmq
