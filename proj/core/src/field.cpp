#include "cqmq/field.hpp"

#include <string>

namespace cqmq {

namespace {

void check_dimension(const Expression& e, int dim) {
  if (e.max_variable() >= dim)
    throw DomainError("expression " + e.to_string() + " uses x" +
                      std::to_string(e.max_variable() + 1) + " on a " + std::to_string(dim) +
                      "-dimensional chart");
  if (e.uses_time()) throw DomainError("time-dependent expression used as a static field");
}

}  // namespace

template <>
RealField RealField::from_expression(const Expression& e, int dim) {
  check_dimension(e, dim);
  if (e.uses_imaginary_unit())
    throw DomainError("imaginary unit in a real field: " + e.to_string());
  return RealField(dim, [e](std::span<const double> p, int order) { return eval_jet(e, p, order); });
}

template <>
ComplexField ComplexField::from_expression(const Expression& e, int dim) {
  check_dimension(e, dim);
  return ComplexField(dim, [e](std::span<const double> p, int order) {
    return eval_jet_complex(e, p, order);
  });
}

ComplexField complexify(const RealField& f) {
  return ComplexField(f.dim(), [f](std::span<const double> p, int d) { return complexify(f.jet(p, d)); });
}

RealField real_part(const ComplexField& f) {
  return RealField(f.dim(), [f](std::span<const double> p, int d) { return real_part(f.jet(p, d)); });
}

RealField imag_part(const ComplexField& f) {
  return RealField(f.dim(), [f](std::span<const double> p, int d) { return imag_part(f.jet(p, d)); });
}

ComplexField operator*(const RealField& a, const ComplexField& b) {
  return ComplexField(b.dim(), [a, b](std::span<const double> p, int d) {
    return complexify(a.jet(p, d)) * b.jet(p, d);
  });
}

}  // namespace cqmq
