#pragma once

// Special phase functions F(x, v) = (1/2) f0 g_ij v^i v^j + f_i v^i + f_scal,
// with constant f0, and the covariant special bracket between them.

#include <span>
#include <string>
#include <vector>

#include "cqmq/field.hpp"
#include "cqmq/geometry.hpp"

namespace cqmq {

struct SpecialPhaseFunction {
  /// Quadratic coefficient (a constant).
  double f0 = 0.0;
  /// Covariant linear coefficients f_i.
  std::vector<RealField> lin;
  /// Velocity-independent part.
  RealField scal;
  std::string label;

  int dim() const noexcept { return scal.dim(); }

  static SpecialPhaseFunction from_expressions(double f0, const std::vector<Expression>& lin,
                                               const Expression& scal, int dim,
                                               std::string label = {});
  /// The coordinate function x^{k+1}.
  static SpecialPhaseFunction coordinate(int dim, int k);
  /// Momentum P_{j+1}: f_i = g_ij, so that f^i = delta^i_j in every chart.
  static SpecialPhaseFunction momentum(const MetricField& m, int j);
  /// H0 = (1/2) g(v, v) - A0.
  static SpecialPhaseFunction free_hamiltonian(int dim, RealField a0 = {});
  static SpecialPhaseFunction zero(int dim);
};

/// Value at the phase-space point (p, v).
double eval(const SpecialPhaseFunction& f, const MetricField& m, std::span<const double> p,
            std::span<const double> v);

/// Covariant special bracket. The result is evaluated lazily; NotSpecial is
/// raised on evaluation if the quadratic or cubic velocity terms fail to cancel.
/// The Poisson sign is fixed so that [[x^i, P_j]] = delta^i_j.
SpecialPhaseFunction special_bracket(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                                     const MetricField& m);

/// Contravariant components f^i = g^{ij} f_j.
std::vector<RealField> raise_index(const std::vector<RealField>& covector, const MetricField& m);

struct TangentLiftField {
  /// Coefficient of d/dt.
  double time = 0.0;
  /// Spatial components -f^i.
  std::vector<RealField> spatial;
};

TangentLiftField tangent_lift(const SpecialPhaseFunction& f, const MetricField& m);

/// Commutator of two time-independent vector fields with constant time parts:
/// the spatial components X^j d_j Y^i - Y^j d_j X^i (time part is zero).
TangentLiftField lie_bracket(const TangentLiftField& x, const TangentLiftField& y);

}  // namespace cqmq
