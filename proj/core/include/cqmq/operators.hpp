#pragma once

// Quantum operators on half-form sections over a static Riemannian chart.
//
// A half-form section is stored as a complex coefficient in one of two frames:
//   Frame::Eta  coefficient psi with respect to the parallel factor sqrt(eta);
//   Frame::V    coefficient phi = psi |g|^{1/4} with respect to sqrt(dx^1...dx^n).
// Every operator returns its result in the frame of its input.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cqmq/field.hpp"
#include "cqmq/geometry.hpp"
#include "cqmq/phase_algebra.hpp"

namespace cqmq {

using complex = std::complex<double>;

enum class Frame { Eta, V };

std::string_view frame_name(Frame f) noexcept;

/// Static gauge potential: scalar part A0 and spatial covector A_i.
struct GaugePotential {
  RealField a0;
  std::vector<RealField> a;

  int dim() const noexcept { return static_cast<int>(a.size()); }

  static GaugePotential zero(int dim);
  static GaugePotential from_expressions(const Expression& a0, const std::vector<Expression>& a, int dim);

  std::vector<RealJet> spatial_jets(std::span<const double> p, int order) const;
};

struct HalfFormSection {
  ComplexField coefficient;
  Frame frame = Frame::Eta;

  int dim() const noexcept { return coefficient.dim(); }
  static HalfFormSection from_expression(const Expression& e, int dim, Frame frame = Frame::Eta);
};

HalfFormSection to_vframe(const HalfFormSection& s, const MetricField& m);
HalfFormSection to_etaframe(const HalfFormSection& s, const MetricField& m);
HalfFormSection to_frame(const HalfFormSection& s, Frame frame, const MetricField& m);

struct OperatorResult {
  HalfFormSection section;
  std::string op;
  bool line_connection = true;
  bool halfform_connection = false;

  complex at(std::span<const double> p) const { return section.coefficient.value(p); }
};

/// Jet-level kernels shared by the pointwise operators, the normal-chart
/// evaluation and the grid assembly. To produce an output of order d they
/// need metric jets of order d + 2, gauge jets of order d + 1 and section jets
/// of order d + 2.
namespace local {

/// d_k psi - i A_k psi.
ComplexJet covariant(const ComplexJet& psi, const RealJet& a_k, int k);

/// g^{hk}(D_h D_k psi - Gamma^l_hk D_l psi): line-bundle connection only.
ComplexJet bochner(const LocalGeometry& geo, std::span<const RealJet> a, const ComplexJet& psi);

/// Laplacian of the full tensor-product connection acting on a v-frame
/// coefficient, using the density connection form omega.
ComplexJet full_laplacian_v(const LocalGeometry& geo, std::span<const RealJet> a, const ComplexJet& phi);

/// d_j(f^j sqrt|g|)/sqrt|g| for contravariant components f^j.
RealJet divergence(const LocalGeometry& geo, std::span<const RealJet> up);

/// Scalar curvature in the sign convention r = -r_std.
RealJet scalar_paper(const LocalGeometry& geo);

}  // namespace local

/// (d_i psi - i A_i psi) on the eta-frame coefficient.
std::vector<complex> observed_derivative(const HalfFormSection& s, const GaugePotential& a,
                                         const MetricField& m, std::span<const double> p);

/// Half-form connection (no gauge term) in the frame of s: d_i psi in the eta
/// frame, d_i phi + omega_i phi in the v frame, omega_i = -(1/4) d_i ln|g|.
std::vector<complex> halfform_derivative(const HalfFormSection& s, const MetricField& m,
                                         std::span<const double> p);

/// include_halfform = false: Bochner Laplacian of the coefficient with the
/// line connection only. include_halfform = true: the full tensor-product
/// connection, i.e. the Laplacian of the section.
OperatorResult observed_laplacian(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                                  bool include_halfform);

/// Z_f for a static section; `dpsi_dt`, when given, is the time derivative of
/// the eta-frame coefficient and adds the i f0 d_t term.
OperatorResult lie_operator_Z(const SpecialPhaseFunction& f, const HalfFormSection& s, const GaugePotential& a,
                              const MetricField& m, const ComplexField* dpsi_dt = nullptr);

/// f^ = -(1/2) f0 Lap - i f^j nabla_j + f_scal - (1/2) k f0 r - (i/2) div f.
OperatorResult quantum_operator(const SpecialPhaseFunction& f, const HalfFormSection& s, const GaugePotential& a,
                                const MetricField& m, double k);

/// H0^ = -(1/2) Lap - A0 - (1/2) k r.
OperatorResult energy_operator_cqm(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                                   double k);

/// -(1/2) Bochner(phi) - A0 phi on the v-frame coefficient in the given chart.
/// Chart dependent; energy_operator_gq evaluates this at the pole of normal
/// coordinates.
OperatorResult gq_chart_operator(const HalfFormSection& s, const GaugePotential& a, const MetricField& m);

/// The GQ energy operator at p, evaluated at the pole of the normal chart
/// centred at p and returned in the frame of s (original chart).
complex energy_operator_gq(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                           std::span<const double> p);

/// Coefficient expression in x1..xn and t (eta frame).
class TimeDependentSection {
 public:
  TimeDependentSection(Expression e, int dim);
  static TimeDependentSection parse(std::string_view source, int dim, ParseOptions names = {});

  int dim() const noexcept { return dim_; }
  ComplexField at(double t) const;
  ComplexField time_derivative(double t) const;

 private:
  Expression e_;
  int dim_;
};

/// S psi = d_t psi - i A0 psi - (i/2) Lap psi - (i/2) k r psi (eta frame).
/// With `dpsi_dt` null the section is static.
OperatorResult schrodinger_operator(const HalfFormSection& s, const ComplexField* dpsi_dt,
                                    const GaugePotential& a, const MetricField& m, double k);
complex schrodinger_operator(const TimeDependentSection& s, const GaugePotential& a, const MetricField& m,
                             double k, std::span<const double> p, double t);

}  // namespace cqmq
