#include "cqmq/operators.hpp"

#include <stdexcept>
#include <utility>

namespace cqmq {

namespace {

constexpr complex kI{0.0, 1.0};

ComplexJet cx(const RealJet& x) { return complexify(x); }

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

void require_dims(const HalfFormSection& s, const GaugePotential& a, const MetricField& m) {
  if (s.dim() != m.dim() || a.dim() != m.dim())
    throw std::invalid_argument("section, gauge and metric dimensions differ");
}

// f^j as jets, from covariant components and the inverse metric.
std::vector<RealJet> contravariant(const SpecialPhaseFunction& f, const LocalGeometry& geo,
                                   std::span<const double> p, int order) {
  const int n = geo.dim();
  std::vector<RealJet> low;
  for (int j = 0; j < n; ++j) low.push_back(f.lin[sz(j)].jet(p, order));
  std::vector<RealJet> up;
  for (int i = 0; i < n; ++i) {
    RealJet s = RealJet::constant(n, order, 0.0);
    for (int j = 0; j < n; ++j) s += geo.ginv(i, j) * low[sz(j)];
    up.push_back(std::move(s));
  }
  return up;
}

}  // namespace

std::string_view frame_name(Frame f) noexcept { return f == Frame::Eta ? "eta" : "v"; }

// ---------------------------------------------------------------------------
// Data types

GaugePotential GaugePotential::zero(int dim) {
  GaugePotential g;
  g.a0 = RealField::constant(dim, 0.0);
  g.a.assign(sz(dim), RealField::constant(dim, 0.0));
  return g;
}

GaugePotential GaugePotential::from_expressions(const Expression& a0, const std::vector<Expression>& a, int dim) {
  if (a.size() != sz(dim)) throw DomainError("gauge potential needs one spatial component per coordinate");
  GaugePotential g;
  g.a0 = RealField::from_expression(a0, dim);
  for (const auto& e : a) g.a.push_back(RealField::from_expression(e, dim));
  return g;
}

std::vector<RealJet> GaugePotential::spatial_jets(std::span<const double> p, int order) const {
  std::vector<RealJet> out;
  out.reserve(a.size());
  for (const auto& c : a) out.push_back(c.jet(p, order));
  return out;
}

HalfFormSection HalfFormSection::from_expression(const Expression& e, int dim, Frame frame) {
  return HalfFormSection{ComplexField::from_expression(e, dim), frame};
}

HalfFormSection to_vframe(const HalfFormSection& s, const MetricField& m) {
  if (s.frame == Frame::V) return s;
  const int n = m.dim();
  auto c = s.coefficient;
  return HalfFormSection{ComplexField(n, [c, m, n](std::span<const double> p, int d) {
                           LocalGeometry geo(n, m.jets(p, d));
                           return cx(geo.quarter()) * c.jet(p, d);
                         }),
                         Frame::V};
}

HalfFormSection to_etaframe(const HalfFormSection& s, const MetricField& m) {
  if (s.frame == Frame::Eta) return s;
  const int n = m.dim();
  auto c = s.coefficient;
  return HalfFormSection{ComplexField(n, [c, m, n](std::span<const double> p, int d) {
                           LocalGeometry geo(n, m.jets(p, d));
                           return cx(geo.inv_quarter()) * c.jet(p, d);
                         }),
                         Frame::Eta};
}

HalfFormSection to_frame(const HalfFormSection& s, Frame frame, const MetricField& m) {
  return frame == Frame::V ? to_vframe(s, m) : to_etaframe(s, m);
}

// ---------------------------------------------------------------------------
// Jet kernels

namespace local {

ComplexJet covariant(const ComplexJet& psi, const RealJet& a_k, int k) {
  return psi.derivative(k) - cx(a_k) * psi * kI;
}

ComplexJet bochner(const LocalGeometry& geo, std::span<const RealJet> a, const ComplexJet& psi) {
  const int n = geo.dim();
  std::vector<ComplexJet> d;
  for (int k = 0; k < n; ++k) d.push_back(covariant(psi, a[sz(k)], k));
  ComplexJet out;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) {
      ComplexJet t = covariant(d[sz(k)], a[sz(h)], h);
      for (int l = 0; l < n; ++l) t -= cx(geo.gamma(l, h, k)) * d[sz(l)];
      t = cx(geo.ginv(h, k)) * t;
      if (out.valid())
        out += t;
      else
        out = std::move(t);
    }
  return out;
}

ComplexJet full_laplacian_v(const LocalGeometry& geo, std::span<const RealJet> a, const ComplexJet& phi) {
  const int n = geo.dim();
  std::vector<ComplexJet> omega, nab;
  for (int k = 0; k < n; ++k) omega.push_back(cx(geo.omega(k)));
  for (int k = 0; k < n; ++k) nab.push_back(covariant(phi, a[sz(k)], k) + omega[sz(k)] * phi);
  ComplexJet out;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) {
      const auto& nk = nab[sz(k)];
      ComplexJet t = covariant(nk, a[sz(h)], h) + omega[sz(h)] * nk;
      for (int l = 0; l < n; ++l) t -= cx(geo.gamma(l, h, k)) * nab[sz(l)];
      t = cx(geo.ginv(h, k)) * t;
      if (out.valid())
        out += t;
      else
        out = std::move(t);
    }
  return out;
}

RealJet divergence(const LocalGeometry& geo, std::span<const RealJet> up) {
  const int n = geo.dim();
  RealJet out = up[0].derivative(0) - up[0] * geo.omega(0) * 2.0;
  for (int j = 1; j < n; ++j) out += up[sz(j)].derivative(j) - up[sz(j)] * geo.omega(j) * 2.0;
  return out;
}

RealJet scalar_paper(const LocalGeometry& geo) { return -geo.scalar_std(); }

}  // namespace local

// ---------------------------------------------------------------------------
// Pointwise operators

std::vector<complex> observed_derivative(const HalfFormSection& s, const GaugePotential& a,
                                         const MetricField& m, std::span<const double> p) {
  require_dims(s, a, m);
  const auto eta = to_etaframe(s, m);
  const auto psi = eta.coefficient.jet(p, 1);
  std::vector<complex> out;
  for (int k = 0; k < m.dim(); ++k) out.push_back(local::covariant(psi, a.a[sz(k)].jet(p, 0), k).value());
  return out;
}

std::vector<complex> halfform_derivative(const HalfFormSection& s, const MetricField& m,
                                         std::span<const double> p) {
  const int n = m.dim();
  if (s.dim() != n) throw std::invalid_argument("section and metric dimensions differ");
  const auto c = s.coefficient.jet(p, 1);
  std::vector<complex> out;
  if (s.frame == Frame::Eta) {
    for (int k = 0; k < n; ++k) out.push_back(c.derivative(k).value());
    return out;
  }
  LocalGeometry geo(n, m.jets(p, 1));
  for (int k = 0; k < n; ++k) out.push_back(c.derivative(k).value() + geo.omega(k).value() * c.value());
  return out;
}

OperatorResult observed_laplacian(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                                  bool include_halfform) {
  require_dims(s, a, m);
  const int n = m.dim();
  const auto c = s.coefficient;
  const bool full_v = include_halfform && s.frame == Frame::V;
  ComplexField out(n, [c, a, m, n, full_v](std::span<const double> p, int d) {
    LocalGeometry geo(n, m.jets(p, d + 2));
    const auto aj = a.spatial_jets(p, d + 1);
    const auto psi = c.jet(p, d + 2);
    return full_v ? local::full_laplacian_v(geo, aj, psi) : local::bochner(geo, aj, psi);
  });
  return OperatorResult{{out, s.frame}, include_halfform ? "laplacian_full" : "laplacian_bochner", true,
                        include_halfform};
}

OperatorResult lie_operator_Z(const SpecialPhaseFunction& f, const HalfFormSection& s, const GaugePotential& a,
                              const MetricField& m, const ComplexField* dpsi_dt) {
  require_dims(s, a, m);
  const int n = m.dim();
  const auto c = s.coefficient;
  const bool vframe = s.frame == Frame::V;
  const ComplexField dt = dpsi_dt ? *dpsi_dt : ComplexField();
  ComplexField out(n, [f, c, a, m, n, vframe, dt](std::span<const double> p, int d) {
    LocalGeometry geo(n, m.jets(p, d + 1));
    const auto aj = a.spatial_jets(p, d);
    const auto psi = c.jet(p, d + 1);
    const auto up = contravariant(f, geo, p, d + 1);
    ComplexJet acc = psi * complex(f.f0) * cx(a.a0.jet(p, d)) + cx(f.scal.jet(p, d)) * psi;
    for (int j = 0; j < n; ++j) {
      ComplexJet nab = local::covariant(psi, aj[sz(j)], j);
      if (vframe) nab += cx(geo.omega(j)) * psi;
      acc -= cx(up[sz(j)]) * nab * kI;
    }
    acc -= cx(local::divergence(geo, up)) * psi * complex(0.0, 0.5);
    if (dt.valid() && f.f0 != 0.0) {
      ComplexJet time = dt.jet(p, d);
      if (vframe) time = cx(geo.quarter()) * time;
      acc += time * (kI * f.f0);
    }
    return acc;
  });
  return OperatorResult{{out, s.frame}, "Z[" + f.label + "]", true, vframe};
}

OperatorResult quantum_operator(const SpecialPhaseFunction& f, const HalfFormSection& s, const GaugePotential& a,
                                const MetricField& m, double k) {
  require_dims(s, a, m);
  const int n = m.dim();
  const auto c = s.coefficient;
  const bool vframe = s.frame == Frame::V;
  ComplexField out(n, [f, c, a, m, n, vframe, k](std::span<const double> p, int d) {
    const int need = f.f0 != 0.0 ? d + 2 : d + 1;
    LocalGeometry geo(n, m.jets(p, f.f0 != 0.0 ? d + 2 : d + 1));
    const auto aj = a.spatial_jets(p, d + 1);
    const auto psi = c.jet(p, need);
    const auto up = contravariant(f, geo, p, d + 1);
    ComplexJet acc = cx(f.scal.jet(p, d)) * psi;
    for (int j = 0; j < n; ++j) {
      ComplexJet nab = local::covariant(psi, aj[sz(j)], j);
      if (vframe) nab += cx(geo.omega(j)) * psi;
      acc -= cx(up[sz(j)]) * nab * kI;
    }
    acc -= cx(local::divergence(geo, up)) * psi * complex(0.0, 0.5);
    if (f.f0 != 0.0) {
      const auto lap = vframe ? local::full_laplacian_v(geo, aj, psi) : local::bochner(geo, aj, psi);
      acc -= lap * complex(0.5 * f.f0);
      if (k != 0.0) acc -= cx(local::scalar_paper(geo)) * psi * complex(0.5 * k * f.f0);
    }
    return acc;
  });
  return OperatorResult{{out, s.frame}, f.label + "^", true, true};
}

OperatorResult energy_operator_cqm(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                                   double k) {
  auto r = quantum_operator(SpecialPhaseFunction::free_hamiltonian(m.dim(), a.a0), s, a, m, k);
  r.op = "H0_cqm";
  return r;
}

OperatorResult gq_chart_operator(const HalfFormSection& s, const GaugePotential& a, const MetricField& m) {
  require_dims(s, a, m);
  const int n = m.dim();
  const auto phi = to_vframe(s, m).coefficient;
  ComplexField out(n, [phi, a, m, n](std::span<const double> p, int d) {
    LocalGeometry geo(n, m.jets(p, d + 2));
    const auto aj = a.spatial_jets(p, d + 1);
    const auto c = phi.jet(p, d + 2);
    return local::bochner(geo, aj, c) * complex(-0.5) - cx(a.a0.jet(p, d)) * c;
  });
  HalfFormSection v{out, Frame::V};
  return OperatorResult{to_frame(v, s.frame, m), "H0_gq_chart", true, false};
}

complex energy_operator_gq(const HalfFormSection& s, const GaugePotential& a, const MetricField& m,
                           std::span<const double> p) {
  require_dims(s, a, m);
  const int n = m.dim();
  const NormalChart nc(m, p);
  const auto psi = nc.pull_back(to_etaframe(s, m).coefficient);
  const auto an = nc.pull_back_covector(a.a);
  const auto a0 = nc.pull_back(a.a0);
  const auto y = nc.pole();
  LocalGeometry geo(n, nc.metric().jets(y, 2));
  std::vector<RealJet> aj;
  for (const auto& c : an) aj.push_back(c.jet(y, 1));
  const auto phi = cx(geo.quarter()) * psi.jet(y, 2);
  const complex eta_value =
      -0.5 * local::bochner(geo, aj, phi).value() - a0.jet(y, 0).value() * phi.value();
  if (s.frame == Frame::Eta) return eta_value;
  return eta_value * metric_at(m, p).quarter_power;
}

// ---------------------------------------------------------------------------
// Schrodinger operator

TimeDependentSection::TimeDependentSection(Expression e, int dim) : e_(std::move(e)), dim_(dim) {
  if (e_.max_variable() >= dim_) throw DomainError("section uses a coordinate beyond the chart dimension");
}

TimeDependentSection TimeDependentSection::parse(std::string_view source, int dim, ParseOptions names) {
  names.dimension = dim;
  names.allow_time = true;
  return TimeDependentSection(cqmq::parse(source, names), dim);
}

ComplexField TimeDependentSection::at(double t) const {
  auto e = e_;
  return ComplexField(dim_, [e, t](std::span<const double> p, int d) { return eval_jet_complex(e, p, d, t); });
}

ComplexField TimeDependentSection::time_derivative(double t) const {
  auto e = e_;
  const int n = dim_;
  return ComplexField(n, [e, t, n](std::span<const double> p, int d) {
    std::vector<ComplexJet> coords;
    for (int k = 0; k < n; ++k) coords.push_back(ComplexJet::variable(n + 1, d + 1, k, p[sz(k)]));
    const auto time = ComplexJet::variable(n + 1, d + 1, n, t);
    return restrict_to_leading(evaluate<complex>(e, coords, &time).derivative(n), n);
  });
}

OperatorResult schrodinger_operator(const HalfFormSection& s, const ComplexField* dpsi_dt,
                                    const GaugePotential& a, const MetricField& m, double k) {
  require_dims(s, a, m);
  const int n = m.dim();
  const auto psi = to_etaframe(s, m).coefficient;
  const ComplexField dt = dpsi_dt ? *dpsi_dt : ComplexField();
  ComplexField out(n, [psi, dt, a, m, n, k](std::span<const double> p, int d) {
    LocalGeometry geo(n, m.jets(p, d + 2));
    const auto aj = a.spatial_jets(p, d + 1);
    const auto c = psi.jet(p, d + 2);
    ComplexJet acc = -(cx(a.a0.jet(p, d)) * c * kI) - local::bochner(geo, aj, c) * complex(0.0, 0.5);
    if (k != 0.0) acc -= cx(local::scalar_paper(geo)) * c * complex(0.0, 0.5 * k);
    if (dt.valid()) acc += dt.jet(p, d);
    return acc;
  });
  HalfFormSection eta{out, Frame::Eta};
  return OperatorResult{to_frame(eta, s.frame, m), "S", true, true};
}

complex schrodinger_operator(const TimeDependentSection& s, const GaugePotential& a, const MetricField& m,
                             double k, std::span<const double> p, double t) {
  const HalfFormSection sec{s.at(t), Frame::Eta};
  const auto dt = s.time_derivative(t);
  return schrodinger_operator(sec, &dt, a, m, k).at(p);
}

}  // namespace cqmq
