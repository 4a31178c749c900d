#include "cqmq/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cqmq/spectral.hpp"

namespace cqmq {

namespace {

constexpr complex kI{0.0, 1.0};

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

ComplexJet cx(const RealJet& x) { return complexify(x); }

ParseOptions options_for(int dim) {
  ParseOptions o;
  o.dimension = dim;
  return o;
}

HalfFormSection unit_section(int dim, Frame frame) {
  return HalfFormSection{ComplexField::constant(dim, complex(1.0)), frame};
}

// Derived seeds keep each check's random draws independent of the others.
std::mt19937_64 check_rng(const Corpus& corpus, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(corpus.seed), static_cast<std::uint32_t>(corpus.seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

ResidualReport start(std::string check, const Corpus& corpus, double tolerance) {
  ResidualReport r;
  r.check = std::move(check);
  r.seed = corpus.seed;
  r.corpus = corpus.descriptor;
  r.tolerance = tolerance;
  return r;
}

SpecialPhaseFunction coordinate_x1(int dim) {
  auto f = SpecialPhaseFunction::coordinate(dim, 0);
  f.label = "x1";
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidualReport

void ResidualReport::add(ResidualSample s) { samples.push_back(std::move(s)); }

void ResidualReport::finalize() {
  max_residual = 0.0;
  bool finite = true;
  for (const auto& s : samples) {
    if (!std::isfinite(s.residual)) finite = false;
    max_residual = std::max(max_residual, s.residual);
  }
  if (!finite) max_residual = std::numeric_limits<double>::infinity();
  pass = max_residual <= tolerance;
}

double ResidualReport::max_of(std::string_view quantity) const {
  double m = 0.0;
  for (const auto& s : samples)
    if (s.quantity == quantity) m = std::max(m, s.residual);
  return m;
}

// ---------------------------------------------------------------------------
// Pointwise residuals

double lemma_residual(const MetricField& m, const GaugePotential& a, const HalfFormSection& s,
                      std::span<const double> p) {
  const int n = m.dim();
  LocalGeometry geo(n, m.jets(p, 2));
  const auto aj = a.spatial_jets(p, 1);
  const auto phi = to_vframe(s, m).coefficient.jet(p, 2);

  const complex lhs = local::bochner(geo, aj, phi).value();
  const complex full = local::full_laplacian_v(geo, aj, phi).value();
  // G(D phi, nabla sqrt v) and G(nabla nabla sqrt v), with nabla sqrt v = omega sqrt v.
  complex cross = 0.0;
  double second = 0.0;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) {
      const double gi = geo.ginv(h, k).value();
      const double wk = geo.omega(k).value();
      cross += gi * local::covariant(phi, aj[sz(h)], h).value() * wk;
      double hess = geo.omega(k).derivative(h).value() + geo.omega(h).value() * wk;
      for (int l = 0; l < n; ++l) hess -= geo.gamma(l, h, k).value() * geo.omega(l).value();
      second += gi * hess;
    }
  const complex rhs = full - 2.0 * cross - phi.value() * second;
  return std::abs(lhs - rhs);
}

CancellationSample cancellation_at(const MetricField& m, const GaugePotential& a, const HalfFormSection& s,
                                   std::span<const double> p) {
  const int n = m.dim();
  const auto psi_field = to_etaframe(s, m).coefficient;
  LocalGeometry geo(n, m.jets(p, 2));
  const auto psi = psi_field.jet(p, 2);

  CancellationSample out;
  out.lhs = local::bochner(geo, a.spatial_jets(p, 1), psi).value();
  out.r_paper = local::scalar_paper(geo).value();

  const NormalChart nc(m, p);
  const auto y = nc.pole();
  LocalGeometry pole(n, nc.metric().jets(y, 2));
  std::vector<RealJet> an;
  for (const auto& c : nc.pull_back_covector(a.a)) an.push_back(c.jet(y, 1));
  const auto phi = cx(pole.quarter()) * nc.pull_back(psi_field).jet(y, 2);
  out.rhs = local::bochner(pole, an, phi).value() - out.r_paper / 6.0 * psi.value();
  return out;
}

PoleIdentities pole_identities(const MetricField& m, std::span<const double> p) {
  const int n = m.dim();
  const NormalChart nc(m, p);
  LocalGeometry geo(n, nc.metric().jets(nc.pole(), 2));
  PoleIdentities out;
  out.r_paper = local::scalar_paper(geo).value();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double gik = geo.ginv(i, k).value();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double d2 = geo.g(a, b).derivative(i).derivative(k).value();
          out.r_from_metric += 1.5 * gik * geo.ginv(a, b).value() * d2;
          out.metric_trace -= 0.25 * gik * geo.ginv(a, b).value() * d2;
        }
      // gamma_paper is minus the standard Christoffel symbol.
      for (int h = 0; h < n; ++h) out.gamma_trace -= 0.5 * gik * geo.gamma(h, k, h).derivative(i).value();
    }
  return out;
}

double bracket_morphism_residual(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                                 const MetricField& m, std::span<const double> p) {
  const auto lhs = lie_bracket(tangent_lift(f, m), tangent_lift(g, m));
  const auto rhs = tangent_lift(special_bracket(f, g, m), m);
  double worst = std::abs(lhs.time - rhs.time);
  for (int i = 0; i < m.dim(); ++i)
    worst = std::max(worst, std::abs(lhs.spatial[sz(i)].value(p) - rhs.spatial[sz(i)].value(p)));
  return worst;
}

double jacobi_residual(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g, const SpecialPhaseFunction& h,
                       const MetricField& m, std::span<const double> p) {
  const auto a = special_bracket(f, special_bracket(g, h, m), m);
  const auto b = special_bracket(g, special_bracket(h, f, m), m);
  const auto c = special_bracket(h, special_bracket(f, g, m), m);
  double worst = std::abs(a.f0 + b.f0 + c.f0);
  worst = std::max(worst, std::abs(a.scal.value(p) + b.scal.value(p) + c.scal.value(p)));
  for (int i = 0; i < m.dim(); ++i) {
    const auto k = sz(i);
    worst = std::max(worst, std::abs(a.lin[k].value(p) + b.lin[k].value(p) + c.lin[k].value(p)));
  }
  return worst;
}

CommutatorSample commutator_at(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                               const HalfFormSection& s, const GaugePotential& a, const MetricField& m, double k,
                               std::span<const double> p) {
  auto quantise = [&](const SpecialPhaseFunction& q, const HalfFormSection& x) {
    return quantum_operator(q, x, a, m, k).section;
  };
  // L_Y = -i Z on static sections.
  auto lie = [&](const SpecialPhaseFunction& q, const HalfFormSection& x) {
    return lie_operator_Z(q, x, a, m).section;
  };
  auto transport = [&](const HalfFormSection& x) {
    const auto yf = lie(f, x), yg = lie(g, x);
    const complex cf = -kI * g.f0, cg = kI * f.f0;
    return HalfFormSection{complex(cf) * yf.coefficient + complex(cg) * yg.coefficient, x.frame};
  };
  auto schrodinger = [&](const HalfFormSection& x) { return schrodinger_operator(x, nullptr, a, m, k).section; };

  CommutatorSample out;
  out.commutator = quantise(f, quantise(g, s)).coefficient.value(p) - quantise(g, quantise(f, s)).coefficient.value(p);
  out.bracket_term = kI * quantise(special_bracket(f, g, m), s).coefficient.value(p);
  if (f.f0 != 0.0 || g.f0 != 0.0)
    out.anomaly = transport(schrodinger(s)).coefficient.value(p) - schrodinger(transport(s)).coefficient.value(p);
  return out;
}

// ---------------------------------------------------------------------------
// Corpus checks

ResidualReport verify_lemma(const Corpus& corpus, double tolerance) {
  auto rep = start("lemma", corpus, tolerance);
  for (const auto& e : corpus.entries)
    for (const auto& p : e.points)
      for (const auto& s : e.sections)
        rep.add({"lemma", e.descriptor, p, std::numeric_limits<double>::quiet_NaN(),
                 lemma_residual(e.chart, e.gauge, s, p)});
  rep.finalize();
  return rep;
}

ResidualReport verify_cancellation(const Corpus& corpus, double tolerance) {
  auto rep = start("cancellation", corpus, tolerance);
  double num = 0.0, den = 0.0;
  for (const auto& e : corpus.entries) {
    const MetricField& m = e.chart;
    for (const auto& p : e.points)
      for (const auto& s : e.sections) {
        const auto c = cancellation_at(m, e.gauge, s, p);
        rep.add({"cancellation", e.descriptor, p, c.r_paper, c.residual()});

        for (const Frame frame : {Frame::Eta, Frame::V}) {
          const auto sf = to_frame(s, frame, m);
          const complex gq = energy_operator_gq(sf, e.gauge, m, p);
          const complex cqm = energy_operator_cqm(sf, e.gauge, m, 1.0 / 6.0).at(p);
          rep.add({frame == Frame::Eta ? "gq_minus_cqm" : "gq_minus_cqm_v", e.descriptor, p, std::abs(gq),
                   std::abs(gq - cqm)});
          if (frame == Frame::Eta) {
            const complex d = gq - energy_operator_cqm(sf, e.gauge, m, 0.0).at(p);
            const complex x = -0.5 * c.r_paper * sf.coefficient.value(p);
            num += (std::conj(x) * d).real();
            den += std::norm(x);
          }
        }
      }
  }
  const double kappa = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  rep.add({"kappa_fit", corpus.descriptor, {}, kappa,
           std::isfinite(kappa) ? std::abs(kappa - 1.0 / 6.0) : std::numeric_limits<double>::infinity()});
  rep.finalize();
  return rep;
}

ResidualReport verify_pole_identities(const Corpus& corpus, double tolerance) {
  auto rep = start("pole_identities", corpus, tolerance);
  for (const auto& e : corpus.entries)
    for (const auto& p : e.points) {
      const auto id = pole_identities(e.chart, p);
      rep.add({"scalar_curvature", e.descriptor, p, id.r_from_metric, std::abs(id.r_paper - id.r_from_metric)});
      rep.add({"christoffel_trace", e.descriptor, p, id.gamma_trace, std::abs(id.gamma_trace - id.metric_trace)});
    }
  rep.finalize();
  return rep;
}

ResidualReport verify_bracket_morphism(const Corpus& corpus, double tolerance, int pairs_per_metric) {
  auto rep = start("bracket_morphism", corpus, tolerance);
  auto rng = check_rng(corpus, 4);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  // Fixed pairs on the flat plane.
  const auto flat = MetricChart::euclidean(2);
  const std::vector<double> origin{0.3, -0.7};
  rep.add({"x1_x2", flat.name(), origin, nan,
           bracket_morphism_residual(SpecialPhaseFunction::coordinate(2, 0), SpecialPhaseFunction::coordinate(2, 1),
                                     flat, origin)});
  rep.add({"P1_P2", flat.name(), origin, nan,
           bracket_morphism_residual(SpecialPhaseFunction::momentum(flat, 0), SpecialPhaseFunction::momentum(flat, 1),
                                     flat, origin)});

  for (const auto& e : corpus.entries) {
    const MetricField& m = e.chart;
    const int n = m.dim();
    for (int j = 0; j < pairs_per_metric; ++j) {
      // Mix the quadratic coefficients: (0, 0), (1, 0), (0.5, -1.5), ...
      const double f0 = j == 0 ? 0.0 : std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      const double g0 = j % 2 ? 0.0 : std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      auto f = random_special(n, f0, rng, "f");
      auto g = random_special(n, g0, rng, "g");
      auto h = j % 2 ? SpecialPhaseFunction::free_hamiltonian(n, e.gauge.a0) : SpecialPhaseFunction::momentum(m, 0);
      for (const auto& p : e.points) {
        rep.add({"morphism", e.descriptor, p, nan, bracket_morphism_residual(f, g, m, p)});
        rep.add({"morphism", e.descriptor, p, nan, bracket_morphism_residual(h, f, m, p)});
        rep.add({"jacobi", e.descriptor, p, nan, jacobi_residual(f, g, h, m, p)});
      }
    }
  }
  rep.finalize();
  return rep;
}

ResidualReport verify_commutator_anomaly(const Corpus& corpus, double tolerance, int nodes, int max_mode) {
  if (nodes < 2 * max_mode + 1)
    throw GridTooCoarse("a " + std::to_string(nodes) + "-node grid cannot resolve Fourier modes up to " +
                        std::to_string(max_mode));
  auto rep = start("commutator_anomaly", corpus, tolerance);
  auto rng = check_rng(corpus, 5);

  // Circle of circumference 2 pi, sampled at the grid nodes.
  const auto circle = MetricChart::circle(2.0 * std::numbers::pi);
  const MetricField& m1 = circle;
  const auto opts = options_for(1);
  std::vector<HalfFormSection> modes;
  for (int q = -max_mode; q <= max_mode; ++q)
    modes.push_back(
        HalfFormSection::from_expression(parse("exp(" + std::to_string(q) + "*i*x1)", opts), 1, Frame::Eta));
  const auto zero = GaugePotential::zero(1);
  const auto gauge = random_gauge(1, rng);
  const auto x1 = coordinate_x1(1);
  const auto p1 = SpecialPhaseFunction::momentum(m1, 0);
  const auto h0 = SpecialPhaseFunction::free_hamiltonian(1, zero.a0);
  const auto h0_gauge = SpecialPhaseFunction::free_hamiltonian(1, gauge.a0);
  const auto r1 = random_special(1, 0.0, rng, "f");
  const auto r2 = random_special(1, 0.0, rng, "g");
  const double h = 2.0 * std::numbers::pi / nodes;

  for (int j = 0; j < nodes; ++j) {
    const std::vector<double> p{j * h};
    for (const auto& s : modes) {
      const auto xp = commutator_at(x1, p1, s, zero, m1, 0.0, p);
      rep.add({"x1_P1", circle.name(), p, std::abs(xp.commutator),
               std::abs(xp.commutator - kI * s.coefficient.value(p))});
      const auto hx = commutator_at(h0, x1, s, zero, m1, 0.0, p);
      rep.add({"H0_x1", circle.name(), p, std::abs(hx.anomaly), hx.residual()});
    }
    const auto& s = modes[sz(max_mode + 1)];
    const auto ff = commutator_at(r1, r2, s, gauge, m1, 0.0, p);
    rep.add({"first_order_pair", circle.name(), p, std::abs(ff.commutator), ff.residual()});
    const auto hf = commutator_at(h0_gauge, r1, s, gauge, m1, 0.0, p);
    rep.add({"H0_first_order", circle.name(), p, std::abs(hf.anomaly), hf.residual()});
  }

  // Curved metrics: the anomaly law with the curvature term switched on.
  for (const auto& e : corpus.entries) {
    const MetricField& m = e.chart;
    const int n = m.dim();
    const auto f = random_special(n, 0.0, rng, "f");
    const auto g = random_special(n, 0.0, rng, "g");
    const auto hm = SpecialPhaseFunction::free_hamiltonian(n, e.gauge.a0);
    const auto& s = e.sections.front();
    const auto& p = e.points.front();
    const auto a = commutator_at(f, g, s, e.gauge, m, 1.0 / 6.0, p);
    rep.add({"first_order_pair", e.descriptor, p, std::abs(a.commutator), a.residual()});
    const auto b = commutator_at(hm, f, s, e.gauge, m, 1.0 / 6.0, p);
    rep.add({"H0_first_order", e.descriptor, p, std::abs(b.anomaly), b.residual()});
  }
  rep.finalize();
  return rep;
}

ResidualReport verify_hermiticity(const Corpus& corpus, double tolerance) {
  auto rep = start("hermiticity", corpus, tolerance);
  auto rng = check_rng(corpus, 6);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  auto add = [&](const std::string& what, const MetricChart& chart, const SpecialPhaseFunction& f,
                 const GaugePotential& a, const std::vector<int>& counts, double k) {
    const Grid grid(chart, counts);
    const auto op = assemble_operator(f, chart, a, grid, k);
    rep.add({what, grid.descriptor(), {}, nan, op.symmetry_certificate});
  };

  const auto circle = MetricChart::circle(2.0 * std::numbers::pi);
  const auto g1 = random_gauge(1, rng);
  add("H0", circle, SpecialPhaseFunction::free_hamiltonian(1, g1.a0), g1, {128}, 0.0);
  add("P1", circle, SpecialPhaseFunction::momentum(circle, 0), g1, {128}, 0.0);
  add("special", circle, random_special(1, 0.7, rng, "f"), g1, {128}, 0.0);

  const auto torus = MetricChart::flat_torus(2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  const auto g2 = random_gauge(2, rng);
  add("H0", torus, SpecialPhaseFunction::free_hamiltonian(2, g2.a0), g2, {32, 32}, 1.0);
  add("P1", torus, SpecialPhaseFunction::momentum(torus, 0), g2, {32, 32}, 0.0);
  add("P2", torus, SpecialPhaseFunction::momentum(torus, 1), g2, {32, 32}, 0.0);
  add("special", torus, random_special(2, 0.0, rng, "f"), g2, {32, 32}, 0.0);
  add("special", torus, random_special(2, -1.3, rng, "f"), g2, {32, 32}, 0.5);

  int curved3d = 0;
  for (const auto& e : corpus.entries) {
    const int n = e.chart.dim();
    bool periodic = true;
    for (int k = 0; k < n; ++k) periodic = periodic && e.chart.period(k).has_value();
    if (!periodic || (n == 3 && curved3d++ > 0)) continue;
    const std::vector<int> counts(sz(n), n == 2 ? 24 : 12);
    add("H0", e.chart, SpecialPhaseFunction::free_hamiltonian(n, e.gauge.a0), e.gauge, counts, 1.0 / 6.0);
    add("special", e.chart, random_special(n, 0.8, rng, "f"), e.gauge, counts, 1.0 / 6.0);
  }

  const auto sphere = MetricChart::sphere(1.0);
  add("H0", sphere, SpecialPhaseFunction::free_hamiltonian(2, {}), GaugePotential::zero(2), {64, 128}, 1.0 / 6.0);
  rep.finalize();
  return rep;
}

ResidualReport verify_sqrt_eta_parallel(const Corpus& corpus, double tolerance) {
  auto rep = start("sqrt_eta_parallel", corpus, tolerance);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  auto max_abs = [](const std::vector<complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
  };
  for (const auto& e : corpus.entries) {
    const MetricField& m = e.chart;
    const int n = m.dim();
    const auto eta_unit = unit_section(n, Frame::Eta);
    const auto sqrt_eta_v = to_vframe(eta_unit, m);
    const auto v_unit = unit_section(n, Frame::V);
    const auto v_unit_eta = to_etaframe(v_unit, m);
    const auto h0 = SpecialPhaseFunction::free_hamiltonian(n, e.gauge.a0);
    const auto p1 = SpecialPhaseFunction::momentum(m, 0);
    for (const auto& p : e.points) {
      rep.add({"parallel_eta", e.descriptor, p, nan, max_abs(halfform_derivative(eta_unit, m, p))});
      rep.add({"parallel_v", e.descriptor, p, nan, max_abs(halfform_derivative(sqrt_eta_v, m, p))});

      // d(|g|^{-1/4}) = -(1/4)|g|^{-5/4} d|g|.
      LocalGeometry geo(n, m.jets(p, 1));
      const auto d = halfform_derivative(v_unit_eta, m, p);
      double worst = 0.0;
      for (int k = 0; k < n; ++k) {
        const double det = geo.det().value();
        const double expected = -0.25 * std::pow(det, -1.25) * geo.det().derivative(k).value();
        worst = std::max(worst, std::abs(d[sz(k)] - expected));
      }
      rep.add({"v_unit_derivative", e.descriptor, p, nan, worst});

      for (const auto& s : e.sections) {
        const complex psi = s.coefficient.value(p);
        rep.add({"round_trip", e.descriptor, p, nan,
                 std::abs(to_etaframe(to_vframe(s, m), m).coefficient.value(p) - psi)});
        const auto sv = to_vframe(s, m);
        rep.add({"round_trip", e.descriptor, p, nan,
                 std::abs(to_vframe(to_etaframe(sv, m), m).coefficient.value(p) - sv.coefficient.value(p))});
        for (const auto* f : {&h0, &p1}) {
          const auto eta_then_v = to_vframe(quantum_operator(*f, s, e.gauge, m, 1.0 / 6.0).section, m);
          const auto v_native = quantum_operator(*f, sv, e.gauge, m, 1.0 / 6.0).section;
          rep.add({"frame_covariance", e.descriptor, p, nan,
                   std::abs(eta_then_v.coefficient.value(p) - v_native.coefficient.value(p))});
        }
      }
    }
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"lemma",      "cancellation",       "pole_identities",
                                              "bracket_morphism", "commutator_anomaly", "hermiticity",
                                              "sqrt_eta_parallel"};
  return names;
}

double default_tolerance(std::string_view check) {
  static const std::map<std::string, double, std::less<>> tol{
      {"lemma", 1e-9},      {"cancellation", 1e-9},       {"pole_identities", 1e-9},
      {"bracket_morphism", 1e-9}, {"commutator_anomaly", 1e-8}, {"hermiticity", 1e-10},
      {"sqrt_eta_parallel", 1e-12}};
  const auto it = tol.find(check);
  if (it == tol.end()) throw std::invalid_argument("unknown check '" + std::string(check) + "'");
  return it->second;
}

ResidualReport run_check(std::string_view check, const Corpus& corpus, double tolerance) {
  if (check == "lemma") return verify_lemma(corpus, tolerance);
  if (check == "cancellation") return verify_cancellation(corpus, tolerance);
  if (check == "pole_identities") return verify_pole_identities(corpus, tolerance);
  if (check == "bracket_morphism") return verify_bracket_morphism(corpus, tolerance);
  if (check == "commutator_anomaly") return verify_commutator_anomaly(corpus, tolerance);
  if (check == "hermiticity") return verify_hermiticity(corpus, tolerance);
  if (check == "sqrt_eta_parallel") return verify_sqrt_eta_parallel(corpus, tolerance);
  throw std::invalid_argument("unknown check '" + std::string(check) + "'");
}

}  // namespace cqmq
