#include "cqmq/phase_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>

namespace cqmq {

// ---------------------------------------------------------------------------
// Construction

SpecialPhaseFunction SpecialPhaseFunction::from_expressions(double f0, const std::vector<Expression>& lin,
                                                            const Expression& scal, int dim,
                                                            std::string label) {
  if (lin.size() != static_cast<std::size_t>(dim))
    throw DomainError("special phase function needs one linear coefficient per coordinate");
  SpecialPhaseFunction f;
  f.f0 = f0;
  for (const auto& e : lin) f.lin.push_back(RealField::from_expression(e, dim));
  f.scal = RealField::from_expression(scal, dim);
  f.label = std::move(label);
  return f;
}

SpecialPhaseFunction SpecialPhaseFunction::zero(int dim) {
  SpecialPhaseFunction f;
  f.lin.assign(static_cast<std::size_t>(dim), RealField::constant(dim, 0.0));
  f.scal = RealField::constant(dim, 0.0);
  f.label = "0";
  return f;
}

SpecialPhaseFunction SpecialPhaseFunction::coordinate(int dim, int k) {
  auto f = zero(dim);
  f.scal = RealField::coordinate(dim, k);
  f.label = "x" + std::to_string(k + 1);
  return f;
}

SpecialPhaseFunction SpecialPhaseFunction::momentum(const MetricField& m, int j) {
  const int n = m.dim();
  auto f = zero(n);
  for (int i = 0; i < n; ++i) {
    f.lin[static_cast<std::size_t>(i)] = RealField(n, [m, n, i, j](std::span<const double> p, int order) {
      return m.jets(p, order)[static_cast<std::size_t>(i * n + j)];
    });
  }
  f.label = "P" + std::to_string(j + 1);
  return f;
}

SpecialPhaseFunction SpecialPhaseFunction::free_hamiltonian(int dim, RealField a0) {
  auto f = zero(dim);
  f.f0 = 1.0;
  if (a0.valid()) f.scal = -a0;
  f.label = "H0";
  return f;
}

double eval(const SpecialPhaseFunction& f, const MetricField& m, std::span<const double> p,
            std::span<const double> v) {
  const int n = m.dim();
  if (v.size() != static_cast<std::size_t>(n) || p.size() != v.size())
    throw std::invalid_argument("eval: point and velocity must match the chart dimension");
  const auto g = metric_at(m, p);
  Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
  double out = 0.5 * f.f0 * vv.dot(g.g * vv) + f.scal.value(p);
  for (int i = 0; i < n; ++i) out += f.lin[static_cast<std::size_t>(i)].value(p) * v[static_cast<std::size_t>(i)];
  return out;
}

std::vector<RealField> raise_index(const std::vector<RealField>& covector, const MetricField& m) {
  const int n = m.dim();
  std::vector<RealField> out;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(n, [covector, m, n, i](std::span<const double> p, int order) {
      LocalGeometry geo(n, m.jets(p, order));
      RealJet s = RealJet::constant(n, order, 0.0);
      for (int j = 0; j < n; ++j) s += geo.ginv(i, j) * covector[static_cast<std::size_t>(j)].jet(p, order);
      return s;
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Special bracket

namespace {

// Polynomial of degree <= 3 in the velocity, with jet coefficients in x.
class VelocityPoly {
 public:
  explicit VelocityPoly(int n) : n_(n), mono_(JetLayout::get(n, 3)), c_(mono_->size()) {}

  void add(std::size_t monomial, const RealJet& coeff) {
    auto& slot = c_[monomial];
    if (slot.valid())
      slot += coeff;
    else
      slot = coeff;
  }
  void add_constant(const RealJet& coeff) { add(0, coeff); }
  void add_linear(int a, const RealJet& coeff) { add(linear_index(a), coeff); }
  void add_quadratic(int a, int b, const RealJet& coeff) {
    std::vector<int> alpha(static_cast<std::size_t>(n_), 0);
    ++alpha[static_cast<std::size_t>(a)];
    ++alpha[static_cast<std::size_t>(b)];
    add(mono_->index_of(alpha), coeff);
  }

  VelocityPoly& operator+=(const VelocityPoly& o) {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (o.c_[i].valid()) add(i, o.c_[i]);
    return *this;
  }
  VelocityPoly scaled(double s) const {
    VelocityPoly r(*this);
    for (auto& c : r.c_)
      if (c.valid()) c *= s;
    return r;
  }
  friend VelocityPoly operator*(const VelocityPoly& a, const VelocityPoly& b) {
    VelocityPoly r(a.n_);
    for (const auto& p : a.mono_->products()) {
      const auto& x = a.c_[p.lhs];
      const auto& y = b.c_[p.rhs];
      if (x.valid() && y.valid()) r.add(p.out, x * y);
    }
    return r;
  }

  const RealJet& coeff(std::size_t i) const { return c_[i]; }
  std::size_t size() const noexcept { return c_.size(); }
  int degree(std::size_t i) const { return mono_->degree(i); }
  std::size_t linear_index(int a) const {
    std::vector<int> alpha(static_cast<std::size_t>(n_), 0);
    alpha[static_cast<std::size_t>(a)] = 1;
    return mono_->index_of(alpha);
  }

 private:
  int n_;
  std::shared_ptr<const JetLayout> mono_;
  std::vector<RealJet> c_;
};

struct BracketJets {
  std::vector<RealJet> lin;
  RealJet scal;
};

struct PhaseJets {
  double f0;
  std::vector<RealJet> lin;    // f_i, order d+1
  std::vector<RealJet> up;     // f^i, order d+1
  RealJet scal;                // order d+1
};

PhaseJets phase_jets(const SpecialPhaseFunction& f, const LocalGeometry& geo, std::span<const double> p,
                     int order) {
  const int n = geo.dim();
  PhaseJets j{f.f0, {}, {}, f.scal.jet(p, order)};
  for (int i = 0; i < n; ++i) j.lin.push_back(f.lin[static_cast<std::size_t>(i)].jet(p, order));
  for (int i = 0; i < n; ++i) {
    RealJet s = RealJet::constant(n, order, 0.0);
    for (int k = 0; k < n; ++k) s += geo.ginv(i, k) * j.lin[static_cast<std::size_t>(k)];
    j.up.push_back(std::move(s));
  }
  return j;
}

// d_k F at fixed momentum p = g v, as a polynomial in v.
VelocityPoly dx_fixed_momentum(const PhaseJets& f, const LocalGeometry& geo, int k) {
  const int n = geo.dim();
  VelocityPoly out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.f0 != 0.0) out.add_quadratic(a, b, geo.g(a, b).derivative(k) * (-0.5 * f.f0));
  for (int b = 0; b < n; ++b) {
    RealJet s = f.up[0].derivative(k) * geo.g(0, b);
    for (int i = 1; i < n; ++i) s += f.up[static_cast<std::size_t>(i)].derivative(k) * geo.g(i, b);
    out.add_linear(b, s);
  }
  out.add_constant(f.scal.derivative(k));
  return out;
}

// dF/dp_k = f0 v^k + f^k.
VelocityPoly d_momentum(const PhaseJets& f, int n, int k) {
  VelocityPoly out(n);
  const auto& lay = f.scal.layout();
  if (f.f0 != 0.0) out.add_linear(k, RealJet(lay, f.f0));
  out.add_constant(f.up[static_cast<std::size_t>(k)]);
  return out;
}

// d_k F at fixed velocity.
VelocityPoly dx_fixed_velocity(const PhaseJets& f, const LocalGeometry& geo, int k) {
  const int n = geo.dim();
  VelocityPoly out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.f0 != 0.0) out.add_quadratic(a, b, geo.g(a, b).derivative(k) * (0.5 * f.f0));
  for (int a = 0; a < n; ++a) out.add_linear(a, f.lin[static_cast<std::size_t>(a)].derivative(k));
  out.add_constant(f.scal.derivative(k));
  return out;
}

// dF/dv^k = f0 g_kc v^c + f_k.
VelocityPoly d_velocity(const PhaseJets& f, const LocalGeometry& geo, int k) {
  const int n = geo.dim();
  VelocityPoly out(n);
  if (f.f0 != 0.0)
    for (int c = 0; c < n; ++c) out.add_linear(c, geo.g(k, c) * f.f0);
  out.add_constant(f.lin[static_cast<std::size_t>(k)]);
  return out;
}

// Geodesic spray v^k d_k - Gamma^k_ab v^a v^b d/dv^k applied to F.
VelocityPoly spray(const PhaseJets& f, const LocalGeometry& geo) {
  const int n = geo.dim();
  VelocityPoly out(n);
  for (int k = 0; k < n; ++k) {
    VelocityPoly vk(n);
    vk.add_linear(k, RealJet(geo.g(0, 0).layout(), 1.0));
    out += vk * dx_fixed_velocity(f, geo, k);
    VelocityPoly gam(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gam.add_quadratic(a, b, -geo.gamma(k, a, b));
    out += gam * d_velocity(f, geo, k);
  }
  return out;
}

BracketJets bracket_jets(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                         const MetricField& m, std::span<const double> p, int order) {
  const int n = m.dim();
  LocalGeometry geo(n, m.jets(p, order + 1));
  const auto fj = phase_jets(f, geo, p, order + 1);
  const auto gj = phase_jets(g, geo, p, order + 1);

  // b = H(f, g) - H(g, f) with H(f, g) = d_x f . d_p g + f0 spray(g), so that
  // swapping the arguments negates every coefficient exactly.
  auto half = [&](const PhaseJets& a, const PhaseJets& c) {
    VelocityPoly h(n);
    for (int k = 0; k < n; ++k) h += dx_fixed_momentum(a, geo, k) * d_momentum(c, n, k);
    if (a.f0 != 0.0) h += spray(c, geo).scaled(a.f0);
    return h;
  };
  VelocityPoly b = half(fj, gj);
  b += half(gj, fj).scaled(-1.0);

  double scale = 1.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.coeff(i).valid() && b.degree(i) <= 1) scale = std::max(scale, max_abs(b.coeff(i)));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.degree(i) < 2 || !b.coeff(i).valid()) continue;
    const double r = max_abs(b.coeff(i));
    if (r > 1e-8 * scale)
      throw NotSpecial("special bracket left a velocity term of degree " + std::to_string(b.degree(i)) +
                       " with size " + std::to_string(r));
  }
  BracketJets out;
  const auto zero = RealJet::constant(n, order, 0.0);
  for (int a = 0; a < n; ++a) {
    const auto& c = b.coeff(b.linear_index(a));
    out.lin.push_back(c.valid() ? c.truncated(order) : zero);
  }
  out.scal = b.coeff(0).valid() ? b.coeff(0).truncated(order) : zero;
  return out;
}

// Remembers the most recent evaluation so the n + 1 component fields of one
// bracket share the work at a given point.
class BracketCache {
 public:
  BracketCache(SpecialPhaseFunction f, SpecialPhaseFunction g, MetricField m)
      : f_(std::move(f)), g_(std::move(g)), m_(std::move(m)) {}

  BracketJets get(std::span<const double> p, int order) {
    {
      std::lock_guard lock(mu_);
      if (last_ && order_ == order && std::equal(p.begin(), p.end(), point_.begin(), point_.end()))
        return *last_;
    }
    auto value = bracket_jets(f_, g_, m_, p, order);
    std::lock_guard lock(mu_);
    point_.assign(p.begin(), p.end());
    order_ = order;
    last_ = value;
    return value;
  }

 private:
  SpecialPhaseFunction f_, g_;
  MetricField m_;
  std::mutex mu_;
  std::vector<double> point_;
  int order_ = -1;
  std::optional<BracketJets> last_;
};

}  // namespace

SpecialPhaseFunction special_bracket(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                                     const MetricField& m) {
  const int n = m.dim();
  if (f.dim() != n || g.dim() != n) throw std::invalid_argument("special_bracket: dimension mismatch");
  auto cache = std::make_shared<BracketCache>(f, g, m);
  SpecialPhaseFunction out;
  out.f0 = 0.0;
  for (int a = 0; a < n; ++a) {
    out.lin.emplace_back(n, [cache, a](std::span<const double> p, int order) {
      return cache->get(p, order).lin[static_cast<std::size_t>(a)];
    });
  }
  out.scal = RealField(n, [cache](std::span<const double> p, int order) { return cache->get(p, order).scal; });
  out.label = "[[" + (f.label.empty() ? "f" : f.label) + ", " + (g.label.empty() ? "g" : g.label) + "]]";
  return out;
}

TangentLiftField tangent_lift(const SpecialPhaseFunction& f, const MetricField& m) {
  TangentLiftField x;
  x.time = f.f0;
  for (auto& c : raise_index(f.lin, m)) x.spatial.push_back(-c);
  return x;
}

TangentLiftField lie_bracket(const TangentLiftField& x, const TangentLiftField& y) {
  const auto n = x.spatial.size();
  if (y.spatial.size() != n) throw std::invalid_argument("lie_bracket: dimension mismatch");
  const int dim = static_cast<int>(n);
  TangentLiftField out;
  for (std::size_t i = 0; i < n; ++i) {
    out.spatial.emplace_back(dim, [x, y, i, dim](std::span<const double> p, int order) {
      RealJet s = RealJet::constant(dim, order, 0.0);
      for (int j = 0; j < dim; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        s += x.spatial[sj].jet(p, order) * y.spatial[i].jet(p, order + 1).derivative(j);
        s -= y.spatial[sj].jet(p, order) * x.spatial[i].jet(p, order + 1).derivative(j);
      }
      return s;
    });
  }
  return out;
}

}  // namespace cqmq
