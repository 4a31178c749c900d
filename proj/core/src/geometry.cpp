#include "cqmq/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cqmq {

namespace {

std::size_t upper_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Row i of the upper triangle starts after sum_{r<i} (n - r) entries.
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

Eigen::MatrixXd values_of(const MetricJets& g, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g[static_cast<std::size_t>(i * n + j)].value();
  return m;
}

std::string format_point(std::span<const double> p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

Eigen::LLT<Eigen::MatrixXd> checked_cholesky(const Eigen::MatrixXd& g, std::span<const double> p) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success || !g.allFinite())
    throw NotPositiveDefinite("metric is not positive definite at " + format_point(p));
  return llt;
}

// Jet matrix product C = A B for n x n row-major matrices.
MetricJets matmul(const MetricJets& a, const MetricJets& b, int n) {
  MetricJets c;
  c.reserve(a.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RealJet s = a[static_cast<std::size_t>(i * n)] * b[static_cast<std::size_t>(j)];
      for (int k = 1; k < n; ++k)
        s += a[static_cast<std::size_t>(i * n + k)] * b[static_cast<std::size_t>(k * n + j)];
      c.push_back(std::move(s));
    }
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalGeometry

LocalGeometry::LocalGeometry(int dim, MetricJets g) : n_(dim), g_(std::move(g)) {
  if (n_ <= 0 || g_.size() != static_cast<std::size_t>(n_ * n_))
    throw std::invalid_argument("LocalGeometry: metric jets must form an n x n matrix");
  order_ = g_.front().order();
  const auto& layout = g_.front().layout();

  const Eigen::MatrixXd g0 = values_of(g_, n_);
  std::vector<double> base(static_cast<std::size_t>(n_), 0.0);
  const auto llt = checked_cholesky(g0, base);
  const Eigen::MatrixXd g0inv = llt.solve(Eigen::MatrixXd::Identity(n_, n_));
  const double det0 = llt.matrixL().toDenseMatrix().diagonal().prod();
  const double det0_sq = det0 * det0;

  // g = g0 (I + M) with M = g0^{-1}(g - g0) nilpotent in the jet ring.
  MetricJets g0inv_j, m;
  g0inv_j.reserve(g_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g0inv_j.emplace_back(layout, g0inv(i, j));
  MetricJets dev = g_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) dev[idx(i, j)][0] = 0.0;
  m = matmul(g0inv_j, dev, n_);

  // (I + M)^{-1} g0^{-1} = sum_k (-M)^k g0^{-1}, and ln det(I + M) = tr ln(I + M).
  ginv_ = g0inv_j;
  MetricJets term = g0inv_j;
  MetricJets power = m;
  log_det_ = RealJet(layout, 0.0);
  for (int k = 1; k <= order_; ++k) {
    term = matmul(m, term, n_);
    for (auto& t : term) t *= -1.0;
    for (std::size_t i = 0; i < ginv_.size(); ++i) ginv_[i] += term[i];
    RealJet tr(layout, 0.0);
    for (int i = 0; i < n_; ++i) tr += power[idx(i, i)];
    log_det_ += tr * ((k % 2 == 1 ? 1.0 : -1.0) / k);
    if (k < order_) power = matmul(power, m, n_);
  }
  det_ = exp(log_det_) * det0_sq;
  sqrt_det_ = exp(log_det_ * 0.5) * det0;
  quarter_ = exp(log_det_ * 0.25) * std::sqrt(det0);
  inv_quarter_ = exp(log_det_ * -0.25) / std::sqrt(det0);
}

RealJet LocalGeometry::omega(int i) const { return log_det_.derivative(i) * -0.25; }

void LocalGeometry::build_gamma() const {
  if (!gamma_.empty()) return;
  if (order_ < 1) throw std::logic_error("Christoffel symbols need metric jets of order >= 1");
  const auto n = static_cast<std::size_t>(n_);
  // d_k g_ij stored at (k*n + i)*n + j.
  std::vector<RealJet> dg;
  dg.reserve(n * n * n);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) dg.push_back(g_[idx(i, j)].derivative(k));
  auto d = [&](int k, int i, int j) -> const RealJet& {
    return dg[static_cast<std::size_t>((k * n_ + i) * n_ + j)];
  };
  // Lowered symbols G_ljk = (d_j g_lk + d_k g_lj - d_l g_jk)/2.
  std::vector<RealJet> low;
  low.reserve(n * n * n);
  for (int l = 0; l < n_; ++l)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) low.push_back((d(j, l, k) + d(k, l, j) - d(l, j, k)) * 0.5);
  gamma_.reserve(n * n * n);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        RealJet s = ginv_[idx(i, 0)] * low[static_cast<std::size_t>((0 * n_ + j) * n_ + k)];
        for (int l = 1; l < n_; ++l)
          s += ginv_[idx(i, l)] * low[static_cast<std::size_t>((l * n_ + j) * n_ + k)];
        gamma_.push_back(std::move(s));
      }
}

const RealJet& LocalGeometry::gamma(int i, int j, int k) const {
  build_gamma();
  return gamma_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
}

void LocalGeometry::build_curvature() const {
  if (!riemann_.empty()) return;
  if (order_ < 2) throw std::logic_error("curvature needs metric jets of order >= 2");
  build_gamma();
  const auto n = static_cast<std::size_t>(n_);
  riemann_.reserve(n * n * n * n);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          RealJet r = gamma(i, l, j).derivative(k) - gamma(i, k, j).derivative(l);
          for (int m = 0; m < n_; ++m)
            r += gamma(i, k, m) * gamma(m, l, j) - gamma(i, l, m) * gamma(m, k, j);
          riemann_.push_back(std::move(r));
        }
  ricci_.reserve(n * n);
  for (int j = 0; j < n_; ++j)
    for (int l = 0; l < n_; ++l) {
      RealJet s = riemann(0, j, 0, l);
      for (int i = 1; i < n_; ++i) s += riemann(i, j, i, l);
      ricci_.push_back(std::move(s));
    }
  scalar_ = RealJet(ricci_.front().layout(), 0.0);
  for (int j = 0; j < n_; ++j)
    for (int l = 0; l < n_; ++l) scalar_ += ginv_[idx(j, l)] * ricci_[idx(j, l)];
}

const RealJet& LocalGeometry::riemann(int i, int j, int k, int l) const {
  build_curvature();
  return riemann_[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
}

const RealJet& LocalGeometry::ricci(int j, int l) const {
  build_curvature();
  return ricci_[idx(j, l)];
}

const RealJet& LocalGeometry::scalar_std() const {
  build_curvature();
  return scalar_;
}

// ---------------------------------------------------------------------------
// MetricChart

MetricChart::MetricChart(std::string name, int dim, std::vector<Expression> upper,
                         std::vector<Interval> domain, std::vector<std::optional<double>> periods,
                         ParseOptions names)
    : name_(std::move(name)),
      n_(dim),
      upper_(std::move(upper)),
      domain_(std::move(domain)),
      periods_(std::move(periods)),
      names_(std::move(names)) {
  const auto n = static_cast<std::size_t>(n_);
  if (n_ <= 0) throw std::invalid_argument("chart dimension must be positive");
  if (upper_.size() != n * (n + 1) / 2)
    throw std::invalid_argument("metric needs n(n+1)/2 upper-triangle components");
  if (domain_.empty()) domain_.resize(n);
  if (periods_.empty()) periods_.resize(n);
  if (domain_.size() != n || periods_.size() != n)
    throw std::invalid_argument("domain and periodicity must have one entry per coordinate");
  names_.dimension = n_;
  for (const auto& e : upper_) {
    if (e.max_variable() >= n_)
      throw DomainError("metric component " + e.to_string() + " uses a coordinate beyond x" +
                        std::to_string(n_));
    if (e.uses_time()) throw DomainError("metric components must be time independent");
    if (e.uses_imaginary_unit()) throw DomainError("metric components must be real");
  }

  // The jet source holds its own copies so charts can be copied freely.
  auto comps = upper_;
  auto dom = domain_;
  auto per = periods_;
  const int nn = n_;
  field_ = MetricField(n_, [comps, dom, per, nn](std::span<const double> p, int order) {
    if (p.size() != static_cast<std::size_t>(nn))
      throw std::invalid_argument("point dimension does not match the chart");
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (per[k]) continue;
      if (!(p[k] > dom[k].lo && p[k] < dom[k].hi))
        throw DomainError("point " + format_point(p) + " lies outside the chart domain");
    }
    MetricJets g(static_cast<std::size_t>(nn * nn));
    for (int i = 0; i < nn; ++i)
      for (int j = i; j < nn; ++j) {
        auto jet = eval_jet(comps[upper_index(nn, i, j)], p, order);
        if (i != j) g[static_cast<std::size_t>(j * nn + i)] = jet;
        g[static_cast<std::size_t>(i * nn + j)] = std::move(jet);
      }
    return g;
  });
}

MetricChart MetricChart::euclidean(int n) {
  std::vector<Expression> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) upper.push_back(Expression::number(i == j ? 1.0 : 0.0));
  return MetricChart("euclidean(" + std::to_string(n) + ")", n, std::move(upper), {}, {});
}

MetricChart MetricChart::circle(double length) {
  if (!(length > 0.0)) throw DomainError("circle length must be positive");
  std::ostringstream name;
  name << "circle(" << length << ")";
  return MetricChart(name.str(), 1, {Expression::number(1.0)}, {Interval{0.0, length}}, {length});
}

MetricChart MetricChart::flat_torus(double l1, double l2) {
  if (!(l1 > 0.0 && l2 > 0.0)) throw DomainError("torus lengths must be positive");
  std::ostringstream name;
  name << "flat_torus(" << l1 << ", " << l2 << ")";
  return MetricChart(name.str(), 2,
                     {Expression::number(1.0), Expression::number(0.0), Expression::number(1.0)},
                     {Interval{0.0, l1}, Interval{0.0, l2}}, {l1, l2});
}

MetricChart MetricChart::sphere(double radius) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  const auto r2 = Expression::number(radius * radius);
  auto s = Expression::power(Expression::call(Function::Sin, Expression::variable(0)), 2);
  ParseOptions names;
  names.aliases = {{"theta", 0}, {"phi", 1}};
  std::ostringstream name;
  name << "sphere(" << radius << ")";
  return MetricChart(name.str(), 2,
                     {radius == 1.0 ? Expression::number(1.0) : r2, Expression::number(0.0),
                      radius == 1.0 ? s : r2 * s},
                     {Interval{0.0, std::numbers::pi}, Interval{0.0, 2.0 * std::numbers::pi}},
                     {std::nullopt, 2.0 * std::numbers::pi}, std::move(names));
}

MetricChart MetricChart::half_plane() {
  auto inv = Expression::number(1.0) / Expression::power(Expression::variable(1), 2);
  return MetricChart("half_plane", 2, {inv, Expression::number(0.0), inv},
                     {Interval{}, Interval{0.0, std::numeric_limits<double>::infinity()}}, {});
}

MetricChart MetricChart::from_strings(std::string name, int dim,
                                      const std::vector<std::string>& components,
                                      std::vector<Interval> domain,
                                      std::vector<std::optional<double>> periods, ParseOptions names) {
  names.dimension = dim;
  const auto n = static_cast<std::size_t>(dim);
  std::vector<Expression> upper;
  if (components.size() == n * n) {
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        auto a = parse(components[static_cast<std::size_t>(i * dim + j)], names);
        auto b = parse(components[static_cast<std::size_t>(j * dim + i)], names);
        if (!(a == b))
          throw DomainError("metric is not symmetric: g" + std::to_string(i + 1) +
                            std::to_string(j + 1) + " != g" + std::to_string(j + 1) +
                            std::to_string(i + 1));
        upper.push_back(std::move(a));
      }
  } else if (components.size() == n * (n + 1) / 2) {
    for (const auto& c : components) upper.push_back(parse(c, names));
  } else {
    throw DomainError("metric needs n*n or n(n+1)/2 components, got " +
                      std::to_string(components.size()));
  }
  return MetricChart(std::move(name), dim, std::move(upper), std::move(domain), std::move(periods),
                     std::move(names));
}

const Expression& MetricChart::component(int i, int j) const {
  return upper_[upper_index(n_, i, j)];
}

bool MetricChart::contains(std::span<const double> p) const {
  if (p.size() != static_cast<std::size_t>(n_)) return false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (periods_[k]) continue;
    if (!(p[k] > domain_[k].lo && p[k] < domain_[k].hi)) return false;
  }
  return true;
}

void MetricChart::require_inside(std::span<const double> p) const {
  if (!contains(p)) throw DomainError("point " + format_point(p) + " lies outside " + name_);
}

MetricChart MetricChart::scaled(double c) const {
  std::vector<Expression> upper;
  upper.reserve(upper_.size());
  const auto c2 = Expression::number(c * c);
  for (const auto& e : upper_) upper.push_back(c2 * e);
  std::ostringstream name;
  name << name_ << " scaled by " << c;
  return MetricChart(name.str(), n_, std::move(upper), domain_, periods_, names_);
}

// ---------------------------------------------------------------------------
// Pointwise geometry

MetricValue metric_at(const MetricField& m, std::span<const double> p) {
  const int n = m.dim();
  const auto g = m.jets(p, 0);
  MetricValue out;
  out.g = values_of(g, n);
  const auto llt = checked_cholesky(out.g, p);
  out.inverse = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const double root = llt.matrixL().toDenseMatrix().diagonal().prod();
  out.det = root * root;
  out.quarter_power = std::sqrt(root);
  return out;
}

MetricValue metric_at(const MetricChart& m, std::span<const double> p) {
  m.require_inside(p);
  return metric_at(m.field(), p);
}

namespace {

CurvatureData curvature_data(const MetricField& m, std::span<const double> p, bool curvature) {
  const int n = m.dim();
  LocalGeometry geo(n, m.jets(p, curvature ? 2 : 1));
  CurvatureData out;
  out.point.assign(p.begin(), p.end());
  out.dim = n;
  const auto nn = static_cast<std::size_t>(n);
  out.gamma_std.reserve(nn * nn * nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.gamma_std.push_back(geo.gamma(i, j, k).value());
  out.gamma_paper.reserve(out.gamma_std.size());
  for (double v : out.gamma_std) out.gamma_paper.push_back(v == 0.0 ? 0.0 : -v);
  if (!curvature) return out;
  out.riemann.reserve(nn * nn * nn * nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out.riemann.push_back(geo.riemann(i, j, k, l).value());
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out.ricci.push_back(geo.ricci(j, l).value());
  out.r_std = geo.scalar_std().value();
  out.r_paper = out.r_std == 0.0 ? 0.0 : -out.r_std;
  out.has_curvature = true;
  return out;
}

}  // namespace

CurvatureData christoffel(const MetricField& m, std::span<const double> p) {
  return curvature_data(m, p, false);
}

CurvatureData christoffel(const MetricChart& m, std::span<const double> p) {
  m.require_inside(p);
  return curvature_data(m.field(), p, false);
}

CurvatureData scalar_curvature(const MetricField& m, std::span<const double> p) {
  return curvature_data(m, p, true);
}

CurvatureData scalar_curvature(const MetricChart& m, std::span<const double> p) {
  m.require_inside(p);
  return curvature_data(m.field(), p, true);
}

// ---------------------------------------------------------------------------
// NormalChart

struct NormalChart::Data {
  int n = 0;
  std::vector<double> center;
  Eigen::MatrixXd linear;
  std::vector<double> quad;   // [(i*n + a)*n + b]
  std::vector<double> cubic;  // [((i*n + a)*n + b)*n + c]
  MetricField source;

  // x^i(y) as jets about y, evaluated by polynomial arithmetic on coordinate jets.
  std::vector<RealJet> transition(std::span<const double> y, int order) const {
    const auto nn = static_cast<std::size_t>(n);
    std::vector<RealJet> ys;
    ys.reserve(nn);
    for (int a = 0; a < n; ++a) ys.push_back(RealJet::variable(n, order, a, y[static_cast<std::size_t>(a)]));
    std::vector<RealJet> yy;
    yy.reserve(nn * nn);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) yy.push_back(ys[static_cast<std::size_t>(a)] * ys[static_cast<std::size_t>(b)]);
    std::vector<RealJet> x;
    x.reserve(nn);
    for (int i = 0; i < n; ++i) {
      RealJet xi = RealJet::constant(n, order, center[static_cast<std::size_t>(i)]);
      for (int a = 0; a < n; ++a) {
        xi += ys[static_cast<std::size_t>(a)] * linear(i, a);
        for (int b = 0; b < n; ++b) {
          const auto& yab = yy[static_cast<std::size_t>(a * n + b)];
          const double q = quad[static_cast<std::size_t>((i * n + a) * n + b)];
          RealJet acc = RealJet::constant(n, order, q);
          for (int c = 0; c < n; ++c) {
            const double cc = cubic[static_cast<std::size_t>(((i * n + a) * n + b) * n + c)];
            if (cc != 0.0) acc += ys[static_cast<std::size_t>(c)] * cc;
          }
          xi += yab * acc;
        }
      }
      x.push_back(std::move(xi));
    }
    return x;
  }
};

NormalChart::NormalChart(const MetricField& m, std::span<const double> p) : n_(m.dim()) {
  auto data = std::make_shared<Data>();
  data->n = n_;
  data->center.assign(p.begin(), p.end());
  data->source = m;
  const auto nn = static_cast<std::size_t>(n_);

  LocalGeometry geo(n_, m.jets(p, 2));
  const Eigen::MatrixXd g0 = values_of([&] {
    MetricJets g;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) g.push_back(geo.g(i, j));
    return g;
  }(), n_);
  const auto llt = checked_cholesky(g0, p);
  const Eigen::MatrixXd lower = llt.matrixL();
  data->linear = lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n_, n_));

  // Tensors in the unit-normalised directions v = L y.
  std::vector<int> e(nn, 0);
  auto dgamma = [&](int i, int j, int k, int l) {
    std::fill(e.begin(), e.end(), 0);
    e[static_cast<std::size_t>(l)] = 1;
    return geo.gamma(i, j, k).derivative_value(e);
  };
  std::vector<double> t2(nn * nn * nn), t3(nn * nn * nn * nn);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        t2[static_cast<std::size_t>((i * n_ + j) * n_ + k)] = -0.5 * geo.gamma(i, j, k).value();
        for (int l = 0; l < n_; ++l) {
          double s = dgamma(i, j, k, l);
          for (int q = 0; q < n_; ++q) s -= 2.0 * geo.gamma(i, q, k).value() * geo.gamma(q, j, l).value();
          t3[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)] = -s / 6.0;
        }
      }
  const auto& lin = data->linear;
  data->quad.assign(nn * nn * nn, 0.0);
  data->cubic.assign(nn * nn * nn * nn, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        double q = 0.0;
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k)
            q += t2[static_cast<std::size_t>((i * n_ + j) * n_ + k)] * lin(j, a) * lin(k, b);
        data->quad[static_cast<std::size_t>((i * n_ + a) * n_ + b)] = q;
        for (int c = 0; c < n_; ++c) {
          double s = 0.0;
          for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
              for (int l = 0; l < n_; ++l)
                s += t3[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)] * lin(j, a) *
                     lin(k, b) * lin(l, c);
          data->cubic[static_cast<std::size_t>(((i * n_ + a) * n_ + b) * n_ + c)] = s;
        }
      }
  data_ = data;

  const int n = n_;
  std::shared_ptr<const Data> d = data_;
  metric_ = MetricField(n_, [d, n](std::span<const double> y, int order) {
    // g_N(y) = J^T g(x(y)) J, with g(x) re-expanded about x(y).
    const auto x = d->transition(y, order + 1);
    std::vector<double> x0(static_cast<std::size_t>(n));
    std::vector<RealJet> delta;
    for (int i = 0; i < n; ++i) {
      x0[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].value();
      auto di = x[static_cast<std::size_t>(i)].truncated(order);
      di[0] = 0.0;
      delta.push_back(std::move(di));
    }
    const auto gx = d->source.jets(x0, order);
    MetricJets gy;
    gy.reserve(gx.size());
    for (const auto& gij : gx) gy.push_back(compose(gij, delta));
    std::vector<RealJet> jac;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) jac.push_back(x[static_cast<std::size_t>(i)].derivative(a));
    MetricJets out;
    out.reserve(gx.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        RealJet s = RealJet::constant(n, order, 0.0);
        for (int i = 0; i < n; ++i) {
          RealJet row = RealJet::constant(n, order, 0.0);
          for (int j = 0; j < n; ++j)
            row += gy[static_cast<std::size_t>(i * n + j)] * jac[static_cast<std::size_t>(j * n + b)];
          s += jac[static_cast<std::size_t>(i * n + a)] * row;
        }
        out.push_back(std::move(s));
      }
    return out;
  });
}

const std::vector<double>& NormalChart::center() const noexcept { return data_->center; }
const Eigen::MatrixXd& NormalChart::linear() const noexcept { return data_->linear; }

double NormalChart::quadratic(int i, int a, int b) const {
  return data_->quad[static_cast<std::size_t>((i * n_ + a) * n_ + b)];
}

double NormalChart::cubic(int i, int a, int b, int c) const {
  return data_->cubic[static_cast<std::size_t>(((i * n_ + a) * n_ + b) * n_ + c)];
}

std::vector<RealJet> NormalChart::transition(std::span<const double> y, int order) const {
  return data_->transition(y, order);
}

std::vector<RealJet> NormalChart::jacobian(std::span<const double> y, int order) const {
  const auto x = data_->transition(y, order + 1);
  std::vector<RealJet> jac;
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < n_; ++a) jac.push_back(x[static_cast<std::size_t>(i)].derivative(a));
  return jac;
}

template <class T>
Field<T> NormalChart::pull_back_impl(const Field<T>& f) const {
  std::shared_ptr<const Data> d = data_;
  const int n = n_;
  return Field<T>(n_, [d, f, n](std::span<const double> y, int order) {
    const auto x = d->transition(y, order);
    std::vector<double> x0(static_cast<std::size_t>(n));
    std::vector<RealJet> delta;
    for (int i = 0; i < n; ++i) {
      x0[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].value();
      auto di = x[static_cast<std::size_t>(i)];
      di[0] = 0.0;
      delta.push_back(std::move(di));
    }
    return compose(f.jet(x0, order), delta);
  });
}

RealField NormalChart::pull_back(const RealField& f) const { return pull_back_impl(f); }
ComplexField NormalChart::pull_back(const ComplexField& f) const { return pull_back_impl(f); }

std::vector<RealField> NormalChart::pull_back_covector(const std::vector<RealField>& a) const {
  if (a.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("covector needs one component per coordinate");
  std::vector<RealField> pulled;
  for (const auto& ai : a) pulled.push_back(pull_back(ai));
  std::shared_ptr<const Data> d = data_;
  const int n = n_;
  std::vector<RealField> out;
  for (int b = 0; b < n_; ++b) {
    out.emplace_back(n_, [d, pulled, n, b](std::span<const double> y, int order) {
      const auto x = d->transition(y, order + 1);
      RealJet s = RealJet::constant(n, order, 0.0);
      for (int i = 0; i < n; ++i)
        s += pulled[static_cast<std::size_t>(i)].jet(y, order) * x[static_cast<std::size_t>(i)].derivative(b);
      return s;
    });
  }
  return out;
}

}  // namespace cqmq
