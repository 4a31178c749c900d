#include "cqmq/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace cqmq {

// ---------------------------------------------------------------------------
// JetLayout

namespace {

void enumerate(int vars, int degree, std::vector<int>& cur, int pos,
               std::vector<std::vector<int>>& out) {
  if (pos == vars - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate(vars, degree - e, cur, pos + 1, out);
  }
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 0 || order < 0) throw std::invalid_argument("jet layout needs vars >= 0, order >= 0");
  std::size_t table = 1;
  for (int k = 0; k < vars; ++k) {
    table *= static_cast<std::size_t>(order + 1);
    if (table > (std::size_t{1} << 24)) throw std::invalid_argument("jet layout too large");
  }

  std::vector<std::vector<int>> all;
  prefix_.reserve(static_cast<std::size_t>(order + 1));
  for (int d = 0; d <= order; ++d) {
    if (vars == 0) {
      if (d == 0) all.emplace_back();
    } else {
      std::vector<int> cur(static_cast<std::size_t>(vars), 0);
      enumerate(vars, d, cur, 0, all);
    }
    prefix_.push_back(all.size());
  }

  const auto n = all.size();
  const auto uv = static_cast<std::size_t>(vars);
  exponents_.resize(n * uv);
  degree_.resize(n);
  encoded_.assign(table, npos);
  for (std::size_t i = 0; i < n; ++i) {
    int deg = 0;
    std::size_t code = 0;
    for (std::size_t k = 0; k < uv; ++k) {
      exponents_[i * uv + k] = static_cast<std::uint8_t>(all[i][k]);
      deg += all[i][k];
      code = code * static_cast<std::size_t>(order + 1) + static_cast<std::size_t>(all[i][k]);
    }
    degree_[i] = deg;
    encoded_[code] = i;
  }

  raise_.resize(uv);
  lower_.assign(n * uv, npos);
  const std::size_t below = order > 0 ? prefix_[static_cast<std::size_t>(order - 1)] : 0;
  std::vector<int> alpha(uv);
  for (std::size_t k = 0; k < uv; ++k) {
    raise_[k].resize(below);
    for (std::size_t i = 0; i < below; ++i) {
      for (std::size_t m = 0; m < uv; ++m) alpha[m] = all[i][m];
      alpha[k] += 1;
      const auto j = index_of(alpha);
      raise_[k][i] = static_cast<std::uint32_t>(j);
      lower_[j * uv + k] = i;
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      for (std::size_t m = 0; m < uv; ++m) alpha[m] = all[a][m] + all[b][m];
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(index_of(alpha))});
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(vars, order);
  return slot;
}

std::size_t JetLayout::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(vars_))
    throw std::invalid_argument("multi-index length does not match jet variables");
  int deg = 0;
  std::size_t code = 0;
  for (int e : alpha) {
    if (e < 0) throw std::invalid_argument("negative multi-index entry");
    deg += e;
    if (deg > order_) return npos;
    code = code * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(e);
  }
  return encoded_[code];
}

std::size_t JetLayout::prefix(int d) const noexcept {
  if (d < 0) return 0;
  if (d >= order_) return degree_.size();
  return prefix_[static_cast<std::size_t>(d)];
}

// ---------------------------------------------------------------------------
// Jet

namespace {

template <class T>
bool is_finite(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(x);
  } else {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

template <class T>
T Jet<T>::derivative_value(std::span<const int> alpha) const {
  double f = 1.0;
  for (int e : alpha) f *= factorial(e);
  return coeff(alpha) * T(f);
}

template <class T>
Jet<T> Jet<T>::truncated(int order) const {
  if (order >= this->order()) return *this;
  if (order < 0) throw std::invalid_argument("negative jet order");
  auto lay = JetLayout::get(vars(), order);
  std::vector<T> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lay->size()));
  return Jet(std::move(lay), std::move(c));
}

template <class T>
Jet<T> Jet<T>::derivative(int k) const {
  if (order() == 0) throw std::invalid_argument("cannot differentiate an order-0 jet");
  auto lay = JetLayout::get(vars(), order() - 1);
  std::vector<T> c(lay->size());
  const auto up = layout_->raise(k);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto j = up[i];
    c[i] = c_[j] * T(static_cast<double>(layout_->exponent(j, k)));
  }
  return Jet(std::move(lay), std::move(c));
}

template <class T>
Jet<T>& Jet<T>::accumulate(const Jet& o, T sign) {
  if (o.vars() != vars()) throw std::invalid_argument("jet variable count mismatch");
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += sign * o.c_[i];
  return *this;
}

template <class T>
Jet<T> Jet<T>::multiply(const Jet& a, const Jet& b) {
  if (a.vars() != b.vars()) throw std::invalid_argument("jet variable count mismatch");
  const auto& lay = a.order() <= b.order() ? a.layout_ : b.layout_;
  Jet r(lay);
  auto& rc = r.c_;
  for (const auto& p : lay->products()) rc[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
  return r;
}

template <class T>
Jet<T> Jet<T>::compose_series(std::span<const T> coeffs) const {
  // Horner in delta = f - f(p); delta is nilpotent of index order+1.
  Jet delta(*this);
  delta.c_[0] = T{};
  const int d = std::min<int>(order(), static_cast<int>(coeffs.size()) - 1);
  Jet r(layout_, coeffs[static_cast<std::size_t>(d)]);
  for (int k = d - 1; k >= 0; --k) {
    r = multiply(r, delta);
    r.c_[0] += coeffs[static_cast<std::size_t>(k)];
  }
  for (const auto& x : r.c_)
    if (!is_finite(x)) throw DomainError("non-finite jet coefficient");
  return r;
}

template <class T>
Jet<T> Jet<T>::reciprocal() const {
  const T u = c_[0];
  if (u == T{}) throw DomainError("division by a jet with zero constant term");
  std::vector<T> k(static_cast<std::size_t>(order() + 1));
  T inv = T(1.0) / u;
  T term = inv;
  for (auto& x : k) {
    x = term;
    term *= -inv;
  }
  return compose_series(k);
}

template class Jet<double>;
template class Jet<std::complex<double>>;

// ---------------------------------------------------------------------------
// Elementary functions

namespace {

template <class T>
std::vector<T> series_buffer(const Jet<T>& x) {
  return std::vector<T>(static_cast<std::size_t>(x.order() + 1));
}

// Taylor coefficients of a function whose derivatives cycle with period 4
// (sin/cos) or 2 (sinh/cosh); `cycle` holds f, f', f'', f''' at the base.
template <class T>
Jet<T> periodic_series(const Jet<T>& x, const T (&cycle)[4]) {
  auto k = series_buffer(x);
  double fact = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i > 0) fact *= static_cast<double>(i);
    k[i] = cycle[i % 4] / T(fact);
  }
  return x.compose_series(k);
}

template <class T>
void require_positive(const T& u, const char* what, bool allow_zero) {
  if constexpr (std::is_same_v<T, double>) {
    if (!(u > 0.0) && !(allow_zero && u == 0.0))
      throw DomainError(std::string(what) + " of non-positive value " + std::to_string(u));
  } else {
    if (u == T{} && !allow_zero) throw DomainError(std::string(what) + " of zero");
  }
}

}  // namespace

template <class T>
Jet<T> exp(const Jet<T>& x) {
  auto k = series_buffer(x);
  const T e = std::exp(x.value());
  double fact = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i > 0) fact *= static_cast<double>(i);
    k[i] = e / T(fact);
  }
  return x.compose_series(k);
}

template <class T>
Jet<T> log(const Jet<T>& x) {
  const T u = x.value();
  require_positive(u, "log", false);
  auto k = series_buffer(x);
  k[0] = std::log(u);
  T p = T(1.0);
  for (std::size_t i = 1; i < k.size(); ++i) {
    p *= u;
    const double sign = (i % 2 == 1) ? 1.0 : -1.0;
    k[i] = T(sign / static_cast<double>(i)) / p;
  }
  return x.compose_series(k);
}

template <class T>
Jet<T> sin(const Jet<T>& x) {
  const T s = std::sin(x.value()), c = std::cos(x.value());
  const T cycle[4] = {s, c, -s, -c};
  return periodic_series(x, cycle);
}

template <class T>
Jet<T> cos(const Jet<T>& x) {
  const T s = std::sin(x.value()), c = std::cos(x.value());
  const T cycle[4] = {c, -s, -c, s};
  return periodic_series(x, cycle);
}

template <class T>
Jet<T> tan(const Jet<T>& x) {
  return sin(x) / cos(x);
}

template <class T>
Jet<T> sinh(const Jet<T>& x) {
  const T s = std::sinh(x.value()), c = std::cosh(x.value());
  const T cycle[4] = {s, c, s, c};
  return periodic_series(x, cycle);
}

template <class T>
Jet<T> cosh(const Jet<T>& x) {
  const T s = std::sinh(x.value()), c = std::cosh(x.value());
  const T cycle[4] = {c, s, c, s};
  return periodic_series(x, cycle);
}

template <class T>
Jet<T> pow(const Jet<T>& x, double a) {
  const T u = x.value();
  require_positive(u, "fractional power", x.order() == 0);
  auto k = series_buffer(x);
  k[0] = std::pow(u, a);
  for (std::size_t i = 1; i < k.size(); ++i)
    k[i] = k[i - 1] * T((a - static_cast<double>(i) + 1.0) / static_cast<double>(i)) / u;
  return x.compose_series(k);
}

template <class T>
Jet<T> sqrt(const Jet<T>& x) {
  if (x.order() == 0) {
    require_positive(x.value(), "sqrt", true);
    return Jet<T>(x.layout(), std::sqrt(x.value()));
  }
  return pow(x, 0.5);
}

template <class T>
Jet<T> pow(const Jet<T>& x, int n) {
  if (n < 0) return pow(x, -n).reciprocal();
  Jet<T> result(x.layout(), T(1.0));
  Jet<T> base = x;
  unsigned e = static_cast<unsigned>(n);
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

#define CQMQ_INSTANTIATE_FUNCTIONS(T)                 \
  template Jet<T> exp(const Jet<T>&);                 \
  template Jet<T> log(const Jet<T>&);                 \
  template Jet<T> sin(const Jet<T>&);                 \
  template Jet<T> cos(const Jet<T>&);                 \
  template Jet<T> tan(const Jet<T>&);                 \
  template Jet<T> sinh(const Jet<T>&);                \
  template Jet<T> cosh(const Jet<T>&);                \
  template Jet<T> sqrt(const Jet<T>&);                \
  template Jet<T> pow(const Jet<T>&, int);            \
  template Jet<T> pow(const Jet<T>&, double);

CQMQ_INSTANTIATE_FUNCTIONS(double)
CQMQ_INSTANTIATE_FUNCTIONS(std::complex<double>)
#undef CQMQ_INSTANTIATE_FUNCTIONS

ComplexJet complexify(const RealJet& x) {
  std::vector<std::complex<double>> c(x.coefficients().begin(), x.coefficients().end());
  return ComplexJet(x.layout(), std::move(c));
}

RealJet real_part(const ComplexJet& x) {
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x[i].real();
  return RealJet(x.layout(), std::move(c));
}

RealJet imag_part(const ComplexJet& x) {
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x[i].imag();
  return RealJet(x.layout(), std::move(c));
}

template <class T>
Jet<T> compose(const Jet<T>& outer, std::span<const RealJet> deltas) {
  const auto& lay = *outer.layout();
  if (deltas.size() != static_cast<std::size_t>(lay.vars()))
    throw std::invalid_argument("compose: one delta per outer variable required");
  if (deltas.empty()) return outer;
  int order = outer.order();
  const int yvars = deltas.front().vars();
  for (const auto& d : deltas) {
    if (d.vars() != yvars) throw std::invalid_argument("compose: inconsistent inner jets");
    order = std::min(order, d.order());
  }
  std::vector<RealJet> delta;
  delta.reserve(deltas.size());
  for (const auto& d : deltas) {
    auto t = d.truncated(order);
    t[0] = 0.0;
    delta.push_back(std::move(t));
  }
  // monomial[i] = delta^alpha_i, built from alpha - e_k for the first nonzero k.
  const std::size_t count = lay.prefix(order);
  std::vector<RealJet> monomial(count);
  Jet<T> result(JetLayout::get(yvars, order), outer.value());
  monomial[0] = RealJet(JetLayout::get(yvars, order), 1.0);
  for (std::size_t i = 1; i < count; ++i) {
    int k = 0;
    while (lay.exponent(i, k) == 0) ++k;
    monomial[i] = monomial[lay.lower(i, k)] * delta[static_cast<std::size_t>(k)];
    const T a = outer[i];
    if (a == T{}) continue;
    for (std::size_t m = 0; m < result.size(); ++m) result[m] += a * monomial[i][m];
  }
  return result;
}

template ComplexJet compose(const ComplexJet&, std::span<const RealJet>);
template RealJet compose(const RealJet&, std::span<const RealJet>);

template <class T>
Jet<T> restrict_to_leading(const Jet<T>& x, int vars) {
  if (vars > x.vars()) throw std::invalid_argument("restrict_to_leading: too many variables");
  auto lay = JetLayout::get(vars, x.order());
  Jet<T> r(lay);
  std::vector<int> alpha(static_cast<std::size_t>(x.vars()), 0);
  for (std::size_t i = 0; i < lay->size(); ++i) {
    for (int k = 0; k < vars; ++k) alpha[static_cast<std::size_t>(k)] = lay->exponent(i, k);
    r[i] = x[x.layout()->index_of(alpha)];
  }
  return r;
}

template ComplexJet restrict_to_leading(const ComplexJet&, int);
template RealJet restrict_to_leading(const RealJet&, int);

template <class T>
double max_abs(const Jet<T>& x) {
  double m = 0.0;
  for (const auto& c : x.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

template double max_abs(const RealJet&);
template double max_abs(const ComplexJet&);

}  // namespace cqmq
