#include "cqmq/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace cqmq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string complex_num(double re, double im) {
  return "(" + num(re) + (im < 0 ? " - " : " + ") + num(std::abs(im)) + "*i)";
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Nonzero integer wave vectors with |k|_1 <= 2.
std::vector<std::vector<int>> wave_vectors(int dim) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(static_cast<std::size_t>(dim), -2);
  for (;;) {
    int l1 = 0;
    for (int c : k) l1 += std::abs(c);
    if (l1 > 0 && l1 <= 2) out.push_back(k);
    std::size_t a = 0;
    while (a < k.size() && ++k[a] > 2) k[a++] = -2;
    if (a == k.size()) break;
  }
  return out;
}

struct Wave {
  std::vector<int> k;
  double phase = 0.0;
};

Wave random_wave(int dim, std::mt19937_64& rng) {
  static thread_local std::vector<std::vector<std::vector<int>>> cache(4);
  auto& ks = cache[static_cast<std::size_t>(dim)];
  if (ks.empty()) ks = wave_vectors(dim);
  std::uniform_int_distribution<std::size_t> pick(0, ks.size() - 1);
  Wave w;
  w.k = ks[pick(rng)];
  w.phase = uniform(rng, 0.0, kTwoPi);
  return w;
}

/// "k.x + phase" as expression text.
std::string argument(const Wave& w) {
  std::string s;
  for (std::size_t i = 0; i < w.k.size(); ++i) {
    const int c = w.k[i];
    if (c == 0) continue;
    const std::string var = "x" + std::to_string(i + 1);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    if (std::abs(c) != 1) s += std::to_string(std::abs(c)) + "*";
    s += var;
  }
  return s + " + " + num(w.phase);
}

/// sum_j c_j cos(k_j.x + phi_j) plus a constant, with sum |c| = total.
std::string trig_poly(int dim, int terms, double total, std::mt19937_64& rng) {
  std::vector<double> c(static_cast<std::size_t>(terms) + 1);
  double norm = 0.0;
  for (auto& v : c) {
    v = uniform(rng, -1.0, 1.0);
    norm += std::abs(v);
  }
  std::string s = num(c[0] * total / norm);
  for (int j = 1; j <= terms; ++j) {
    const double coef = c[static_cast<std::size_t>(j)] * total / norm;
    s += (coef < 0 ? " - " : " + ") + num(std::abs(coef)) + "*cos(" + argument(random_wave(dim, rng)) + ")";
  }
  return s;
}

ParseOptions options_for(int dim) {
  ParseOptions o;
  o.dimension = dim;
  return o;
}

std::vector<double> random_point(const MetricChart& chart, std::mt19937_64& rng) {
  std::vector<double> p;
  for (int k = 0; k < chart.dim(); ++k) {
    const auto& box = chart.domain()[static_cast<std::size_t>(k)];
    const auto& period = chart.period(k);
    const bool lo = std::isfinite(box.lo), hi = std::isfinite(box.hi);
    double v;
    if (period)
      v = (lo ? box.lo : 0.0) + uniform(rng, 0.0, *period);
    else if (lo && hi)
      v = box.lo + (box.hi - box.lo) * uniform(rng, 0.1, 0.9);
    else if (lo)
      v = box.lo + uniform(rng, 0.5, 3.0);
    else if (hi)
      v = box.hi - uniform(rng, 0.5, 3.0);
    else
      v = uniform(rng, -2.0, 2.0);
    p.push_back(v);
  }
  return p;
}

CorpusEntry make_entry(MetricChart chart, std::mt19937_64& rng, std::vector<std::vector<double>> points,
                       int point_count, int sections) {
  CorpusEntry e{chart.name(), chart, {}, {}, {}, {}, std::move(points)};
  e.gauge = random_gauge(chart.dim(), rng, &e.gauge_source);
  for (int s = 0; s < sections; ++s) {
    std::string src;
    e.sections.push_back(random_section(chart.dim(), rng, &src, chart.names()));
    e.section_source.push_back(std::move(src));
  }
  while (static_cast<int>(e.points.size()) < point_count) e.points.push_back(random_point(chart, rng));
  for (const auto& p : e.points) {
    chart.require_inside(p);
    metric_at(chart, p);
  }
  return e;
}

}  // namespace

MetricChart random_metric(int dim, std::mt19937_64& rng, std::string name) {
  if (dim < 1 || dim > 3) throw DomainError("random metrics are generated in 1 to 3 dimensions");
  const double eps = uniform(rng, 0.05, 0.2);
  std::vector<std::string> upper;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const std::string s = trig_poly(dim, 3, eps / dim, rng);
      upper.push_back(i == j ? "1 + " + s : s);
    }
  std::vector<std::optional<double>> periods(static_cast<std::size_t>(dim), kTwoPi);
  std::vector<Interval> domain(static_cast<std::size_t>(dim), Interval{0.0, kTwoPi});
  return MetricChart::from_strings(std::move(name), dim, upper, domain, periods, options_for(dim));
}

GaugePotential random_gauge(int dim, std::mt19937_64& rng, std::vector<std::string>* source) {
  const Wave w1 = random_wave(dim, rng), w2 = random_wave(dim, rng);
  const double a = uniform(rng, -0.3, 0.3), b = uniform(rng, -0.3, 0.3);
  std::vector<std::string> text{num(uniform(rng, -1.0, 1.0))};
  // chi = a sin(w1) + b cos(w2).
  for (int i = 0; i < dim; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    std::string s = num(uniform(rng, -0.5, 0.5));
    if (w1.k[ui] != 0) s += " + " + num(a * w1.k[ui]) + "*cos(" + argument(w1) + ")";
    if (w2.k[ui] != 0) s += " - " + num(b * w2.k[ui]) + "*sin(" + argument(w2) + ")";
    text.push_back(std::move(s));
  }
  const auto opts = options_for(dim);
  std::vector<Expression> spatial;
  for (int i = 0; i < dim; ++i) spatial.push_back(parse(text[static_cast<std::size_t>(i) + 1], opts));
  auto g = GaugePotential::from_expressions(parse(text[0], opts), spatial, dim);
  if (source) *source = std::move(text);
  return g;
}

HalfFormSection random_section(int dim, std::mt19937_64& rng, std::string* source, const ParseOptions& names) {
  const double mod = uniform(rng, 0.6, 1.2), arg = uniform(rng, 0.0, kTwoPi);
  std::string s = complex_num(mod * std::cos(arg), mod * std::sin(arg));
  for (int j = 0; j < 3; ++j) {
    s += " + " + complex_num(uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4));
    s += (j % 2 ? "*sin(" : "*cos(") + argument(random_wave(dim, rng)) + ")";
  }
  ParseOptions o = names;
  o.dimension = dim;
  auto section = HalfFormSection::from_expression(parse(s, o), dim, Frame::Eta);
  if (source) *source = std::move(s);
  return section;
}

SpecialPhaseFunction random_special(int dim, double f0, std::mt19937_64& rng, std::string label) {
  const auto opts = options_for(dim);
  std::vector<Expression> lin;
  for (int i = 0; i < dim; ++i) lin.push_back(parse(trig_poly(dim, 2, uniform(rng, 0.3, 1.0), rng), opts));
  const auto scal = parse(trig_poly(dim, 2, uniform(rng, 0.3, 1.0), rng), opts);
  return SpecialPhaseFunction::from_expressions(f0, lin, scal, dim, std::move(label));
}

Corpus build_corpus(std::uint64_t seed, const CorpusSpec& spec) {
  Corpus c;
  c.seed = seed;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < spec.random_2d; ++i)
    c.entries.push_back(make_entry(random_metric(2, rng, "random2d-" + std::to_string(i)), rng, {},
                                   spec.points_per_metric, spec.sections_per_metric));
  for (int i = 0; i < spec.random_3d; ++i)
    c.entries.push_back(make_entry(random_metric(3, rng, "random3d-" + std::to_string(i)), rng, {},
                                   spec.points_per_metric, spec.sections_per_metric));
  if (spec.include_sphere)
    c.entries.push_back(make_entry(MetricChart::sphere(1.0), rng, {{std::numbers::pi / 2, 0.0}},
                                   spec.points_per_metric, spec.sections_per_metric));
  if (spec.include_half_plane)
    c.entries.push_back(make_entry(MetricChart::half_plane(), rng, {{0.0, 2.0}}, spec.points_per_metric,
                                   spec.sections_per_metric));
  c.descriptor = "seed=" + std::to_string(seed) + " random2d=" + std::to_string(spec.random_2d) +
                 " random3d=" + std::to_string(spec.random_3d) +
                 " points=" + std::to_string(spec.points_per_metric) + (spec.include_sphere ? " sphere" : "") +
                 (spec.include_half_plane ? " half_plane" : "");
  return c;
}

Corpus corpus_for_chart(const MetricChart& chart, std::uint64_t seed, std::vector<std::vector<double>> points,
                        int points_per_metric, int sections) {
  Corpus c;
  c.seed = seed;
  std::mt19937_64 rng(seed);
  const int count = std::max<int>(points_per_metric, static_cast<int>(points.size()));
  c.entries.push_back(make_entry(chart, rng, std::move(points), count, sections));
  c.descriptor = "seed=" + std::to_string(seed) + " " + chart.name();
  return c;
}

}  // namespace cqmq
