#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cqmq/expression.hpp"
#include "cqmq/jet.hpp"

namespace cqmq {
namespace {

TEST(JetLayout, GradedOrderAndPrefix) {
  auto layout = JetLayout::get(2, 3);
  EXPECT_EQ(layout->size(), 10u);
  EXPECT_EQ(layout->prefix(0), 1u);
  EXPECT_EQ(layout->prefix(1), 3u);
  EXPECT_EQ(layout->prefix(2), 6u);
  for (std::size_t i = 1; i < layout->size(); ++i) EXPECT_LE(layout->degree(i - 1), layout->degree(i));
  const int too_high[] = {2, 2};
  EXPECT_EQ(layout->index_of(too_high), JetLayout::npos);
  EXPECT_EQ(JetLayout::get(2, 3).get(), layout.get());
}

TEST(Jet, PolynomialCoefficientsAreExact) {
  // (x + 2y)^3 about (1, -1): coefficients from the binomial expansion of (-1 + h + 2k)^3.
  const int order = 3;
  auto x = RealJet::variable(2, order, 0, 1.0);
  auto y = RealJet::variable(2, order, 1, -1.0);
  auto s = x + 2.0 * y;
  auto f = s * s * s;
  EXPECT_DOUBLE_EQ(f.value(), -1.0);
  EXPECT_DOUBLE_EQ(f.coeff({1, 0}), 3.0);
  EXPECT_DOUBLE_EQ(f.coeff({0, 1}), 6.0);
  EXPECT_DOUBLE_EQ(f.coeff({2, 0}), -3.0);
  EXPECT_DOUBLE_EQ(f.coeff({1, 1}), -12.0);
  EXPECT_DOUBLE_EQ(f.coeff({0, 2}), -12.0);
  EXPECT_DOUBLE_EQ(f.coeff({3, 0}), 1.0);
  EXPECT_DOUBLE_EQ(f.coeff({2, 1}), 6.0);
  EXPECT_DOUBLE_EQ(f.coeff({1, 2}), 12.0);
  EXPECT_DOUBLE_EQ(f.coeff({0, 3}), 8.0);
  EXPECT_DOUBLE_EQ(f.derivative_value({1, 2}), 24.0);
}

TEST(Jet, ElementaryFunctionsMatchSeries) {
  auto x = RealJet::variable(1, 4, 0, 0.3);
  auto e = exp(x);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(e.coeff({k}), std::exp(0.3) / std::tgamma(k + 1.0), 1e-15);
  auto l = log(x);
  EXPECT_NEAR(l.coeff({1}), 1.0 / 0.3, 1e-13);
  EXPECT_NEAR(l.coeff({2}), -0.5 / (0.3 * 0.3), 1e-12);
  auto sc = sin(x) * sin(x) + cos(x) * cos(x);
  EXPECT_NEAR(sc.value(), 1.0, 1e-15);
  for (std::size_t i = 1; i < sc.size(); ++i) EXPECT_NEAR(sc[i], 0.0, 1e-14);
  auto r = sqrt(x) * sqrt(x) - x;
  EXPECT_LE(max_abs(r), 1e-14);
  auto p = pow(x, 2.5) / pow(x, 2) - sqrt(x);
  EXPECT_LE(max_abs(p), 1e-13 * max_abs(sqrt(x)));
}

TEST(Jet, ReciprocalOfZeroIsDomainError) {
  auto x = RealJet::variable(1, 2, 0, 0.0);
  EXPECT_THROW(x.reciprocal(), DomainError);
  EXPECT_THROW(log(x), DomainError);
  EXPECT_THROW(sqrt(x - 1.0), DomainError);
}

TEST(Jet, DerivativeLowersOrder) {
  auto x = RealJet::variable(2, 4, 0, 0.5);
  auto y = RealJet::variable(2, 4, 1, 0.25);
  auto f = sin(x * y);
  auto fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 3);
  EXPECT_NEAR(fx.value(), 0.25 * std::cos(0.125), 1e-15);
  EXPECT_NEAR(f.truncated(2).coeff({1, 1}), f.coeff({1, 1}), 0.0);
}

TEST(Jet, ComposeSubstitutesDisplacements) {
  // f(x) = x^2 about 1, x - 1 = 2y + y^2  =>  f = (1 + 2y + y^2)^2.
  auto x = RealJet::variable(1, 3, 0, 1.0);
  auto f = x * x;
  auto y = RealJet::variable(1, 3, 0, 0.0);
  std::vector<RealJet> d{2.0 * y + y * y};
  auto c = compose(f, std::span<const RealJet>(d));
  EXPECT_NEAR(c.coeff({0}), 1.0, 1e-15);
  EXPECT_NEAR(c.coeff({1}), 4.0, 1e-15);
  EXPECT_NEAR(c.coeff({2}), 6.0, 1e-15);
  EXPECT_NEAR(c.coeff({3}), 4.0, 1e-15);
}

TEST(Jet, ComplexPartsRoundTrip) {
  auto x = RealJet::variable(1, 3, 0, 0.4);
  auto z = exp(complexify(x) * std::complex<double>(0.0, 1.0));
  auto diff = real_part(z) - cos(x);
  EXPECT_LE(max_abs(diff), 1e-15);
  EXPECT_LE(max_abs(imag_part(z) - sin(x)), 1e-15);
}

// Random products of random trigonometric expressions against the
// truncated convolution of the factor jets.
TEST(JetProperty, ProductRuleOnRandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const char* atoms[] = {"sin(x1)", "cos(x2)", "exp(0.3*x1*x2)", "x1^2", "(1 + x2^2)", "cosh(x1 - x2)", "tan(0.2*x1)"};
  ParseOptions opts;
  opts.dimension = 2;
  for (int trial = 0; trial < 100; ++trial) {
    auto e1 = parse(std::string(atoms[rng() % 7]) + "*" + atoms[rng() % 7], opts);
    auto e2 = parse(std::string(atoms[rng() % 7]) + "+" + atoms[rng() % 7], opts);
    const double p[] = {u(rng), u(rng)};
    auto j1 = eval_jet(e1, p, 4);
    auto j2 = eval_jet(e2, p, 4);
    auto jp = eval_jet(e1 * e2, p, 4);
    auto conv = RealJet::multiply(j1, j2);
    for (std::size_t i = 0; i < jp.size(); ++i)
      EXPECT_LE(std::abs(jp[i] - conv[i]), 1e-12 * std::max(1.0, std::abs(conv[i])));
  }
}

TEST(JetProperty, FirstOrderMatchesCentralDifferences) {
  ParseOptions opts;
  opts.dimension = 2;
  auto e = parse("sin(x1)*exp(x2) + x1^3/(2 + cos(x2))", opts);
  const double h = 1e-5;
  for (double a : {-0.7, 0.1, 1.3}) {
    const double p[] = {a, 0.5 * a + 0.2};
    auto j = eval_jet(e, p, 1);
    for (int k = 0; k < 2; ++k) {
      double pp[] = {p[0], p[1]}, pm[] = {p[0], p[1]};
      pp[k] += h;
      pm[k] -= h;
      const double fd = (eval_jet(e, pp, 0).value() - eval_jet(e, pm, 0).value()) / (2 * h);
      EXPECT_NEAR(j.coeff(k == 0 ? std::initializer_list<int>{1, 0} : std::initializer_list<int>{0, 1}), fd, 1e-8);
    }
  }
}

}  // namespace
}  // namespace cqmq
