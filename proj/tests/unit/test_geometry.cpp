#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cqmq/corpus.hpp"
#include "cqmq/geometry.hpp"

namespace cqmq {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = u(rng);
  return p;
}

TEST(MetricAt, EuclideanIsIdentity) {
  const auto m = MetricChart::euclidean(2);
  const double p[] = {1.0, 1.0};
  const auto v = metric_at(m, p);
  EXPECT_TRUE(v.g.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_DOUBLE_EQ(v.det, 1.0);
  EXPECT_DOUBLE_EQ(v.quarter_power, 1.0);
}

TEST(MetricAt, SphereEquatorAndMidLatitude) {
  const auto s = MetricChart::sphere(1.0);
  const double eq[] = {kPi / 2, 0.0};
  const auto a = metric_at(s, eq);
  EXPECT_NEAR((a.g - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_NEAR(a.det, 1.0, 1e-15);
  const double mid[] = {kPi / 4, 0.0};
  const auto b = metric_at(s, mid);
  EXPECT_NEAR(b.det, 0.5, 1e-15);
  EXPECT_NEAR(b.quarter_power, std::pow(2.0, -0.25), 1e-15);
  EXPECT_NEAR((b.g * b.inverse - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(MetricAt, IndefiniteMetricIsRejected) {
  const auto m = MetricChart::from_strings("bad", 2, {"1", "2", "1"});
  const double p[] = {0.0, 0.0};
  EXPECT_THROW(metric_at(m, p), NotPositiveDefinite);
}

TEST(MetricChart, FullMatrixMustBeSymmetric) {
  EXPECT_NO_THROW(MetricChart::from_strings("full", 2, {"1", "x1", "x1", "2"}));
  EXPECT_THROW(MetricChart::from_strings("asym", 2, {"1", "x1", "x2", "2"}), DomainError);
}

TEST(Christoffel, EuclideanVanishes) {
  const double p[] = {0.3, -2.0, 5.0};
  const auto c = christoffel(MetricChart::euclidean(3), p);
  for (double v : c.gamma_paper) EXPECT_EQ(v, 0.0);
}

TEST(Christoffel, SphereFlippedSign) {
  const auto s = MetricChart::sphere(1.0);
  const double mid[] = {kPi / 4, 0.0};
  const auto c = christoffel(s, mid);
  EXPECT_NEAR(c.gamma(0, 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(c.gamma_standard(0, 1, 1), -0.5, 1e-15);
  // Independent finite-difference evaluation of -(1/2) g^{tt} (-d_t g_pp).
  const double h = 1e-6;
  const double dgpp = (std::pow(std::sin(kPi / 4 + h), 2) - std::pow(std::sin(kPi / 4 - h), 2)) / (2 * h);
  EXPECT_NEAR(c.gamma(0, 1, 1), -0.5 * (-dgpp), 1e-9);
  const double eq[] = {kPi / 2, 0.0};
  EXPECT_NEAR(christoffel(s, eq).gamma(0, 1, 1), 0.0, 1e-15);
}

TEST(Christoffel, SignsAreOppositeAndLowerIndicesSymmetric) {
  std::mt19937_64 rng(3);
  const auto m = random_metric(3, rng, "random3d");
  const auto c = christoffel(m, random_point(rng, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(c.gamma(i, j, k), -c.gamma_standard(i, j, k));
        EXPECT_NEAR(c.gamma(i, j, k), c.gamma(i, k, j), 1e-16);
      }
}

TEST(ScalarCurvature, ModelValues) {
  const double p[] = {0.4, 1.7};
  EXPECT_EQ(scalar_curvature(MetricChart::euclidean(2), p).r_paper, 0.0);
  for (double theta : {0.3, kPi / 3, kPi / 2, 2.5}) {
    const double q[] = {theta, 1.1};
    const auto c = scalar_curvature(MetricChart::sphere(1.0), q);
    EXPECT_NEAR(c.r_std, 2.0, 1e-12);
    EXPECT_NEAR(c.r_paper, -2.0, 1e-12);
  }
  const double hp[] = {0.0, 2.0};
  const auto c = scalar_curvature(MetricChart::half_plane(), hp);
  EXPECT_NEAR(c.r_std, -2.0, 1e-12);
  EXPECT_NEAR(c.r_paper, 2.0, 1e-12);
}

TEST(ScalarCurvature, SphereAtChartPoleIsDomainError) {
  const double pole[] = {0.0, 0.0};
  EXPECT_THROW(scalar_curvature(MetricChart::sphere(1.0), pole), DomainError);
}

TEST(ScalarCurvature, ScaleLaw) {
  std::mt19937_64 rng(11);
  for (int dim : {2, 3}) {
    const auto m = random_metric(dim, rng, "random");
    const auto p = random_point(rng, dim);
    const double r1 = scalar_curvature(m, p).r_std;
    const double r2 = scalar_curvature(m.scaled(2.0), p).r_std;
    EXPECT_NEAR(r2, r1 / 4.0, 1e-11 * std::abs(r1));
  }
}

TEST(GeometryProperty, MetricCompatibility) {
  std::mt19937_64 rng(5);
  for (int dim : {2, 3}) {
    const auto m = random_metric(dim, rng, "random");
    for (int s = 0; s < 50; ++s) {
      const auto p = random_point(rng, dim);
      const auto jets = m.field().jets(p, 1);
      const auto c = christoffel(m, p);
      auto g = [&](int i, int j) { return jets[static_cast<std::size_t>(i * dim + j)]; };
      double worst = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            std::vector<int> ek(static_cast<std::size_t>(dim), 0);
            ek[static_cast<std::size_t>(k)] = 1;
            double r = g(i, j).coeff(ek);
            for (int l = 0; l < dim; ++l)
              r -= c.gamma_standard(l, k, i) * g(l, j).value() + c.gamma_standard(l, k, j) * g(i, l).value();
            worst = std::max(worst, std::abs(r));
          }
      EXPECT_LE(worst, 1e-11);
    }
  }
}

TEST(GeometryProperty, RiemannPairSymmetry) {
  std::mt19937_64 rng(9);
  for (int dim : {2, 3}) {
    const auto m = random_metric(dim, rng, "random");
    for (int s = 0; s < 10; ++s) {
      const auto p = random_point(rng, dim);
      const auto c = scalar_curvature(m, p);
      const auto g = metric_at(m, p).g;
      const int n = dim;
      auto riem = [&](int i, int j, int k, int l) {
        return c.riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
      };
      auto lowered = [&](int i, int j, int k, int l) {
        double v = 0.0;
        for (int a = 0; a < n; ++a) v += g(i, a) * riem(a, j, k, l);
        return v;
      };
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              EXPECT_NEAR(lowered(i, j, k, l), lowered(k, l, i, j), 1e-10);
              EXPECT_NEAR(riem(i, j, k, l), -riem(i, j, l, k), 1e-14);
            }
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          EXPECT_NEAR(c.ricci[static_cast<std::size_t>(j * n + l)], c.ricci[static_cast<std::size_t>(l * n + j)], 1e-12);
    }
  }
}

void expect_normal_chart_invariants(const MetricField& m, std::span<const double> p) {
  const NormalChart nc(m, p);
  const auto pole = nc.pole();
  const auto jets = nc.metric().jets(pole, 2);
  const int n = nc.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& gij = jets[static_cast<std::size_t>(i * n + j)];
      EXPECT_NEAR(gij.value(), i == j ? 1.0 : 0.0, 1e-12);
      for (int k = 0; k < n; ++k) {
        std::vector<int> ek(static_cast<std::size_t>(n), 0);
        ek[static_cast<std::size_t>(k)] = 1;
        EXPECT_NEAR(gij.coeff(ek), 0.0, 1e-10);
      }
    }
  const auto c = christoffel(nc.metric(), pole);
  for (double v : c.gamma_paper) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(NormalChart, EuclideanIsIdentityTransition) {
  const double p[] = {0.0, 0.0};
  const NormalChart nc(MetricChart::euclidean(2), p);
  EXPECT_TRUE(nc.linear().isApprox(Eigen::MatrixXd::Identity(2, 2)));
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_EQ(nc.quadratic(i, a, b), 0.0);
  expect_normal_chart_invariants(MetricChart::euclidean(2), p);
}

TEST(NormalChart, SphereEquator) {
  const double p[] = {kPi / 2, 0.0};
  expect_normal_chart_invariants(MetricChart::sphere(1.0), p);
}

TEST(NormalChart, LinearlyGrowingMetricHasQuadraticTerm) {
  const auto m = MetricChart::from_strings("ramp", 2, {"1 + x1", "0", "1"});
  const double p[] = {0.0, 0.0};
  const NormalChart nc(m, p);
  double q = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) q = std::max(q, std::abs(nc.quadratic(i, a, b)));
  EXPECT_GT(q, 0.1);
  expect_normal_chart_invariants(m, p);
}

TEST(NormalChart, RandomMetrics) {
  std::mt19937_64 rng(21);
  for (int dim : {2, 3})
    for (int s = 0; s < 3; ++s) {
      const auto m = random_metric(dim, rng, "random");
      expect_normal_chart_invariants(m, random_point(rng, dim));
    }
}

}  // namespace
}  // namespace cqmq
