#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cqmq/report_io.hpp"
#include "cqmq/verifier.hpp"

namespace cqmq {
namespace {

constexpr double kPi = std::numbers::pi;

HalfFormSection section(const char* text, int n) {
  ParseOptions o;
  o.dimension = n;
  return HalfFormSection::from_expression(parse(text, o), n);
}

Corpus small_corpus(std::uint64_t seed) {
  CorpusSpec spec;
  spec.random_2d = 2;
  spec.random_3d = 2;
  spec.points_per_metric = 2;
  return build_corpus(seed, spec);
}

TEST(Corpus, DefaultCompositionAndDescriptor) {
  const auto c = build_corpus(42);
  EXPECT_EQ(c.entries.size(), 22u);
  EXPECT_EQ(c.descriptor, "seed=42 random2d=10 random3d=10 points=3 sphere half_plane");
  for (const auto& e : c.entries) {
    EXPECT_EQ(e.sections.size(), 2u);
    EXPECT_FALSE(e.points.empty());
    for (const auto& p : e.points) EXPECT_NO_THROW(metric_at(e.chart, p)) << e.descriptor;
  }
}

TEST(Corpus, SeedDeterminesContent) {
  const auto a = small_corpus(5), b = small_corpus(5), c = small_corpus(6);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].points, b.entries[i].points);
    EXPECT_EQ(a.entries[i].section_source, b.entries[i].section_source);
  }
  EXPECT_NE(a.entries[0].section_source, c.entries[0].section_source);
}

TEST(Lemma, FlatMetricIsExact) {
  const auto e2 = MetricChart::euclidean(2);
  EXPECT_EQ(lemma_residual(e2, GaugePotential::zero(2), section("exp(i*x1)*x2^2", 2), std::vector<double>{0.3, 0.4}), 0.0);
}

TEST(Lemma, SphereConstantSection) {
  EXPECT_LE(lemma_residual(MetricChart::sphere(1.0), GaugePotential::zero(2), section("1", 2),
                           std::vector<double>{kPi / 3, 1.0}),
            1e-10);
}

TEST(Lemma, RandomCorpus) {
  const auto r = verify_lemma(small_corpus(1), 1e-9);
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_GE(r.samples.size(), 8u);
}

TEST(Cancellation, FlatBothSidesAgreeWithZeroCurvature) {
  const auto c = cancellation_at(MetricChart::euclidean(2), GaugePotential::zero(2), section("sin(x1)*cos(x2)", 2),
                                 std::vector<double>{0.5, 0.5});
  EXPECT_EQ(c.r_paper, 0.0);
  EXPECT_LE(c.residual(), 1e-15);
}

TEST(Cancellation, SphereEquator) {
  const auto c = cancellation_at(MetricChart::sphere(1.0), GaugePotential::zero(2), section("1 + 0.1*cos(x1)", 2),
                                 std::vector<double>{kPi / 2, 0.0});
  EXPECT_NEAR(c.r_paper, -2.0, 1e-12);
  EXPECT_LE(c.residual(), 1e-8);
}

TEST(Cancellation, HalfPlane) {
  const auto c = cancellation_at(MetricChart::half_plane(), GaugePotential::zero(2),
                                 section("exp(i*x1)*x2 + 0.3*x1^2", 2), std::vector<double>{0.0, 2.0});
  EXPECT_NEAR(c.r_paper, 2.0, 1e-12);
  EXPECT_LE(c.residual(), 1e-8);
}

TEST(Cancellation, CorpusRowsAndKappa) {
  const auto r = verify_cancellation(small_corpus(2), 1e-9);
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_LE(r.max_of("cancellation"), 1e-8);
  EXPECT_LE(r.max_of("gq_minus_cqm"), 1e-9);
  bool saw_kappa = false;
  for (const auto& s : r.samples)
    if (s.quantity == "kappa_fit") {
      saw_kappa = true;
      EXPECT_NEAR(s.value, 1.0 / 6, 1e-6);
    }
  EXPECT_TRUE(saw_kappa);
}

TEST(PoleIdentities, FlatAndSphere) {
  const auto flat = pole_identities(MetricChart::euclidean(3), std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_EQ(flat.r_paper, 0.0);
  EXPECT_EQ(flat.r_from_metric, 0.0);
  EXPECT_EQ(flat.gamma_trace, flat.metric_trace);
  const auto s = pole_identities(MetricChart::sphere(1.0), std::vector<double>{1.0, 0.5});
  EXPECT_NEAR(s.r_from_metric, -2.0, 1e-9);
  EXPECT_NEAR(s.r_paper, -2.0, 1e-12);
  EXPECT_NEAR(s.gamma_trace, s.metric_trace, 1e-9);
}

TEST(PoleIdentities, Random3d) {
  CorpusSpec spec;
  spec.random_2d = 0;
  spec.random_3d = 3;
  spec.include_sphere = false;
  spec.include_half_plane = false;
  const auto r = verify_pole_identities(build_corpus(3, spec), 1e-8);
  EXPECT_TRUE(r.pass) << r.max_residual;
}

TEST(BracketMorphism, ModelPairs) {
  const auto e2 = MetricChart::euclidean(2);
  const std::vector<double> p{0.2, 0.9};
  EXPECT_EQ(bracket_morphism_residual(SpecialPhaseFunction::coordinate(2, 0), SpecialPhaseFunction::coordinate(2, 1), e2, p), 0.0);
  EXPECT_EQ(bracket_morphism_residual(SpecialPhaseFunction::momentum(e2, 0), SpecialPhaseFunction::momentum(e2, 1), e2, p), 0.0);
  const auto r = verify_bracket_morphism(small_corpus(4), 1e-9);
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_LE(r.max_of("morphism"), 1e-10);
}

TEST(CommutatorAnomaly, PointwiseModelPairs) {
  const auto e1 = MetricChart::euclidean(1);
  const auto zero = GaugePotential::zero(1);
  const auto sec = section("exp(2*i*x1) + cos(x1)", 1);
  const std::vector<double> p{0.8};
  const auto xx = commutator_at(SpecialPhaseFunction::coordinate(1, 0), SpecialPhaseFunction::coordinate(1, 0), sec, zero, e1, 0.0, p);
  EXPECT_EQ(std::abs(xx.commutator), 0.0);
  const auto xp = commutator_at(SpecialPhaseFunction::coordinate(1, 0), SpecialPhaseFunction::momentum(e1, 0), sec, zero, e1, 0.0, p);
  EXPECT_LE(std::abs(xp.commutator - complex(0, 1) * sec.coefficient.value(p)), 1e-14);
  EXPECT_LE(xp.residual(), 1e-14);
  const auto hx = commutator_at(SpecialPhaseFunction::free_hamiltonian(1), SpecialPhaseFunction::coordinate(1, 0), sec, zero, e1, 0.0, p);
  EXPECT_GT(std::abs(hx.anomaly), 1e-3);
  EXPECT_LE(hx.residual(), 1e-12);
}

TEST(CommutatorAnomaly, GridTooCoarse) {
  const auto c = small_corpus(1);
  EXPECT_THROW(verify_commutator_anomaly(c, 1e-8, 6, 3), GridTooCoarse);
}

TEST(CommutatorAnomaly, CircleGridReport) {
  const auto r = verify_commutator_anomaly(small_corpus(1), 1e-8);
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_LE(r.max_of("x1_P1"), 1e-8);
  double anomaly = 0.0;
  for (const auto& s : r.samples)
    if (s.quantity == "H0_x1") anomaly = std::max(anomaly, s.value);
  EXPECT_GT(anomaly, 1e-3);
}

TEST(SqrtEta, Parallelism) {
  const auto r = verify_sqrt_eta_parallel(small_corpus(8), 1e-12);
  EXPECT_TRUE(r.pass) << r.max_residual;
  EXPECT_LE(r.max_of("round_trip"), 1e-13);
}

TEST(Report, PassIffWithinTolerance) {
  ResidualReport r;
  r.tolerance = 1e-3;
  r.add({"q", "m", {0.0}, std::numeric_limits<double>::quiet_NaN(), 1e-4});
  r.finalize();
  EXPECT_TRUE(r.pass);
  r.add({"q", "m", {1.0}, std::numeric_limits<double>::quiet_NaN(), 2e-3});
  r.finalize();
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.max_residual, 2e-3);
  EXPECT_EQ(r.max_of("other"), 0.0);
}

TEST(RunCheck, NamesAndDispatch) {
  const auto& names = check_names();
  ASSERT_EQ(names.size(), 7u);
  EXPECT_EQ(names.front(), "lemma");
  EXPECT_EQ(names.back(), "sqrt_eta_parallel");
  EXPECT_THROW(run_check("nonsense", small_corpus(1), 1e-9), std::invalid_argument);
  const auto r = run_check("lemma", small_corpus(1), 1e-20);
  EXPECT_FALSE(r.pass);
}

TEST(RunCheck, DeterministicGivenSeed) {
  const auto a = to_json(run_check("cancellation", small_corpus(9), 1e-9));
  const auto b = to_json(run_check("cancellation", small_corpus(9), 1e-9));
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace cqmq
