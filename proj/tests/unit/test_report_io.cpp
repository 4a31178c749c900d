#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cqmq/report_io.hpp"

namespace cqmq {
namespace {

namespace fs = std::filesystem;

ResidualReport sample_report() {
  ResidualReport r;
  r.check = "lemma";
  r.seed = 42;
  r.corpus = "seed=42 random2d=1";
  r.tolerance = 1e-9;
  r.add({"lemma", "random2d-0", {0.25, 1.0 / 3}, std::numeric_limits<double>::quiet_NaN(), 3.0e-16});
  r.add({"kappa_fit", "corpus", {}, 1.0 / 6, 2.0e-17});
  r.finalize();
  return r;
}

TEST(ReportIo, ResidualReportRoundTrip) {
  const auto r = sample_report();
  const auto text = to_json(r);
  const auto back = residual_report_from_json(text);
  EXPECT_EQ(back.check, r.check);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.corpus, r.corpus);
  EXPECT_EQ(back.tolerance, r.tolerance);
  EXPECT_EQ(back.max_residual, r.max_residual);
  EXPECT_EQ(back.pass, r.pass);
  ASSERT_EQ(back.samples.size(), 2u);
  EXPECT_TRUE(std::isnan(back.samples[0].value));
  EXPECT_EQ(back.samples[0].point, r.samples[0].point);
  EXPECT_EQ(back.samples[1].value, 1.0 / 6);
  EXPECT_EQ(to_json(back), text);
}

TEST(ReportIo, JsonCarriesSchemaVersionAndNullValues) {
  const auto text = to_json(sample_report());
  EXPECT_NE(text.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(text.find("\"value\": null"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(ReportIo, MalformedJsonIsRejected) {
  EXPECT_ANY_THROW(residual_report_from_json("{\"check\": 3"));
}

TEST(ReportIo, SpectrumCsvAndShiftCsv) {
  SpectrumReport a;
  a.k = 0.0;
  a.eigenvalues = {0.0, 0.5};
  a.residuals = {1e-14, 2e-14};
  SpectrumReport b = a;
  b.k = 1.0;
  b.eigenvalues = {1.0, 1.5};
  KSweep s;
  s.reports = {a, b};
  s.shifts = {{0.0, 0.0}, {1.0, 1.0}};
  s.expected_shift = {0.0, 1.0};
  s.constant_curvature = true;
  s.r_paper = -2.0;
  const auto csv = spectrum_csv(s.reports);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,j,lambda,residual");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto shifts = shift_csv(s);
  EXPECT_EQ(shifts.substr(0, shifts.find('\n')), "k,j,lambda,shift,expected_shift");
  EXPECT_EQ(std::count(shifts.begin(), shifts.end(), '\n'), 5);
  const auto json = to_json(s);
  EXPECT_NE(json.find("\"r_paper\": -2.0"), std::string::npos);
  EXPECT_NE(json.find("\"solver_shift\""), std::string::npos);
  EXPECT_NE(json.find("\"shift\": ["), std::string::npos);
}

TEST(ReportIo, CurvatureReportForSphere) {
  const auto r = curvature_report(MetricChart::sphere(1.0), {{std::numbers::pi / 2, 0.0}});
  ASSERT_EQ(r.curvature.size(), 1u);
  EXPECT_NEAR(r.curvature[0].r_paper, -2.0, 1e-12);
  EXPECT_NE(to_json(r).find("\"r_paper\""), std::string::npos);
  EXPECT_THROW(curvature_report(MetricChart::sphere(1.0), {{-1.0, 0.0}}), DomainError);
}

TEST(ReportIo, AtomicWriteReplacesContent) {
  const auto dir = fs::temp_directory_path() / "cqmq_report_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = dir / "out.json";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace cqmq
