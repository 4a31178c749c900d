#pragma once

// JSON and CSV serialisation of reports. Output is deterministic: keys are
// written in a fixed order and no timestamps are included.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cqmq/geometry.hpp"
#include "cqmq/spectral.hpp"
#include "cqmq/verifier.hpp"

namespace cqmq {

inline constexpr int kReportSchemaVersion = 1;

struct CurvatureReport {
  std::string chart;
  std::vector<MetricValue> metrics;
  std::vector<CurvatureData> curvature;
};

CurvatureReport curvature_report(const MetricChart& chart, const std::vector<std::vector<double>>& points);

std::string to_json(const ResidualReport& r);
std::string to_json(const SpectrumReport& r);
std::string to_json(const KSweep& sweep);
std::string to_json(const CurvatureReport& r);

/// Columns k, j, lambda, residual.
std::string spectrum_csv(const std::vector<SpectrumReport>& reports);
/// Columns k, j, lambda, shift, expected_shift.
std::string shift_csv(const KSweep& sweep);
/// Columns point index, coordinates, r_std, r_paper.
std::string curvature_csv(const CurvatureReport& r);

/// Reads back a report written by to_json(const ResidualReport&).
ResidualReport residual_report_from_json(std::string_view text);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace cqmq
