#pragma once

// Run configuration for the cqmq command line tool. The file format is JSON;
// docs/config_schema.md lists every key.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqmq/corpus.hpp"
#include "cqmq/geometry.hpp"
#include "cqmq/operators.hpp"
#include "cqmq/spectral.hpp"

namespace cqmq::cli {

inline constexpr int kConfigSchemaVersion = 1;

struct GaugeSpec {
  std::string a0 = "0";
  std::vector<std::string> a;

  GaugePotential build(const MetricChart& chart) const;
};

struct RunConfig {
  std::optional<MetricChart> manifold;
  std::optional<GaugeSpec> gauge;
  std::vector<std::vector<double>> points;
  std::vector<double> k{0.0};
  std::vector<int> grid;
  int eigenvalues = 7;
  /// Empty means the default suite.
  std::vector<std::string> checks;
  std::optional<double> tolerance;
  std::map<std::string, double, std::less<>> tolerance_per_check;
  std::uint64_t seed = 42;
  CorpusSpec corpus;
  EigenOptions eigen;
  std::optional<std::filesystem::path> output;

  double tolerance_for(std::string_view check) const;
  GaugePotential gauge_for(const MetricChart& chart) const;
};

/// Raises ConfigError on malformed JSON, unknown keys, wrong types or invalid
/// values; the message names the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace cqmq::cli
