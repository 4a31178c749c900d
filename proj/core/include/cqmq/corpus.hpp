#pragma once

// Seeded random test data for the verifier: perturbed-flat metrics with
// trigonometric-polynomial entries, pure-gauge potentials and smooth complex
// sections, together with the two model manifolds.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqmq/geometry.hpp"
#include "cqmq/operators.hpp"
#include "cqmq/phase_algebra.hpp"

namespace cqmq {

struct CorpusEntry {
  std::string descriptor;
  MetricChart chart;
  GaugePotential gauge;
  /// A0 followed by A_1..A_n, as parsed.
  std::vector<std::string> gauge_source;
  std::vector<HalfFormSection> sections;
  std::vector<std::string> section_source;
  std::vector<std::vector<double>> points;
};

struct CorpusSpec {
  int random_2d = 10;
  int random_3d = 10;
  int points_per_metric = 3;
  int sections_per_metric = 2;
  bool include_sphere = true;
  bool include_half_plane = true;
};

struct Corpus {
  std::uint64_t seed = 0;
  std::vector<CorpusEntry> entries;

  /// Short text such as "seed=42 random2d=10 random3d=10 sphere half_plane".
  std::string descriptor;
};

Corpus build_corpus(std::uint64_t seed, const CorpusSpec& spec = {});

/// A corpus over one given chart: random gauge and sections, and either the
/// given points or points drawn inside the chart domain.
Corpus corpus_for_chart(const MetricChart& chart, std::uint64_t seed, std::vector<std::vector<double>> points = {},
                        int points_per_metric = 3, int sections = 2);

/// g = delta + eps S(x), S symmetric with entries of trigonometric degree at
/// most 2 in the coordinates, row sums of |coefficients| at most 1, and
/// eps in [0.05, 0.2]. The chart is 2 pi periodic in every coordinate.
MetricChart random_metric(int dim, std::mt19937_64& rng, std::string name);

/// A0 constant, A_i = c_i + d_i chi for a random trigonometric chi, so the
/// field strength vanishes. `source` receives A0, A_1, ..., A_n.
GaugePotential random_gauge(int dim, std::mt19937_64& rng, std::vector<std::string>* source = nullptr);

/// Smooth complex eta-frame coefficient; the text is written to `source`.
HalfFormSection random_section(int dim, std::mt19937_64& rng, std::string* source = nullptr,
                               const ParseOptions& names = {});

/// Special phase function with the given f0 and random trigonometric f_i and
/// scalar part.
SpecialPhaseFunction random_special(int dim, double f0, std::mt19937_64& rng, std::string label);

}  // namespace cqmq
