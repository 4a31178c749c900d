#pragma once

// Residual checks for the identities relating the half-form Laplacians, the
// normal-coordinate expansion, the special bracket and the discretised
// operators. Each check runs over a Corpus and yields a ResidualReport.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cqmq/corpus.hpp"
#include "cqmq/operators.hpp"
#include "cqmq/phase_algebra.hpp"

namespace cqmq {

struct ResidualSample {
  /// What was measured, e.g. "lemma" or "gq_minus_cqm".
  std::string quantity;
  /// Corpus entry (metric) descriptor.
  std::string metric;
  std::vector<double> point;
  /// Optional value attached to the row (NaN when absent).
  double value = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
};

struct ResidualReport {
  std::string check;
  std::uint64_t seed = 0;
  std::string corpus;
  double tolerance = 0.0;
  double max_residual = 0.0;
  bool pass = false;
  std::vector<ResidualSample> samples;

  void add(ResidualSample s);
  /// Sets max_residual and pass from the samples.
  void finalize();
  /// Largest residual among rows of one quantity (0 when there are none).
  double max_of(std::string_view quantity) const;
};

// Pointwise residuals.

/// Three-term product-rule expansion of the line-connection Laplacian of the
/// v-frame coefficient against the full Laplacian.
double lemma_residual(const MetricField& m, const GaugePotential& a, const HalfFormSection& s,
                      std::span<const double> p);

struct CancellationSample {
  /// Full Laplacian of the section in the given chart (eta frame).
  complex lhs;
  /// Normal-chart line Laplacian of the v-frame coefficient minus r/6 psi.
  complex rhs;
  double r_paper = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};
CancellationSample cancellation_at(const MetricField& m, const GaugePotential& a, const HalfFormSection& s,
                                   std::span<const double> p);

struct PoleIdentities {
  double r_paper = 0.0;
  /// (3/2) G^{ik} g^{pq} d_i d_k g_pq at the pole.
  double r_from_metric = 0.0;
  /// (1/2) G^{ij} d_i Gamma^h_jh, with Gamma of the flipped sign.
  double gamma_trace = 0.0;
  /// -(1/4) G^{ij} g^{hk} d_i d_j g_hk.
  double metric_trace = 0.0;
};
PoleIdentities pole_identities(const MetricField& m, std::span<const double> p);

/// Componentwise max of |[X_f, X_g] - X_[[f,g]]| at p.
double bracket_morphism_residual(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                                 const MetricField& m, std::span<const double> p);
/// Max over the components of [[f,[[g,h]]]] + cyclic at p.
double jacobi_residual(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g, const SpecialPhaseFunction& h,
                       const MetricField& m, std::span<const double> p);

struct CommutatorSample {
  /// [f^, g^] psi.
  complex commutator;
  /// i ([[f, g]])^ psi.
  complex bracket_term;
  /// [T, S] psi with T = g0 L_{Y_f} - f0 L_{Y_g}, L_Y = -i Z.
  complex anomaly;
  /// |commutator - bracket_term - anomaly|.
  double residual() const { return std::abs(commutator - bracket_term - anomaly); }
};
CommutatorSample commutator_at(const SpecialPhaseFunction& f, const SpecialPhaseFunction& g,
                               const HalfFormSection& s, const GaugePotential& a, const MetricField& m, double k,
                               std::span<const double> p);

// Corpus-level checks.

ResidualReport verify_lemma(const Corpus& corpus, double tolerance);
/// Cancellation at the pole, GQ against CQM with k = 1/6, and the least-squares
/// fit of the curvature coefficient (row "kappa_fit", residual |kappa - 1/6|).
ResidualReport verify_cancellation(const Corpus& corpus, double tolerance);
ResidualReport verify_pole_identities(const Corpus& corpus, double tolerance);
/// Lie-algebra morphism and Jacobi identity over random special functions.
ResidualReport verify_bracket_morphism(const Corpus& corpus, double tolerance, int pairs_per_metric = 2);
/// Operator commutators at the nodes of a periodic circle grid with Fourier
/// test sections, plus corpus points of the curved metrics. Raises
/// GridTooCoarse when `nodes` cannot resolve the test modes.
ResidualReport verify_commutator_anomaly(const Corpus& corpus, double tolerance, int nodes = 128,
                                         int max_mode = 3);
/// Symmetry certificates of assembled operators on periodic grids and on the
/// sphere grid.
ResidualReport verify_hermiticity(const Corpus& corpus, double tolerance);
/// Parallelism of sqrt(eta), the frame round trip and frame covariance.
ResidualReport verify_sqrt_eta_parallel(const Corpus& corpus, double tolerance);

/// The default suite in run order.
const std::vector<std::string>& check_names();
double default_tolerance(std::string_view check);
/// Runs one check by name; unknown names raise std::invalid_argument.
ResidualReport run_check(std::string_view check, const Corpus& corpus, double tolerance);

}  // namespace cqmq
