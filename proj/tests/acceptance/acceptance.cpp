// Acceptance run: one line per criterion, exit status 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "cqmq/corpus.hpp"
#include "cqmq/spectral.hpp"
#include "cqmq/verifier.hpp"

namespace {

using namespace cqmq;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 42;
constexpr double kPi = std::numbers::pi;

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const CorpusEntry* find_entry(const Corpus& c, const std::string& chart_name) {
  for (const auto& e : c.entries)
    if (e.chart.name() == chart_name) return &e;
  return nullptr;
}

std::size_t random_metric_count(const Corpus& c) {
  return static_cast<std::size_t>(std::count_if(c.entries.begin(), c.entries.end(), [](const CorpusEntry& e) {
    return e.chart.name().rfind("random", 0) == 0;
  }));
}

// Criteria 1 and 2 share one run of the cancellation check.
void cancellation_and_reconciliation(const Corpus& corpus) {
  const auto t0 = Clock::now();
  const auto r = verify_cancellation(corpus, 1e-8);
  const double elapsed = seconds_since(t0);
  const bool model = find_entry(corpus, MetricChart::sphere(1.0).name()) && find_entry(corpus, MetricChart::half_plane().name());
  const double cancel = r.max_of("cancellation");
  report(1, "cancellation", model && random_metric_count(corpus) >= 20 && cancel <= 1e-8 && elapsed <= 30.0,
         fmt("max residual %.3e (<= 1e-8) over %zu metrics, %.2f s (<= 30 s)", cancel, corpus.entries.size(), elapsed));

  const double gq = std::max(r.max_of("gq_minus_cqm"), r.max_of("gq_minus_cqm_v"));
  double kappa = std::nan("");
  for (const auto& s : r.samples)
    if (s.quantity == "kappa_fit") kappa = s.value;
  const bool ok = gq <= 1e-9 && std::abs(kappa - 1.0 / 6) <= 1e-6;
  report(2, "k=1/6 reconciliation", ok,
         fmt("max |GQ - CQM(1/6)| %.3e (<= 1e-9), fitted kappa %.15f, |kappa - 1/6| %.3e (<= 1e-6)", gq, kappa,
             std::abs(kappa - 1.0 / 6)));
}

void pole_identities_criterion(const Corpus& corpus) {
  const auto r = verify_pole_identities(corpus, 1e-9);
  const double res = std::max(r.max_of("scalar_curvature"), r.max_of("christoffel_trace"));
  const auto* sphere = find_entry(corpus, MetricChart::sphere(1.0).name());
  double worst_sphere = sphere ? 0.0 : INFINITY;
  int sphere_rows = 0;
  for (const auto& s : r.samples)
    if (sphere && s.metric == sphere->descriptor && s.quantity == "scalar_curvature") {
      worst_sphere = std::max(worst_sphere, std::abs(s.value + 2.0));
      ++sphere_rows;
    }
  report(3, "pole identities", res <= 1e-9 && sphere_rows > 0 && worst_sphere <= 1e-9,
         fmt("max residual %.3e (<= 1e-9), sphere identity value within %.3e of -2 (<= 1e-9)", res, worst_sphere));
}

void lemma_criterion(const Corpus& corpus) {
  const auto r = verify_lemma(corpus, 1e-9);
  report(4, "lemma", r.max_of("lemma") <= 1e-9 && !r.samples.empty(),
         fmt("max residual %.3e (<= 1e-9) over %zu samples", r.max_of("lemma"), r.samples.size()));
}

void sphere_shift_criterion() {
  const auto t0 = Clock::now();
  const auto chart = MetricChart::sphere(1.0);
  const Grid grid(chart, {64, 128});
  bool ok = true;
  std::string detail;
  try {
    EigenOptions opts;
    opts.seed = kSeed;
    const auto sweep = k_sweep(chart, GaugePotential::zero(2), grid, {0.0, 1.0 / 6, 1.0}, 9, opts);
    const double oracle[] = {0, 1, 1, 1, 3, 3, 3, 3, 3};
    double worst_rel = 0.0;
    const auto& ev = sweep.reports[0].eigenvalues;
    for (int j = 0; j < 9; ++j) {
      const double dev = std::abs(ev[static_cast<std::size_t>(j)] - oracle[j]);
      // The zero mode is compared absolutely against 2% of the first nonzero level.
      worst_rel = std::max(worst_rel, oracle[j] > 0 ? dev / oracle[j] : dev);
    }
    const double elapsed = seconds_since(t0);
    ok = worst_rel <= 0.02 && sweep.constant_curvature && sweep.max_shift_deviation <= 1e-10 && elapsed <= 120.0;
    detail = fmt("k=0 worst relative error %.3f%% (<= 2%%), r_paper %.12f, shifts {%.12f, %.12f}, "
                 "max shift deviation %.3e (<= 1e-10), %.1f s (<= 120 s)",
                 100 * worst_rel, sweep.r_paper, sweep.shifts[1][0], sweep.shifts[2][0], sweep.max_shift_deviation,
                 elapsed);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("error: ") + e.what();
  }
  report(5, "sphere spectral shift", ok, detail);
}

void circle_criterion() {
  const auto chart = MetricChart::circle(2 * kPi);
  bool ok = true;
  std::string detail;
  try {
    EigenOptions opts;
    opts.seed = kSeed;
    const auto rep = eigen_spectrum(assemble_hamiltonian(chart, GaugePotential::zero(1), Grid(chart, {256}), 0.0), 7, opts);
    const double oracle[] = {0, 0.5, 0.5, 2, 2, 4.5, 4.5};
    double worst_rel = std::abs(rep.eigenvalues[0]) / 0.5;
    for (int j = 1; j < 7; ++j)
      worst_rel = std::max(worst_rel, std::abs(rep.eigenvalues[static_cast<std::size_t>(j)] - oracle[j]) / oracle[j]);
    std::vector<double> err;
    for (int n : {64, 128, 256}) {
      const auto r = eigen_spectrum(assemble_hamiltonian(chart, GaugePotential::zero(1), Grid(chart, {n}), 0.0), 2, opts);
      err.push_back(std::abs(r.eigenvalues[1] - 0.5));
    }
    const double f1 = err[0] / err[1], f2 = err[1] / err[2];
    ok = worst_rel <= 0.005 && std::abs(f1 - 4) <= 0.5 && std::abs(f2 - 4) <= 0.5;
    detail = fmt("worst relative error %.4f%% (<= 0.5%%), convergence factors %.4f %.4f (4 +- 0.5)", 100 * worst_rel, f1, f2);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("error: ") + e.what();
  }
  report(6, "circle baseline", ok, detail);
}

void algebra_criterion(const Corpus& corpus) {
  const auto b = verify_bracket_morphism(corpus, 1e-9);
  const double morph = std::max(b.max_of("morphism"), b.max_of("P1_P2"));
  const double jac = b.max_of("jacobi");
  const auto c = verify_commutator_anomaly(corpus, 1e-8, 128);
  const double xp = c.max_of("x1_P1");
  double anomaly = 0.0;
  for (const auto& s : c.samples)
    if (s.quantity == "H0_x1") anomaly = std::max(anomaly, s.value);
  const double anomaly_res = c.max_of("H0_x1");
  const bool ok = morph <= 1e-9 && jac <= 1e-9 && xp <= 1e-8 && anomaly > 1e-6 && anomaly_res <= 1e-6;
  report(7, "algebraic layer", ok,
         fmt("morphism %.3e, jacobi %.3e (<= 1e-9); [x,P] - i %.3e (<= 1e-8); anomaly |T| %.3e (nonzero), "
             "mismatch %.3e (<= 1e-6)",
             morph, jac, xp, anomaly, anomaly_res));
}

void structural_criterion(const Corpus& corpus) {
  const auto h = verify_hermiticity(corpus, 1e-10);
  const auto s = verify_sqrt_eta_parallel(corpus, 1e-12);
  const double par = std::max({s.max_of("parallel_eta"), s.max_of("parallel_v"), s.max_of("v_unit_derivative")});
  const double trip = s.max_of("round_trip");
  const bool ok = !h.samples.empty() && h.max_residual <= 1e-10 && par <= 1e-12 && trip <= 1e-13;
  report(8, "structural invariants", ok,
         fmt("max certificate %.3e over %zu operators (<= 1e-10), parallelism %.3e (<= 1e-12), round trip %.3e "
             "(<= 1e-13)",
             h.max_residual, h.samples.size(), par, trip));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const auto corpus = build_corpus(kSeed);
  std::printf("corpus: %s (%zu metrics)\n", corpus.descriptor.c_str(), corpus.entries.size());

  auto guarded = [](int id, const char* name, auto fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, name, false, std::string("error: ") + e.what());
    }
  };
  guarded(1, "cancellation", [&] { cancellation_and_reconciliation(corpus); });
  guarded(3, "pole identities", [&] { pole_identities_criterion(corpus); });
  guarded(4, "lemma", [&] { lemma_criterion(corpus); });
  guarded(5, "sphere spectral shift", [] { sphere_shift_criterion(); });
  guarded(6, "circle baseline", [] { circle_criterion(); });
  guarded(7, "algebraic layer", [&] { algebra_criterion(corpus); });
  guarded(8, "structural invariants", [&] { structural_criterion(corpus); });

  std::printf("%d of 8 criteria failed, total %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
