#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "cqmq/errors.hpp"
#include "cqmq/report_io.hpp"
#include "cqmq/verifier.hpp"
#include "json.hpp"

#ifndef CQMQ_VERSION
#define CQMQ_VERSION "unknown"
#endif

namespace cqmq::cli {

namespace {

namespace fs = std::filesystem;

std::ostream& log(const CommandContext& ctx) { return ctx.log ? *ctx.log : std::cout; }

unsigned worker_count(const CommandContext& ctx, std::size_t jobs) {
  unsigned n = ctx.threads ? ctx.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(0..count-1) on a small pool. The first failure in job order is
/// rethrown after all workers finish.
void run_jobs(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Metadata {
 public:
  Metadata(std::string command, const CommandContext& ctx, std::uint64_t seed)
      : command_(std::move(command)), ctx_(ctx), seed_(seed), started_(utc_now()) {}

  void write(const std::vector<std::string>& files, int exit_code) const {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command_;
    j["version"] = CQMQ_VERSION;
    j["config"] = ctx_.config_path.string();
    j["seed"] = seed_;
    j["started"] = started_;
    j["finished"] = utc_now();
    j["exit_code"] = exit_code;
    j["files"] = files;
    write_atomic(ctx_.out_dir / "metadata.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  const CommandContext& ctx_;
  std::uint64_t seed_;
  std::string started_;
};

std::string point_text(const std::vector<double>& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << std::setprecision(6) << p[i];
  return os.str() + ')';
}

const MetricChart& require_manifold(const RunConfig& c, const char* command) {
  if (!c.manifold) throw ConfigError(std::string("'manifold': required by ") + command);
  return *c.manifold;
}

}  // namespace

int cmd_curvature(const RunConfig& config, const CommandContext& ctx) {
  const auto& chart = require_manifold(config, "curvature");
  if (config.points.empty()) throw ConfigError("'points': curvature needs at least one sample point");
  const std::uint64_t seed = ctx.seed.value_or(config.seed);
  Metadata meta("curvature", ctx, seed);

  const auto report = curvature_report(chart, config.points);
  write_atomic(ctx.out_dir / "curvature.json", to_json(report));
  write_atomic(ctx.out_dir / "curvature.csv", curvature_csv(report));
  for (const auto& c : report.curvature)
    log(ctx) << chart.name() << ' ' << point_text(c.point) << "  r_std " << std::setprecision(12) << c.r_std
             << "  r_paper " << c.r_paper << '\n';
  meta.write({"curvature.json", "curvature.csv"}, kOk);
  return kOk;
}

int cmd_verify(const RunConfig& config, const CommandContext& ctx) {
  const std::uint64_t seed = ctx.seed.value_or(config.seed);
  Metadata meta("verify", ctx, seed);

  Corpus corpus;
  if (config.manifold) {
    corpus = corpus_for_chart(*config.manifold, seed, config.points, config.corpus.points_per_metric,
                              config.corpus.sections_per_metric);
    if (config.gauge)
      for (auto& e : corpus.entries) {
        e.gauge = config.gauge->build(*config.manifold);
        e.gauge_source = {config.gauge->a0};
        e.gauge_source.insert(e.gauge_source.end(), config.gauge->a.begin(), config.gauge->a.end());
      }
  } else {
    corpus = build_corpus(seed, config.corpus);
  }

  const auto& checks = config.checks.empty() ? check_names() : config.checks;
  std::vector<ResidualReport> reports(checks.size());
  run_jobs(checks.size(), worker_count(ctx, checks.size()), [&](std::size_t i) {
    reports[i] = run_check(checks[i], corpus, config.tolerance_for(checks[i]));
  });

  std::vector<std::string> files;
  nlohmann::ordered_json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["seed"] = seed;
  summary["corpus"] = corpus.descriptor;
  auto rows = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : reports) {
    const auto name = r.check + ".json";
    write_atomic(ctx.out_dir / name, to_json(r));
    files.push_back(name);
    all = all && r.pass;
    nlohmann::ordered_json row;
    row["check"] = r.check;
    row["pass"] = r.pass;
    row["max_residual"] = r.max_residual;
    row["tolerance"] = r.tolerance;
    row["samples"] = r.samples.size();
    rows.push_back(std::move(row));
    log(ctx) << std::left << std::setw(20) << r.check << (r.pass ? "PASS" : "FAIL") << "  max residual "
             << std::scientific << std::setprecision(3) << r.max_residual << "  tolerance " << r.tolerance
             << std::defaultfloat << '\n';
  }
  summary["checks"] = std::move(rows);
  summary["all_pass"] = all;
  write_atomic(ctx.out_dir / "summary.json", summary.dump(2) + "\n");
  files.push_back("summary.json");
  const int code = all ? kOk : kCheckFailed;
  meta.write(files, code);
  return code;
}

int cmd_spectrum(const RunConfig& config, const CommandContext& ctx) {
  const auto& chart = require_manifold(config, "spectrum");
  if (config.grid.empty()) throw ConfigError("'grid': spectrum needs node counts");
  const std::uint64_t seed = ctx.seed.value_or(config.seed);
  Metadata meta("spectrum", ctx, seed);

  const Grid grid(chart, config.grid);
  const auto gauge = config.gauge_for(chart);
  if (config.eigenvalues > static_cast<int>(grid.size()))
    throw ConfigError("'eigenvalues': more eigenvalues requested than grid nodes");
  EigenOptions options = config.eigen;
  options.seed = seed;

  std::vector<double> ks = config.k;
  const bool has_reference = std::find(ks.begin(), ks.end(), 0.0) != ks.end();
  if (!has_reference) ks.push_back(0.0);

  std::vector<SpectrumReport> reports(ks.size());
  std::vector<char> failed(ks.size(), 0);
  run_jobs(ks.size(), worker_count(ctx, ks.size()), [&](std::size_t i) {
    try {
      reports[i] = eigen_spectrum(assemble_hamiltonian(chart, gauge, grid, ks[i]), config.eigenvalues, options);
    } catch (const NoConvergence& e) {
      reports[i] = e.partial();
      failed[i] = 1;
    }
    reports[i].k = ks[i];
  });

  SpectrumReport reference;
  for (const auto& r : reports)
    if (r.k == 0.0) {
      reference = r;
      break;
    }
  if (!has_reference) reports.pop_back();
  const auto sweep = make_sweep(chart, grid, reports, reference);

  write_atomic(ctx.out_dir / "spectrum.json", to_json(sweep));
  write_atomic(ctx.out_dir / "spectrum.csv", spectrum_csv(sweep.reports));
  write_atomic(ctx.out_dir / "shifts.csv", shift_csv(sweep));

  log(ctx) << grid.descriptor() << ", " << config.eigenvalues << " eigenvalues\n";
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const auto& r = sweep.reports[i];
    log(ctx) << "k = " << std::setprecision(6) << r.k << (r.converged ? "" : " (not converged)") << ":";
    for (double v : r.eigenvalues) log(ctx) << ' ' << std::setprecision(8) << v;
    log(ctx) << '\n';
  }
  if (sweep.constant_curvature)
    log(ctx) << "constant r_paper = " << std::setprecision(12) << sweep.r_paper << ", max shift deviation "
             << std::scientific << std::setprecision(3) << sweep.max_shift_deviation << std::defaultfloat << '\n';
  else
    log(ctx) << "scalar curvature varies over the grid; uniform-shift comparison skipped\n";

  const bool any_failed = std::any_of(failed.begin(), failed.end(), [](char c) { return c != 0; });
  const int code = any_failed ? kNumericError : kOk;
  meta.write({"spectrum.json", "spectrum.csv", "shifts.csv"}, code);
  if (any_failed) std::cerr << "cqmq: eigensolver did not converge; partial results written\n";
  return code;
}

int run_command(const std::string& command, CommandContext ctx) {
  try {
    const auto config = load_config(ctx.config_path);
    if (ctx.out_dir.empty()) ctx.out_dir = config.output.value_or(fs::path("cqmq-out"));
    fs::create_directories(ctx.out_dir);
    if (command == "curvature") return cmd_curvature(config, ctx);
    if (command == "verify") return cmd_verify(config, ctx);
    if (command == "spectrum") return cmd_spectrum(config, ctx);
    std::cerr << "cqmq: unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "cqmq: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SyntaxError& e) {
    std::cerr << "cqmq: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnknownIdentifier& e) {
    std::cerr << "cqmq: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cqmq: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "cqmq: numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace cqmq::cli
