#include "cqmq/report_io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

namespace cqmq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json nested_gamma(const std::vector<double>& flat, int n) {
  auto out = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    auto row = ordered_json::array();
    for (int j = 0; j < n; ++j) {
      auto col = ordered_json::array();
      for (int k = 0; k < n; ++k) col.push_back(flat[static_cast<std::size_t>((i * n + j) * n + k)]);
      row.push_back(std::move(col));
    }
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json matrix(const Eigen::MatrixXd& m) {
  auto out = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json spectrum_json(const SpectrumReport& r) {
  ordered_json j;
  j["k"] = r.k;
  j["grid"] = r.grid;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["norm_estimate"] = r.norm_estimate;
  j["solver_shift"] = r.shift;
  j["max_imag"] = r.max_imag;
  j["symmetry_certificate"] = r.symmetry_certificate;
  j["seed"] = r.seed;
  j["restarts"] = r.restarts;
  j["converged"] = r.converged;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

CurvatureReport curvature_report(const MetricChart& chart, const std::vector<std::vector<double>>& points) {
  CurvatureReport r;
  r.chart = chart.name();
  for (const auto& p : points) {
    chart.require_inside(p);
    r.metrics.push_back(metric_at(chart, p));
    r.curvature.push_back(scalar_curvature(chart, p));
  }
  return r;
}

std::string to_json(const ResidualReport& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["check"] = r.check;
  j["seed"] = r.seed;
  j["corpus"] = r.corpus;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  auto samples = ordered_json::array();
  for (const auto& s : r.samples) {
    ordered_json row;
    row["quantity"] = s.quantity;
    row["metric"] = s.metric;
    row["point"] = s.point;
    row["value"] = std::isnan(s.value) ? ordered_json(nullptr) : ordered_json(s.value);
    row["residual"] = s.residual;
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  return dump(j);
}

std::string to_json(const SpectrumReport& r) {
  auto j = spectrum_json(r);
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  for (auto& [key, value] : j.items()) out[key] = value;
  return dump(out);
}

std::string to_json(const KSweep& sweep) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["constant_curvature"] = sweep.constant_curvature;
  j["r_paper"] = sweep.r_paper;
  j["max_shift_deviation"] = sweep.max_shift_deviation;
  auto rows = ordered_json::array();
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    auto row = spectrum_json(sweep.reports[i]);
    row["shift"] = sweep.shifts[i];
    row["expected_shift"] = sweep.expected_shift[i];
    rows.push_back(std::move(row));
  }
  j["spectra"] = std::move(rows);
  return dump(j);
}

std::string to_json(const CurvatureReport& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["chart"] = r.chart;
  auto points = ordered_json::array();
  for (std::size_t i = 0; i < r.curvature.size(); ++i) {
    const auto& c = r.curvature[i];
    ordered_json row;
    row["point"] = c.point;
    row["g"] = matrix(r.metrics[i].g);
    row["det"] = r.metrics[i].det;
    row["gamma_paper"] = nested_gamma(c.gamma_paper, c.dim);
    row["gamma_standard"] = nested_gamma(c.gamma_std, c.dim);
    row["r_std"] = c.r_std;
    row["r_paper"] = c.r_paper;
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  return dump(j);
}

std::string spectrum_csv(const std::vector<SpectrumReport>& reports) {
  std::ostringstream os;
  os << "k,j,lambda,residual\n";
  for (const auto& r : reports)
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j)
      os << num(r.k) << ',' << j << ',' << num(r.eigenvalues[j]) << ','
         << num(j < r.residuals.size() ? r.residuals[j] : 0.0) << '\n';
  return os.str();
}

std::string shift_csv(const KSweep& sweep) {
  std::ostringstream os;
  os << "k,j,lambda,shift,expected_shift\n";
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const auto& r = sweep.reports[i];
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j)
      os << num(r.k) << ',' << j << ',' << num(r.eigenvalues[j]) << ',' << num(sweep.shifts[i][j]) << ','
         << num(sweep.expected_shift[i]) << '\n';
  }
  return os.str();
}

std::string curvature_csv(const CurvatureReport& r) {
  std::ostringstream os;
  const int n = r.curvature.empty() ? 0 : r.curvature.front().dim;
  os << "index";
  for (int k = 0; k < n; ++k) os << ",x" << k + 1;
  os << ",r_std,r_paper\n";
  for (std::size_t i = 0; i < r.curvature.size(); ++i) {
    const auto& c = r.curvature[i];
    os << i;
    for (double x : c.point) os << ',' << num(x);
    os << ',' << num(c.r_std) << ',' << num(c.r_paper) << '\n';
  }
  return os.str();
}

ResidualReport residual_report_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ResidualReport r;
  r.check = j.at("check").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.corpus = j.at("corpus").get<std::string>();
  r.tolerance = j.at("tolerance").get<double>();
  r.max_residual = j.at("max_residual").is_null() ? std::numeric_limits<double>::infinity()
                                                   : j.at("max_residual").get<double>();
  r.pass = j.at("pass").get<bool>();
  for (const auto& row : j.at("samples")) {
    ResidualSample s;
    s.quantity = row.at("quantity").get<std::string>();
    s.metric = row.at("metric").get<std::string>();
    s.point = row.at("point").get<std::vector<double>>();
    if (!row.at("value").is_null()) s.value = row.at("value").get<double>();
    s.residual = row.at("residual").is_null() ? std::numeric_limits<double>::infinity()
                                              : row.at("residual").get<double>();
    r.samples.push_back(std::move(s));
  }
  return r;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  static std::atomic<unsigned> counter{0};
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace cqmq
