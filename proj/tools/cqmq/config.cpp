#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cqmq/errors.hpp"
#include "cqmq/verifier.hpp"
#include "json.hpp"

namespace cqmq::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : "'" + where + "': " + what);
}

std::string join(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

std::string index(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

void only_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& item : j.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ConfigError("unknown key '" + join(where, item.key()) + "'");
}

/// A number, or a string holding a constant expression such as "1/6" or "2*pi".
double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    ParseOptions o;
    o.dimension = 0;
    try {
      const auto z = constant_value(parse(j.get<std::string>(), o));
      if (z.imag() != 0.0) fail(where, "expected a real number");
      return z.real();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected a number");
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0) || !std::isfinite(v)) fail(where, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& where, int lo, int hi = std::numeric_limits<int>::max()) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    fail(where, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

MetricChart custom_manifold(const json& j, const std::string& where) {
  only_keys(j, where, {"kind", "name", "dim", "metric", "domain", "periods", "coordinates"});
  if (!j.contains("dim")) fail(join(where, "dim"), "required");
  if (!j.contains("metric")) fail(join(where, "metric"), "required");
  const int n = integer(j["dim"], join(where, "dim"), 1, 3);
  const std::string name = j.contains("name") ? text(j["name"], join(where, "name")) : "custom";

  std::vector<std::string> components;
  const auto mw = join(where, "metric");
  for (std::size_t i = 0; i < array(j["metric"], mw).size(); ++i) {
    const auto& row = j["metric"][i];
    if (row.is_array()) {
      for (std::size_t k = 0; k < row.size(); ++k) components.push_back(text(row[k], index(index(mw, i), k)));
    } else {
      components.push_back(text(row, index(mw, i)));
    }
  }
  const auto nn = static_cast<std::size_t>(n);
  if (components.size() != nn * nn && components.size() != nn * (nn + 1) / 2)
    fail(mw, "expected " + std::to_string(n * n) + " or " + std::to_string(n * (n + 1) / 2) + " components");

  std::vector<Interval> domain(nn);
  if (j.contains("domain")) {
    const auto dw = join(where, "domain");
    if (array(j["domain"], dw).size() != nn) fail(dw, "expected one interval per coordinate");
    for (std::size_t k = 0; k < nn; ++k) {
      const auto& iv = j["domain"][k];
      if (!iv.is_array() || iv.size() != 2) fail(index(dw, k), "expected [lo, hi] (null for unbounded)");
      if (!iv[0].is_null()) domain[k].lo = number(iv[0], index(dw, k));
      if (!iv[1].is_null()) domain[k].hi = number(iv[1], index(dw, k));
      if (!(domain[k].lo < domain[k].hi)) fail(index(dw, k), "empty interval");
    }
  }
  std::vector<std::optional<double>> periods(nn);
  if (j.contains("periods")) {
    const auto pw = join(where, "periods");
    if (array(j["periods"], pw).size() != nn) fail(pw, "expected one entry per coordinate");
    for (std::size_t k = 0; k < nn; ++k)
      if (!j["periods"][k].is_null()) periods[k] = positive(j["periods"][k], index(pw, k));
  }
  ParseOptions names;
  names.dimension = n;
  if (j.contains("coordinates")) {
    const auto cw = join(where, "coordinates");
    if (array(j["coordinates"], cw).size() != nn) fail(cw, "expected one name per coordinate");
    for (std::size_t k = 0; k < nn; ++k) names.aliases[text(j["coordinates"][k], index(cw, k))] = static_cast<int>(k);
  }
  try {
    return MetricChart::from_strings(name, n, components, domain, periods, names);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(mw, e.what());
  }
}

MetricChart manifold(const json& j) {
  const std::string where = "manifold";
  if (!j.is_object() || !j.contains("kind")) fail(where, "expected an object with a 'kind'");
  const auto kind = text(j["kind"], join(where, "kind"));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (kind == "euclidean") {
    only_keys(j, where, {"kind", "dim"});
    return MetricChart::euclidean(j.contains("dim") ? integer(j["dim"], join(where, "dim"), 1, 3) : 2);
  }
  if (kind == "circle") {
    only_keys(j, where, {"kind", "length"});
    return MetricChart::circle(j.contains("length") ? positive(j["length"], join(where, "length")) : two_pi);
  }
  if (kind == "flat_torus") {
    only_keys(j, where, {"kind", "lengths"});
    double l1 = two_pi, l2 = two_pi;
    if (j.contains("lengths")) {
      const auto lw = join(where, "lengths");
      if (!j["lengths"].is_array() || j["lengths"].size() != 2) fail(lw, "expected [L1, L2]");
      l1 = positive(j["lengths"][0], index(lw, 0));
      l2 = positive(j["lengths"][1], index(lw, 1));
    }
    return MetricChart::flat_torus(l1, l2);
  }
  if (kind == "sphere") {
    only_keys(j, where, {"kind", "radius"});
    return MetricChart::sphere(j.contains("radius") ? positive(j["radius"], join(where, "radius")) : 1.0);
  }
  if (kind == "half_plane") {
    only_keys(j, where, {"kind"});
    return MetricChart::half_plane();
  }
  if (kind == "custom") return custom_manifold(j, where);
  fail(join(where, "kind"), "unknown manifold kind '" + kind + "'");
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GaugeSpec gauge(const json& j) {
  only_keys(j, "gauge", {"A0", "A"});
  GaugeSpec g;
  if (j.contains("A0")) g.a0 = j["A0"].is_number() ? number_text(j["A0"].get<double>()) : text(j["A0"], "gauge.A0");
  if (j.contains("A"))
    for (std::size_t i = 0; i < array(j["A"], "gauge.A").size(); ++i) {
      const auto& c = j["A"][i];
      g.a.push_back(c.is_number() ? number_text(c.get<double>()) : text(c, index("gauge.A", i)));
    }
  return g;
}

bool known_check(std::string_view name) {
  const auto& names = check_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

GaugePotential GaugeSpec::build(const MetricChart& chart) const {
  const int n = chart.dim();
  if (!a.empty() && a.size() != static_cast<std::size_t>(n))
    throw ConfigError("'gauge.A': expected " + std::to_string(n) + " components");
  ParseOptions o = chart.names();
  o.dimension = n;
  o.allow_time = false;
  try {
    std::vector<Expression> spatial;
    for (int i = 0; i < n; ++i) spatial.push_back(parse(a.empty() ? "0" : a[static_cast<std::size_t>(i)], o));
    return GaugePotential::from_expressions(parse(a0, o), spatial, n);
  } catch (const Error& e) {
    throw ConfigError(std::string("'gauge': ") + e.what());
  }
}

double RunConfig::tolerance_for(std::string_view check) const {
  if (const auto it = tolerance_per_check.find(check); it != tolerance_per_check.end()) return it->second;
  if (tolerance) return *tolerance;
  return default_tolerance(check);
}

GaugePotential RunConfig::gauge_for(const MetricChart& chart) const {
  return gauge ? gauge->build(chart) : GaugePotential::zero(chart.dim());
}

RunConfig parse_config(std::string_view source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "", {"schema_version", "manifold", "gauge", "points", "k", "grid", "eigenvalues", "checks",
                    "tolerance", "seed", "corpus", "eigensolver", "output"});
  RunConfig c;
  if (j.contains("schema_version") && integer(j["schema_version"], "schema_version", 0) != kConfigSchemaVersion)
    fail("schema_version", "unsupported version (this build reads " + std::to_string(kConfigSchemaVersion) + ")");

  if (j.contains("manifold")) c.manifold = manifold(j["manifold"]);
  if (j.contains("gauge")) {
    if (!c.manifold) fail("gauge", "a gauge needs a 'manifold'");
    c.gauge = gauge(j["gauge"]);
    c.gauge->build(*c.manifold);
  }
  if (j.contains("points")) {
    for (std::size_t i = 0; i < array(j["points"], "points").size(); ++i) {
      const auto w = index("points", i);
      std::vector<double> p;
      for (std::size_t k = 0; k < array(j["points"][i], w).size(); ++k) p.push_back(number(j["points"][i][k], index(w, k)));
      if (c.manifold && p.size() != static_cast<std::size_t>(c.manifold->dim()))
        fail(w, "expected " + std::to_string(c.manifold->dim()) + " coordinates");
      c.points.push_back(std::move(p));
    }
    if (!c.manifold && !c.points.empty()) fail("points", "points need a 'manifold'");
  }
  if (j.contains("k")) {
    c.k.clear();
    if (j["k"].is_array()) {
      for (std::size_t i = 0; i < j["k"].size(); ++i) c.k.push_back(number(j["k"][i], index("k", i)));
    } else {
      c.k.push_back(number(j["k"], "k"));
    }
    if (c.k.empty()) fail("k", "expected at least one value");
  }
  if (j.contains("grid")) {
    for (std::size_t i = 0; i < array(j["grid"], "grid").size(); ++i)
      c.grid.push_back(integer(j["grid"][i], index("grid", i), 3, 1 << 20));
    if (c.manifold && c.grid.size() != static_cast<std::size_t>(c.manifold->dim()))
      fail("grid", "expected one node count per coordinate");
  }
  if (j.contains("eigenvalues")) c.eigenvalues = integer(j["eigenvalues"], "eigenvalues", 1, 10000);
  if (j.contains("checks")) {
    const auto& a = j["checks"];
    if (a.is_string() && a.get<std::string>() == "all") {
      c.checks = check_names();
    } else {
      for (std::size_t i = 0; i < array(a, "checks").size(); ++i) {
        auto name = text(a[i], index("checks", i));
        if (!known_check(name)) fail(index("checks", i), "unknown check '" + name + "'");
        c.checks.push_back(std::move(name));
      }
    }
  }
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    if (t.is_object()) {
      for (const auto& item : t.items()) {
        if (!known_check(item.key())) throw ConfigError("unknown key 'tolerance." + item.key() + "'");
        c.tolerance_per_check[item.key()] = positive(item.value(), "tolerance." + item.key());
      }
    } else {
      c.tolerance = positive(t, "tolerance");
    }
  }
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (s.is_number_unsigned())
      c.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<long long>() >= 0)
      c.seed = static_cast<std::uint64_t>(s.get<long long>());
    else
      fail("seed", "expected a non-negative integer");
  }
  if (j.contains("corpus")) {
    const auto& k = j["corpus"];
    only_keys(k, "corpus", {"random_2d", "random_3d", "points_per_metric", "sections_per_metric", "sphere",
                            "half_plane"});
    if (k.contains("random_2d")) c.corpus.random_2d = integer(k["random_2d"], "corpus.random_2d", 0, 1000);
    if (k.contains("random_3d")) c.corpus.random_3d = integer(k["random_3d"], "corpus.random_3d", 0, 1000);
    if (k.contains("points_per_metric"))
      c.corpus.points_per_metric = integer(k["points_per_metric"], "corpus.points_per_metric", 1, 1000);
    if (k.contains("sections_per_metric"))
      c.corpus.sections_per_metric = integer(k["sections_per_metric"], "corpus.sections_per_metric", 1, 100);
    for (const char* key : {"sphere", "half_plane"})
      if (k.contains(key)) {
        if (!k[key].is_boolean()) fail(std::string("corpus.") + key, "expected true or false");
        (std::string_view(key) == "sphere" ? c.corpus.include_sphere : c.corpus.include_half_plane) =
            k[key].get<bool>();
      }
  }
  if (j.contains("eigensolver")) {
    const auto& e = j["eigensolver"];
    only_keys(e, "eigensolver", {"tolerance", "max_restarts"});
    if (e.contains("tolerance")) c.eigen.tolerance = positive(e["tolerance"], "eigensolver.tolerance");
    if (e.contains("max_restarts"))
      c.eigen.max_restarts = integer(e["max_restarts"], "eigensolver.max_restarts", 0, 100000);
  }
  if (j.contains("output")) c.output = text(j["output"], "output");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cqmq::cli
