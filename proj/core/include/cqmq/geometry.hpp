#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqmq/expression.hpp"
#include "cqmq/field.hpp"
#include "cqmq/jet.hpp"

namespace cqmq {

/// Full n x n matrix of metric jets, row major.
using MetricJets = std::vector<RealJet>;

/// A metric given as a jet source; charts and pulled-back metrics both provide one.
class MetricField {
 public:
  using Fn = std::function<MetricJets(std::span<const double>, int)>;

  MetricField() = default;
  MetricField(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  int dim() const noexcept { return dim_; }
  MetricJets jets(std::span<const double> p, int order) const { return fn_(p, order); }

 private:
  int dim_ = 0;
  Fn fn_;
};

/// Jet-level geometry at one point: metric, inverse, density powers,
/// Levi-Civita symbols and curvature, all as jets. Built from metric jets of
/// order d; Christoffel symbols have order d-1 and curvature d-2.
///
/// Christoffel symbols here use the standard sign. The flipped convention
/// exposed by CurvatureData::gamma_paper is never used for curvature.
class LocalGeometry {
 public:
  LocalGeometry(int dim, MetricJets g);

  int dim() const noexcept { return n_; }
  int order() const noexcept { return order_; }

  const RealJet& g(int i, int j) const { return g_[idx(i, j)]; }
  const RealJet& ginv(int i, int j) const { return ginv_[idx(i, j)]; }
  const RealJet& det() const noexcept { return det_; }
  const RealJet& sqrt_det() const noexcept { return sqrt_det_; }
  /// |g|^{1/4} and |g|^{-1/4}.
  const RealJet& quarter() const noexcept { return quarter_; }
  const RealJet& inv_quarter() const noexcept { return inv_quarter_; }
  /// ln|g| relative to its value at the base point.
  const RealJet& log_det_shift() const noexcept { return log_det_; }

  /// Density connection form on the coordinate half-density: -(1/4) d_i ln|g|.
  RealJet omega(int i) const;

  /// Standard Levi-Civita symbol Gamma^i_{jk}.
  const RealJet& gamma(int i, int j, int k) const;
  /// R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj}.
  const RealJet& riemann(int i, int j, int k, int l) const;
  const RealJet& ricci(int j, int l) const;
  /// Scalar curvature with the standard sign (unit sphere: +2).
  const RealJet& scalar_std() const;

 private:
  std::size_t idx(int i, int j) const noexcept {
    return static_cast<std::size_t>(i * n_ + j);
  }
  void build_gamma() const;
  void build_curvature() const;

  int n_;
  int order_;
  MetricJets g_;
  MetricJets ginv_;
  RealJet det_, sqrt_det_, quarter_, inv_quarter_, log_det_;
  mutable std::vector<RealJet> gamma_;
  mutable std::vector<RealJet> riemann_;
  mutable std::vector<RealJet> ricci_;
  mutable RealJet scalar_;
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// A single coordinate chart with closed-form metric components.
class MetricChart {
 public:
  /// `upper` holds g_ij for i <= j in row-major order (n(n+1)/2 entries).
  MetricChart(std::string name, int dim, std::vector<Expression> upper, std::vector<Interval> domain,
              std::vector<std::optional<double>> periods, ParseOptions names = {});

  static MetricChart euclidean(int n);
  /// Circle of circumference L, coordinate in [0, L).
  static MetricChart circle(double length);
  static MetricChart flat_torus(double l1, double l2);
  /// Sphere of radius R in (theta, phi) coordinates, g = R^2 diag(1, sin^2 theta).
  static MetricChart sphere(double radius = 1.0);
  /// Poincare half plane g = (dx^2 + dy^2)/y^2, y > 0.
  static MetricChart half_plane();
  /// Parses the metric from strings; `components` is either the full n x n
  /// matrix or the n(n+1)/2 upper-triangle entries. Empty domain means R^n.
  static MetricChart from_strings(std::string name, int dim, const std::vector<std::string>& components,
                                  std::vector<Interval> domain = {},
                                  std::vector<std::optional<double>> periods = {},
                                  ParseOptions names = {});

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return n_; }
  const Expression& component(int i, int j) const;
  const std::vector<Interval>& domain() const noexcept { return domain_; }
  const std::optional<double>& period(int k) const { return periods_[static_cast<std::size_t>(k)]; }
  /// Parse options carrying the chart dimension and coordinate aliases.
  const ParseOptions& names() const noexcept { return names_; }

  bool contains(std::span<const double> p) const;
  /// Raises DomainError when p lies outside the chart.
  void require_inside(std::span<const double> p) const;

  const MetricField& field() const noexcept { return field_; }
  operator const MetricField&() const noexcept { return field_; }

  /// The chart of c^2 g.
  MetricChart scaled(double c) const;

 private:
  std::string name_;
  int n_;
  std::vector<Expression> upper_;
  std::vector<Interval> domain_;
  std::vector<std::optional<double>> periods_;
  ParseOptions names_;
  MetricField field_;
};

struct MetricValue {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  double det = 0.0;
  /// |g|^{1/4}
  double quarter_power = 0.0;
};

/// Raises NotPositiveDefinite when the Cholesky factorisation fails.
MetricValue metric_at(const MetricField& m, std::span<const double> p);
MetricValue metric_at(const MetricChart& m, std::span<const double> p);

struct CurvatureData {
  std::vector<double> point;
  int dim = 0;
  /// Index [i][j][k] stored at (i*n + j)*n + k.
  std::vector<double> gamma_paper;
  std::vector<double> gamma_std;
  /// R^i_{jkl} at ((i*n + j)*n + k)*n + l; empty until curvature is requested.
  std::vector<double> riemann;
  std::vector<double> ricci;
  double r_std = 0.0;
  double r_paper = 0.0;
  bool has_curvature = false;

  double gamma(int i, int j, int k) const { return gamma_paper[flat(i, j, k)]; }
  double gamma_standard(int i, int j, int k) const { return gamma_std[flat(i, j, k)]; }

 private:
  std::size_t flat(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>((i * dim + j) * dim + k);
  }
};

CurvatureData christoffel(const MetricField& m, std::span<const double> p);
CurvatureData christoffel(const MetricChart& m, std::span<const double> p);
CurvatureData scalar_curvature(const MetricField& m, std::span<const double> p);
CurvatureData scalar_curvature(const MetricChart& m, std::span<const double> p);

/// Second-order normal coordinates y about a point p:
///   x^i(y) = p^i + L^i_a y^a + B^i_ab y^a y^b + C^i_abc y^a y^b y^c,
/// with L^T g(p) L = I, B from Gamma(p) and C from dGamma(p) (geodesic Taylor
/// expansion). The pulled-back metric is exact at the pole through second
/// derivatives.
class NormalChart {
 public:
  NormalChart(const MetricField& m, std::span<const double> p);

  int dim() const noexcept { return n_; }
  const std::vector<double>& center() const noexcept;
  /// L with L^T g(p) L = I.
  const Eigen::MatrixXd& linear() const noexcept;
  double quadratic(int i, int a, int b) const;
  double cubic(int i, int a, int b, int c) const;

  /// Jets of x^i(y) about y.
  std::vector<RealJet> transition(std::span<const double> y, int order) const;
  /// Jets of dx^i/dy^a, stored [i*n + a].
  std::vector<RealJet> jacobian(std::span<const double> y, int order) const;

  /// Metric in normal coordinates; accurate to second order at y = 0.
  const MetricField& metric() const noexcept { return metric_; }

  RealField pull_back(const RealField& f) const;
  ComplexField pull_back(const ComplexField& f) const;
  /// Pull-back of a covector field A_i dx^i.
  std::vector<RealField> pull_back_covector(const std::vector<RealField>& a) const;

  /// The pole y = 0.
  std::vector<double> pole() const { return std::vector<double>(static_cast<std::size_t>(n_), 0.0); }

 private:
  struct Data;

  template <class T>
  Field<T> pull_back_impl(const Field<T>& f) const;

  int n_;
  std::shared_ptr<const Data> data_;
  MetricField metric_;
};

}  // namespace cqmq
