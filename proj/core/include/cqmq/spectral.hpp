#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "cqmq/errors.hpp"
#include "cqmq/geometry.hpp"
#include "cqmq/operators.hpp"
#include "cqmq/phase_algebra.hpp"

namespace cqmq {

/// Tensor-product grid over a chart. Periodic axes carry nodes lo + j h;
/// bounded non-periodic axes are cell centred, lo + (j + 1/2) h, which keeps
/// nodes off coordinate singularities such as the poles of the sphere.
class Grid {
 public:
  Grid(const MetricChart& chart, std::vector<int> counts);

  int dim() const noexcept { return static_cast<int>(counts_.size()); }
  const std::vector<int>& counts() const noexcept { return counts_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  bool periodic(int axis) const { return periodic_[static_cast<std::size_t>(axis)]; }
  bool pole_offset() const noexcept { return pole_offset_; }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }

  std::vector<double> node(std::size_t index) const;
  std::vector<int> multi_index(std::size_t index) const;
  std::size_t index(const std::vector<int>& multi) const;
  /// Neighbour along `axis` in direction +1 or -1; npos when off a
  /// non-periodic boundary.
  std::size_t neighbor(std::size_t index, int axis, int direction) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Quadrature weights sqrt|g| times the cell volume, one per node.
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  std::string descriptor() const;

 private:
  std::vector<int> counts_;
  std::vector<double> spacing_;
  std::vector<double> origin_;
  std::vector<bool> periodic_;
  bool pole_offset_ = false;
  std::size_t size_ = 0;
  double cell_volume_ = 1.0;
  Eigen::VectorXd weights_;
  std::string chart_name_;
};

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;

struct DiscreteOperator {
  /// H, acting on nodal values of the eta-frame coefficient.
  SparseMatrixC matrix;
  /// Inner-product weights w (the adjoint of H is W^{-1} H^* W).
  Eigen::VectorXd weights;
  /// max |H_ij w_i - conj(H_ji) w_j|.
  double symmetry_certificate = 0.0;
  bool is_real = true;
  std::string grid_descriptor;
  std::string label;
};

double symmetry_certificate(const SparseMatrixC& h, const Eigen::VectorXd& w);

/// Discretisation of the quantum operator of f. The matrix is W^{-1} K with K
/// the Hermitian matrix of a sesquilinear form built from covariant edge
/// differences with link variables exp(-i A_i h_i).
DiscreteOperator assemble_operator(const SpecialPhaseFunction& f, const MetricChart& chart,
                                   const GaugePotential& a, const Grid& grid, double k);
DiscreteOperator assemble_hamiltonian(const MetricChart& chart, const GaugePotential& a, const Grid& grid,
                                      double k);

/// r with the flipped sign (r_paper) at every node.
Eigen::VectorXd nodal_scalar_curvature(const MetricChart& chart, const Grid& grid);

struct SpectrumReport {
  double k = 0.0;
  std::vector<double> eigenvalues;
  /// ||H v - lambda v|| in the weighted norm, for unit v.
  std::vector<double> residuals;
  std::string grid;
  double norm_estimate = 0.0;
  double shift = 0.0;
  double max_imag = 0.0;
  /// Certificate of the operator the spectrum was computed from.
  double symmetry_certificate = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
  bool converged = false;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, SpectrumReport partial)
      : Error(what), partial_(std::move(partial)) {}
  const SpectrumReport& partial() const noexcept { return partial_; }

 private:
  SpectrumReport partial_;
};

struct EigenOptions {
  std::uint64_t seed = 0x5eedULL;
  /// Residual target relative to the norm estimate.
  double tolerance = 1e-12;
  int max_restarts = 200;
};

/// The m smallest eigenvalues, ascending, by shift-invert block Krylov
/// iteration with full reorthogonalisation.
SpectrumReport eigen_spectrum(const DiscreteOperator& h, int m, const EigenOptions& options = {});

struct KSweep {
  std::vector<SpectrumReport> reports;
  /// shifts[i][j] = lambda_j(k_i) - lambda_j(0).
  std::vector<std::vector<double>> shifts;
  std::vector<double> expected_shift;
  bool constant_curvature = false;
  double r_paper = 0.0;
  double max_shift_deviation = 0.0;
};

KSweep k_sweep(const MetricChart& chart, const GaugePotential& a, const Grid& grid,
               const std::vector<double>& k_values, int m, const EigenOptions& options = {});

/// Builds the shift table from spectra computed elsewhere; `reference` is the
/// k = 0 spectrum.
KSweep make_sweep(const MetricChart& chart, const Grid& grid, std::vector<SpectrumReport> reports,
                  const SpectrumReport& reference);

}  // namespace cqmq
