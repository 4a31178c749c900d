#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "cqmq/spectral.hpp"

namespace cqmq {

namespace {

// Below this size the symmetrised matrix is diagonalised densely.
constexpr Eigen::Index kDenseLimit = 600;
constexpr int kKrylovBlocks = 6;

template <class Scalar>
using Sparse = Eigen::SparseMatrix<Scalar>;
template <class Scalar>
using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
Scalar from_complex(std::complex<double> z) {
  if constexpr (std::is_same_v<Scalar, double>)
    return z.real();
  else
    return z;
}

/// S = W^{1/2} H W^{-1/2}, symmetrised.
template <class Scalar>
Sparse<Scalar> symmetrise(const DiscreteOperator& h) {
  const Eigen::VectorXd s = h.weights.cwiseSqrt();
  std::vector<Eigen::Triplet<Scalar>> trips;
  trips.reserve(static_cast<std::size_t>(h.matrix.nonZeros()));
  for (int c = 0; c < h.matrix.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(h.matrix, c); it; ++it)
      trips.emplace_back(it.row(), it.col(), from_complex<Scalar>(it.value() * (s[it.row()] / s[it.col()])));
  Sparse<Scalar> m(h.matrix.rows(), h.matrix.cols());
  m.setFromTriplets(trips.begin(), trips.end());
  Sparse<Scalar> adj = m.adjoint();
  Sparse<Scalar> sym = (m + adj) * 0.5;
  sym.makeCompressed();
  return sym;
}

template <class Scalar>
double inf_norm(const Sparse<Scalar>& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c)
    for (typename Sparse<Scalar>::InnerIterator it(m, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

/// Orthonormalise the columns of `block` against `basis` (first `used`
/// columns) and among themselves, two passes of classical Gram-Schmidt.
/// Returns how many independent columns were appended to `basis`.
template <class Scalar>
Eigen::Index append_orthonormal(Dense<Scalar>& basis, Eigen::Index used, Dense<Scalar> block) {
  Eigen::Index added = 0;
  for (Eigen::Index j = 0; j < block.cols() && used + added < basis.cols(); ++j) {
    auto v = block.col(j).eval();
    const double before = v.norm();
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::Index k = used + added;
      if (k > 0) {
        const auto q = basis.leftCols(k);
        v -= q * (q.adjoint() * v);
      }
    }
    const double after = v.norm();
    if (after <= 1e-10 * before) continue;
    basis.col(used + added) = v / after;
    ++added;
  }
  return added;
}

template <class Scalar>
SpectrumReport solve(const DiscreteOperator& h, int m, const EigenOptions& options) {
  const Sparse<Scalar> s = symmetrise<Scalar>(h);
  const Eigen::Index n = s.rows();
  SpectrumReport rep;
  rep.grid = h.grid_descriptor;
  rep.seed = options.seed;
  rep.norm_estimate = inf_norm(s);
  rep.symmetry_certificate = h.symmetry_certificate;
  const double target = options.tolerance * std::max(rep.norm_estimate, 1.0);

  auto finish = [&](const Dense<Scalar>& y, const Eigen::VectorXd& theta) {
    rep.eigenvalues.assign(theta.data(), theta.data() + m);
    rep.residuals.clear();
    rep.max_imag = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto sy = (s * y.col(j)).eval();
      rep.residuals.push_back((sy - theta[j] * y.col(j)).norm());
      if constexpr (!std::is_same_v<Scalar, double>)
        rep.max_imag = std::max(rep.max_imag, std::abs(y.col(j).dot(sy).imag()));
    }
    rep.converged = std::all_of(rep.residuals.begin(), rep.residuals.end(), [&](double r) { return r <= target; });
  };

  if (n <= kDenseLimit) {
    const Dense<Scalar> full(s);
    Eigen::SelfAdjointEigenSolver<Dense<Scalar>> es(full);
    finish(es.eigenvectors().leftCols(m), es.eigenvalues());
    if (!rep.converged) throw NoConvergence("dense eigensolver residual above tolerance", rep);
    return rep;
  }

  // Shift below the spectrum: the LDL^T factor of S - sigma must have no
  // negative pivots.
  using Solver = Eigen::SimplicialLDLT<Sparse<Scalar>, Eigen::Lower>;
  Sparse<Scalar> id(n, n);
  id.setIdentity();
  Solver ldlt;
  double sigma = -1.0;
  for (int attempt = 0;; ++attempt) {
    ldlt.compute(s - sigma * id);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().real().array() > 0.0).all()) break;
    if (attempt > 200) throw NoConvergence("no shift below the spectrum found", rep);
    sigma = 2.0 * sigma - 1.0;
  }
  rep.shift = sigma;

  const Eigen::Index b = std::min<Eigen::Index>(m + 4, n);
  const Eigen::Index cap = std::min<Eigen::Index>(b * kKrylovBlocks, n);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Dense<Scalar> start(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<Scalar, double>)
        start(i, j) = normal(rng);
      else
        start(i, j) = Scalar(normal(rng), normal(rng));
    }

  Dense<Scalar> ritz_vectors;
  Eigen::VectorXd ritz_values;
  for (rep.restarts = 0; rep.restarts <= options.max_restarts; ++rep.restarts) {
    Dense<Scalar> q(n, cap);
    Eigen::Index used = append_orthonormal<Scalar>(q, 0, start);
    Eigen::Index block_begin = 0;
    while (used < cap) {
      const Eigen::Index block_end = used;
      if (block_end == block_begin) break;
      Dense<Scalar> next = ldlt.solve(q.middleCols(block_begin, block_end - block_begin));
      const Eigen::Index added = append_orthonormal<Scalar>(q, used, std::move(next));
      if (added == 0) break;
      block_begin = block_end;
      used += added;
    }
    const auto basis = q.leftCols(used);
    Dense<Scalar> sq = s * basis;
    Dense<Scalar> t = basis.adjoint() * sq;
    t = (t + t.adjoint().eval()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Dense<Scalar>> es(t);
    const Eigen::Index keep = std::min<Eigen::Index>(b, used);
    ritz_values = es.eigenvalues();
    ritz_vectors = basis * es.eigenvectors().leftCols(keep);
    if (used < m) throw NoConvergence("Krylov space smaller than the requested eigenvalue count", rep);
    finish(ritz_vectors, ritz_values);
    if (rep.converged) return rep;
    start = ritz_vectors;
  }
  rep.restarts = options.max_restarts;
  throw NoConvergence("eigensolver did not reach the residual tolerance", rep);
}

}  // namespace

SpectrumReport eigen_spectrum(const DiscreteOperator& h, int m, const EigenOptions& options) {
  if (m <= 0) throw std::invalid_argument("eigen_spectrum: eigenvalue count must be positive");
  if (m > h.matrix.rows())
    throw std::invalid_argument("eigen_spectrum: requested " + std::to_string(m) + " eigenvalues of a " +
                                std::to_string(h.matrix.rows()) + "-node operator");
  return h.is_real ? solve<double>(h, m, options) : solve<std::complex<double>>(h, m, options);
}

}  // namespace cqmq
