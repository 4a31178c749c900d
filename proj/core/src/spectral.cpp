#include "cqmq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqmq {

namespace {

using complex = std::complex<double>;
using Triplet = Eigen::Triplet<complex>;

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(const MetricChart& chart, std::vector<int> counts)
    : counts_(std::move(counts)), chart_name_(chart.name()) {
  const int n = chart.dim();
  if (counts_.size() != sz(n))
    throw DomainError("grid needs one node count per coordinate (" + std::to_string(n) + ")");
  size_ = 1;
  for (int k = 0; k < n; ++k) {
    const int c = counts_[sz(k)];
    if (c < 3) throw GridTooCoarse("grid needs at least 3 nodes per axis");
    const auto& period = chart.period(k);
    const auto& box = chart.domain()[sz(k)];
    double h = 0.0, origin = 0.0;
    if (period) {
      h = *period / c;
      origin = std::isfinite(box.lo) ? box.lo : 0.0;
      periodic_.push_back(true);
    } else if (std::isfinite(box.lo) && std::isfinite(box.hi)) {
      h = (box.hi - box.lo) / c;
      origin = box.lo + 0.5 * h;
      periodic_.push_back(false);
      pole_offset_ = true;
    } else {
      throw DomainError("cannot grid unbounded non-periodic coordinate x" + std::to_string(k + 1) +
                        " of " + chart.name());
    }
    spacing_.push_back(h);
    origin_.push_back(origin);
    cell_volume_ *= h;
    size_ *= sz(c);
  }
  weights_.resize(static_cast<Eigen::Index>(size_));
  for (std::size_t a = 0; a < size_; ++a) {
    const auto p = node(a);
    weights_[static_cast<Eigen::Index>(a)] = std::sqrt(metric_at(chart, p).det) * cell_volume_;
  }
}

std::vector<int> Grid::multi_index(std::size_t index) const {
  std::vector<int> m(counts_.size());
  for (std::size_t k = counts_.size(); k-- > 0;) {
    const auto c = sz(counts_[k]);
    m[k] = static_cast<int>(index % c);
    index /= c;
  }
  return m;
}

std::size_t Grid::index(const std::vector<int>& multi) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) idx = idx * sz(counts_[k]) + sz(multi[k]);
  return idx;
}

std::vector<double> Grid::node(std::size_t index) const {
  const auto m = multi_index(index);
  std::vector<double> p(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) p[k] = origin_[k] + m[k] * spacing_[k];
  return p;
}

std::size_t Grid::neighbor(std::size_t index, int axis, int direction) const {
  auto m = multi_index(index);
  const auto ax = sz(axis);
  int j = m[ax] + direction;
  const int c = counts_[ax];
  if (j < 0 || j >= c) {
    if (!periodic_[ax]) return npos;
    j = (j % c + c) % c;
  }
  m[ax] = j;
  return this->index(m);
}

std::string Grid::descriptor() const {
  std::ostringstream os;
  os << chart_name_ << " grid ";
  for (std::size_t k = 0; k < counts_.size(); ++k) os << (k ? "x" : "") << counts_[k];
  if (pole_offset_) os << " (cell-centred)";
  return os.str();
}

// ---------------------------------------------------------------------------
// Assembly

double symmetry_certificate(const SparseMatrixC& h, const Eigen::VectorXd& w) {
  const SparseMatrixC ht = h.adjoint();
  double worst = 0.0;
  // Compare H_ij w_i with conj(H_ji) w_j = (H^*)_ij w_j entry by entry.
  SparseMatrixC lhs = w.cast<complex>().asDiagonal() * h;
  SparseMatrixC rhs = ht * w.cast<complex>().asDiagonal();
  SparseMatrixC diff = lhs - rhs;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(diff, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

Eigen::VectorXd nodal_scalar_curvature(const MetricChart& chart, const Grid& grid) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const auto p = grid.node(a);
    LocalGeometry geo(chart.dim(), chart.field().jets(p, 2));
    r[static_cast<Eigen::Index>(a)] = local::scalar_paper(geo).value();
  }
  return r;
}

DiscreteOperator assemble_operator(const SpecialPhaseFunction& f, const MetricChart& chart,
                                   const GaugePotential& a, const Grid& grid, double k) {
  const int n = chart.dim();
  if (grid.dim() != n || f.dim() != n || a.dim() != n)
    throw std::invalid_argument("assemble_operator: dimension mismatch");
  const auto& h = grid.spacing();
  const double vol = grid.cell_volume();
  const auto& w = grid.weights();
  std::vector<Triplet> trips;
  trips.reserve(grid.size() * sz(4 * n + 1 + (n > 1 ? 8 * n * (n - 1) : 0)));

  auto link = [&](const std::vector<double>& base, int axis) {
    auto mid = base;
    mid[sz(axis)] += 0.5 * h[sz(axis)];
    const double phase = a.a[sz(axis)].value(mid) * h[sz(axis)];
    return std::polar(1.0, -phase);
  };

  for (std::size_t ia = 0; ia < grid.size(); ++ia) {
    const auto pa = grid.node(ia);
    const auto ea = static_cast<Eigen::Index>(ia);

    // Multiplication part.
    complex diag = f.scal.value(pa);
    if (f.f0 != 0.0 && k != 0.0) {
      LocalGeometry geo(n, chart.field().jets(pa, 2));
      diag -= 0.5 * k * f.f0 * local::scalar_paper(geo).value();
    }
    trips.emplace_back(ea, ea, w[ea] * diag);

    for (int i = 0; i < n; ++i) {
      const auto ib = grid.neighbor(ia, i, +1);
      if (ib == Grid::npos) continue;
      const auto eb = static_cast<Eigen::Index>(ib);
      auto mid = pa;
      mid[sz(i)] += 0.5 * h[sz(i)];
      LocalGeometry geo(n, chart.field().jets(mid, 0));
      const complex u = link(pa, i);

      if (f.f0 != 0.0) {
        // (f0/2) c |U psi_b - psi_a|^2.
        const double c = 0.5 * f.f0 * geo.sqrt_det().value() * geo.ginv(i, i).value() * vol /
                         (h[sz(i)] * h[sz(i)]);
        trips.emplace_back(ea, ea, c);
        trips.emplace_back(eb, eb, c);
        trips.emplace_back(ea, eb, -c * u);
        trips.emplace_back(eb, ea, -c * std::conj(u));
      }

      // -i f^i D_i - (i/2) div f, in symmetric form.
      double up = 0.0;
      for (int j = 0; j < n; ++j) up += geo.ginv(i, j).value() * f.lin[sz(j)].value(mid);
      if (up != 0.0) {
        const double phi = geo.sqrt_det().value() * up * vol / h[sz(i)];
        trips.emplace_back(ea, eb, complex(0.0, -0.5) * phi * u);
        trips.emplace_back(eb, ea, complex(0.0, 0.5) * phi * std::conj(u));
      }
    }

    // Mixed second-order terms on the cell with corner ia.
    if (f.f0 == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto b_i = grid.neighbor(ia, i, +1);
        const auto b_j = grid.neighbor(ia, j, +1);
        if (b_i == Grid::npos || b_j == Grid::npos) continue;
        const auto b_ij = grid.neighbor(b_i, j, +1);
        if (b_ij == Grid::npos) continue;
        auto centre = pa;
        centre[sz(i)] += 0.5 * h[sz(i)];
        centre[sz(j)] += 0.5 * h[sz(j)];
        LocalGeometry geo(n, chart.field().jets(centre, 0));
        const double mij = geo.sqrt_det().value() * geo.ginv(i, j).value() * vol;
        if (mij == 0.0) continue;
        const complex ui_a = link(pa, i), uj_a = link(pa, j);
        const complex ui_j = link(grid.node(b_j), i), uj_i = link(grid.node(b_i), j);
        // Corner order: a, a+e_i, a+e_j, a+e_i+e_j.
        const std::size_t corners[4] = {ia, b_i, b_j, b_ij};
        const complex gi[4] = {-0.5 / h[sz(i)], 0.5 * ui_a / h[sz(i)], -0.5 * uj_a / h[sz(i)],
                               0.5 * uj_a * ui_j / h[sz(i)]};
        const complex gj[4] = {-0.5 / h[sz(j)], -0.5 * ui_a / h[sz(j)], 0.5 * uj_a / h[sz(j)],
                               0.5 * ui_a * uj_i / h[sz(j)]};
        // (f0/2) m (conj(G_i) G_j + conj(G_j) G_i).
        const double s = 0.5 * f.f0 * mij;
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            const complex v = s * (std::conj(gi[r]) * gj[c] + std::conj(gj[r]) * gi[c]);
            trips.emplace_back(static_cast<Eigen::Index>(corners[r]), static_cast<Eigen::Index>(corners[c]), v);
          }
      }
  }

  const auto size = static_cast<Eigen::Index>(grid.size());
  SparseMatrixC kmat(size, size);
  kmat.setFromTriplets(trips.begin(), trips.end());
  const Eigen::VectorXd winv = w.cwiseInverse();
  SparseMatrixC hmat = winv.cast<complex>().asDiagonal() * kmat;
  hmat.makeCompressed();

  DiscreteOperator out;
  out.matrix = std::move(hmat);
  out.weights = w;
  out.symmetry_certificate = symmetry_certificate(out.matrix, w);
  out.is_real = true;
  for (int c = 0; c < out.matrix.outerSize() && out.is_real; ++c)
    for (SparseMatrixC::InnerIterator it(out.matrix, c); it; ++it)
      if (it.value().imag() != 0.0) {
        out.is_real = false;
        break;
      }
  out.grid_descriptor = grid.descriptor();
  out.label = f.label.empty() ? "f^" : f.label + "^";
  return out;
}

DiscreteOperator assemble_hamiltonian(const MetricChart& chart, const GaugePotential& a, const Grid& grid,
                                      double k) {
  auto h = assemble_operator(SpecialPhaseFunction::free_hamiltonian(chart.dim(), a.a0), chart, a, grid, k);
  h.label = "H0";
  return h;
}

// ---------------------------------------------------------------------------
// k sweep

KSweep make_sweep(const MetricChart& chart, const Grid& grid, std::vector<SpectrumReport> reports,
                  const SpectrumReport& reference) {
  KSweep out;
  const auto r = nodal_scalar_curvature(chart, grid);
  const double rmax = r.maxCoeff(), rmin = r.minCoeff();
  out.r_paper = 0.5 * (rmax + rmin) + 0.0;
  out.constant_curvature = (rmax - rmin) <= 1e-9 * std::max(1.0, std::abs(out.r_paper));
  out.reports = std::move(reports);
  for (const auto& rep : out.reports) {
    std::vector<double> shift;
    for (std::size_t j = 0; j < rep.eigenvalues.size() && j < reference.eigenvalues.size(); ++j)
      shift.push_back(rep.eigenvalues[j] - reference.eigenvalues[j]);
    const double expected = out.constant_curvature ? -0.5 * rep.k * out.r_paper + 0.0 : 0.0;
    out.expected_shift.push_back(expected);
    if (out.constant_curvature)
      for (double s : shift) out.max_shift_deviation = std::max(out.max_shift_deviation, std::abs(s - expected));
    out.shifts.push_back(std::move(shift));
  }
  return out;
}

KSweep k_sweep(const MetricChart& chart, const GaugePotential& a, const Grid& grid,
               const std::vector<double>& k_values, int m, const EigenOptions& options) {
  std::vector<SpectrumReport> reports;
  const SpectrumReport* reference = nullptr;
  for (double k : k_values) {
    auto rep = eigen_spectrum(assemble_hamiltonian(chart, a, grid, k), m, options);
    rep.k = k;
    reports.push_back(std::move(rep));
  }
  for (const auto& rep : reports)
    if (rep.k == 0.0) {
      reference = &rep;
      break;
    }
  SpectrumReport computed;
  if (!reference) {
    computed = eigen_spectrum(assemble_hamiltonian(chart, a, grid, 0.0), m, options);
    reference = &computed;
  }
  const SpectrumReport ref = *reference;
  return make_sweep(chart, grid, std::move(reports), ref);
}

}  // namespace cqmq
