#include "doalab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace doalab {

ScanGrid ScanGrid::with_step(double step_deg) {
  return ScanGrid{step_deg, 180.0 - step_deg, step_deg};
}

void ScanGrid::validate() const {
  if (!(step_deg > 0.0)) {
    throw ParameterError("grid step must be positive");
  }
  if (!(start_deg >= 0.0 && stop_deg <= 180.0 && start_deg < stop_deg)) {
    throw ParameterError("grid must satisfy 0 <= start < stop <= 180");
  }
}

std::size_t ScanGrid::size() const {
  validate();
  return static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
}

std::vector<double> ScanGrid::angles() const {
  const std::size_t n = size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = start_deg + step_deg * static_cast<double>(i);
  }
  return out;
}

std::string_view to_string(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::Capon:
      return "capon";
    case SpectrumMethod::Music:
      return "music";
    case SpectrumMethod::MusicLikeFixed:
      return "music_like_fixed";
    case SpectrumMethod::MusicLikeAdaptive:
      return "music_like_adaptive";
  }
  return "unknown";
}

BetaBounds BetaBounds::from_endpoints(double beta_min, double beta_max) {
  BetaBounds b;
  b.beta_min = beta_min;
  b.beta_max = beta_max;
  b.xi = beta_min / beta_max;
  b.validate();
  return b;
}

void BetaBounds::validate() const {
  if (!(beta_min > 0.0 && beta_min <= beta_max) || !std::isfinite(beta_max)) {
    throw ParameterError("beta bounds must satisfy 0 < beta_min <= beta_max");
  }
}

void normalize_phase(CVector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs2().maxCoeff(&idx);
  const double mag = std::abs(v(idx));
  if (mag > 0.0) {
    v *= std::conj(v(idx)) / mag;
    v(idx) = cdouble(mag, 0.0);
  }
}

namespace {

double db_of_inverse(double denom) {
  if (!(denom > 0.0)) {
    return kSpectrumCapDb;
  }
  return std::min(kSpectrumCapDb, -10.0 * std::log10(denom));
}

}  // namespace

EigenDecomposition hermitian_eig(const ScatterEstimate& r) {
  const CMatrix& m = r.matrix;
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ParameterError("scatter matrix must be square and non-empty");
  }
  const double scale = std::max(m.norm(), 1e-300);
  if ((m - m.adjoint()).norm() > 1e-10 * scale) {
    throw ParameterError("scatter matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw DegenerateInputError("Hermitian eigensolver did not converge");
  }
  // Eigen sorts ascending; store descending.
  const Eigen::Index n = m.rows();
  EigenDecomposition out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    CVector v = solver.eigenvectors().col(n - 1 - i);
    normalize_phase(v);
    out.eigenvectors.col(i) = v;
  }
  return out;
}

ScatterAnalysis::ScatterAnalysis(const ScatterEstimate& r, const ArrayGeometry& geom)
    : matrix_(r.matrix), geom_(geom), eig_(hermitian_eig(r)), norm_(r.matrix.norm()) {
  geom_.validate();
  if (static_cast<std::size_t>(matrix_.rows()) != geom_.sensors) {
    throw ParameterError("scatter matrix dimension " + std::to_string(matrix_.rows()) +
                         " does not match array of " + std::to_string(geom_.sensors) + " sensors");
  }
}

void ScatterAnalysis::require_invertible() const {
  const double lmax = eig_.eigenvalues(0);
  const double lmin = eig_.min_eigenvalue();
  if (!(lmin > 1e-12 * lmax) || !(lmax > 0.0)) {
    throw DegenerateInputError(
        "scatter matrix is singular or nearly so; use more snapshots than sensors or a "
        "different estimator");
  }
}

double ScatterAnalysis::inverse_quadratic(const CVector& a) const {
  const RVector proj = (eig_.eigenvectors.adjoint() * a).cwiseAbs2();
  return (proj.array() / eig_.eigenvalues.array()).sum();
}

std::vector<double> ScatterAnalysis::g_trace(const std::vector<double>& grid_deg) const {
  require_invertible();
  const double lmin = eig_.min_eigenvalue();
  std::vector<double> g(grid_deg.size());
  for (std::size_t i = 0; i < grid_deg.size(); ++i) {
    g[i] = lmin * inverse_quadratic(steering_vector(geom_, grid_deg[i]));
  }
  return g;
}

GeneralizedEigPair ScatterAnalysis::min_generalized_eigpair(const CVector& a, double beta) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError("relaxation parameter beta must be positive, got " + std::to_string(beta));
  }
  if (a.size() != matrix_.rows()) {
    throw ParameterError("steering vector length does not match scatter matrix");
  }
  require_invertible();

  const Eigen::Index n = eig_.eigenvalues.size();
  const CVector c = eig_.eigenvectors.adjoint() * a;
  const RVector c2 = c.cwiseAbs2();
  const double lmin = eig_.min_eigenvalue();
  RVector gap(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gap(i) = std::max(0.0, eig_.eigenvalues(i) - lmin);
  }

  // With x = lambda beta = lmin - eta, the secular equation reads
  //   phi(eta) = sum_i |c_i|^2 (lmin - eta) / (gap_i + eta) - beta = 0,
  // phi strictly decreasing on (0, lmin], phi(lmin) = -beta.
  const auto phi = [&](double eta) {
    return ((lmin - eta) * (c2.array() / (gap.array() + eta))).sum() - beta;
  };

  CVector w(n);
  const double eta_floor = lmin * 1e-250;
  if (phi(eta_floor) <= 0.0) {
    // a has no component along the bottom eigenspace: the minimizer is u_M
    // itself with lambda = lmin / beta.
    w = eig_.min_eigenvector();
  } else {
    double lo = eta_floor;
    double hi = lmin;
    for (int it = 0; it < 400 && hi > lo; ++it) {
      const double mid = (hi > 1e3 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (phi(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double eta = 0.5 * (lo + hi);
    const CVector coeff = (c.array() / (gap.array() + eta).cast<cdouble>()).matrix();
    w = eig_.eigenvectors * coeff;
  }
  w.normalize();
  normalize_phase(w);

  const double num = (w.adjoint() * matrix_ * w)(0).real();
  const double den = std::norm(a.dot(w)) + beta;  // ||w|| == 1
  return {num / den, std::move(w)};
}

GeneralizedEigPair min_generalized_eigpair(const ScatterEstimate& r, const CVector& a, double beta) {
  ArrayGeometry geom{static_cast<std::size_t>(r.matrix.rows()), 1.0};
  return ScatterAnalysis(r, geom).min_generalized_eigpair(a, beta);
}

Spectrum capon_spectrum(const ScatterAnalysis& r, const ScanGrid& grid) {
  r.require_invertible();
  Spectrum s{grid.angles(), {}, SpectrumMethod::Capon, std::nullopt};
  s.values_db.reserve(s.grid_deg.size());
  for (double theta : s.grid_deg) {
    s.values_db.push_back(db_of_inverse(r.inverse_quadratic(steering_vector(r.geometry(), theta))));
  }
  return s;
}

Spectrum music_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, std::size_t k) {
  const auto m = static_cast<std::size_t>(r.matrix().rows());
  if (k >= m) {
    throw ParameterError("MUSIC source count " + std::to_string(k) + " must be below sensor count " +
                         std::to_string(m));
  }
  const auto noise_dim = static_cast<Eigen::Index>(m - k);
  const auto un = r.eig().eigenvectors.rightCols(noise_dim);
  Spectrum s{grid.angles(), {}, SpectrumMethod::Music, std::nullopt};
  s.values_db.reserve(s.grid_deg.size());
  for (double theta : s.grid_deg) {
    const CVector a = steering_vector(r.geometry(), theta);
    const double denom = k == 0 ? a.squaredNorm() : (un.adjoint() * a).squaredNorm();
    s.values_db.push_back(db_of_inverse(denom));
  }
  return s;
}

BetaBounds beta_bounds(const ScatterAnalysis& r, const ScanGrid& grid, std::size_t source_count) {
  const std::vector<double> angles = grid.angles();
  const std::vector<double> g = r.g_trace(angles);
  const std::size_t n = g.size();

  // Strict local minima in the grid interior, deepest first.
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (g[i] < g[i - 1] && g[i] < g[i + 1]) {
      minima.push_back(i);
    }
  }
  std::stable_sort(minima.begin(), minima.end(),
                   [&](std::size_t lhs, std::size_t rhs) { return g[lhs] < g[rhs]; });
  if (minima.size() > source_count) {
    minima.resize(source_count);
  }
  std::sort(minima.begin(), minima.end());

  // Each source estimate excludes its whole basin: the run of grid points
  // over which g keeps rising away from the minimum, up to (not including)
  // the flanking ridge.
  std::vector<bool> guarded(n, false);
  BetaBounds b;
  double bmin = 0.0;
  for (std::size_t idx : minima) {
    bmin = std::max(bmin, g[idx]);
    b.source_set_estimate.push_back(angles[idx]);
    guarded[idx] = true;
    for (std::size_t j = idx; j > 0 && g[j - 1] > g[j] && (j - 1 == 0 || g[j - 2] > g[j - 1]); --j) {
      guarded[j - 1] = true;
    }
    for (std::size_t j = idx; j + 1 < n && g[j + 1] > g[j] && (j + 2 >= n || g[j + 2] > g[j + 1]); ++j) {
      guarded[j + 1] = true;
    }
  }
  double bmax = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!guarded[i]) {
      bmax = std::min(bmax, g[i]);
    }
  }
  if (!std::isfinite(bmax)) {
    bmax = *std::max_element(g.begin(), g.end());
  }
  // Bounds equal to within rounding (flat g) count as collapsed.
  if (minima.empty() || !(bmin < bmax * (1.0 - 1e-9))) {
    bmin = 0.9 * bmax;
    b.collapsed = true;
  }
  b.beta_min = bmin;
  b.beta_max = bmax;
  b.xi = bmin / bmax;
  b.validate();
  return b;
}

double fixed_beta(const BetaBounds& b) {
  b.validate();
  const double xi = b.beta_min / b.beta_max;
  return (1.0 - xi) * b.beta_min + xi * b.beta_max;
}

std::vector<double> distance_parameter(const ScatterAnalysis& r, const ScanGrid& grid) {
  const CVector um = r.eig().min_eigenvector();
  const std::vector<double> angles = grid.angles();
  std::vector<double> xi(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double proximity = std::min(1.0, std::abs(um.dot(steering_vector(r.geometry(), angles[i]))));
    xi[i] = 1.0 - proximity;
  }
  return xi;
}

std::vector<double> directional_beta(const ScatterAnalysis& r, const BetaBounds& b,
                                     const ScanGrid& grid) {
  b.validate();
  const double spread = b.beta_max - b.beta_min;
  std::vector<double> beta = distance_parameter(r, grid);
  for (double& v : beta) {
    // v holds 1 - |u_M^H a| here.
    v = std::clamp(b.beta_max - spread * (1.0 - v), b.beta_min, b.beta_max);
  }
  return beta;
}

Spectrum music_like_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, BetaMode mode,
                             const BetaBounds& bounds) {
  Spectrum s{grid.angles(), {}, mode == BetaMode::Fixed ? SpectrumMethod::MusicLikeFixed
                                                        : SpectrumMethod::MusicLikeAdaptive,
             std::nullopt};
  std::vector<double> beta = mode == BetaMode::Fixed
                                 ? std::vector<double>(s.grid_deg.size(), fixed_beta(bounds))
                                 : directional_beta(r, bounds, grid);
  s.values_db.reserve(s.grid_deg.size());
  for (std::size_t i = 0; i < s.grid_deg.size(); ++i) {
    const CVector a = steering_vector(r.geometry(), s.grid_deg[i]);
    const GeneralizedEigPair pair = r.min_generalized_eigpair(a, beta[i]);
    s.values_db.push_back(db_of_inverse(std::norm(pair.w.dot(a))));
  }
  s.beta_trace = std::move(beta);
  return s;
}

Spectrum music_like_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, BetaMode mode,
                             std::size_t source_count) {
  return music_like_spectrum(r, grid, mode, beta_bounds(r, grid, source_count));
}

}  // namespace doalab
