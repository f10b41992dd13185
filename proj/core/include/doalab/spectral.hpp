#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "doalab/array_model.hpp"
#include "doalab/estimators.hpp"
#include "doalab/types.hpp"

namespace doalab {

/// Uniform scan grid in degrees, inclusive of both ends.
struct ScanGrid {
  double start_deg = 0.5;
  double stop_deg = 179.5;
  double step_deg = 0.5;

  /// Default grid with the given step: (step, 180 - step).
  static ScanGrid with_step(double step_deg);

  void validate() const;
  [[nodiscard]] std::vector<double> angles() const;
  [[nodiscard]] std::size_t size() const;
};

enum class SpectrumMethod { Capon, Music, MusicLikeFixed, MusicLikeAdaptive };

std::string_view to_string(SpectrumMethod method);

struct Spectrum {
  std::vector<double> grid_deg;
  std::vector<double> values_db;
  SpectrumMethod method = SpectrumMethod::Music;
  /// Per-angle relaxation parameter; present iff method is MusicLike*.
  std::optional<std::vector<double>> beta_trace;
};

/// Eigenvalues descending, eigenvectors as matching orthonormal columns with
/// their largest-magnitude entry rotated to be real and positive.
struct EigenDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  [[nodiscard]] double min_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  [[nodiscard]] CVector min_eigenvector() const {
    return eigenvectors.col(eigenvectors.cols() - 1);
  }
};

/// Relaxation-parameter interval estimated from g(theta) = lambda_min a^H R^-1 a.
struct BetaBounds {
  double beta_min = 0.0;
  double beta_max = 0.0;
  /// beta_min / beta_max.
  double xi = 0.0;
  /// Grid angles taken as the source set when forming the bounds.
  std::vector<double> source_set_estimate;
  /// True when the raw estimate had beta_min >= beta_max and was replaced by
  /// beta_min = 0.9 beta_max.
  bool collapsed = false;

  /// Builds bounds from the two endpoints, with xi derived.
  static BetaBounds from_endpoints(double beta_min, double beta_max);
  void validate() const;
};

struct GeneralizedEigPair {
  double lambda = 0.0;
  /// Unit norm, phase-normalized.
  CVector w;
};

enum class BetaMode { Fixed, Directional };

/// Rotates v so its largest-magnitude entry is real and positive.
void normalize_phase(CVector& v);

EigenDecomposition hermitian_eig(const ScatterEstimate& r);

/// Eigendecomposition and inverse-related quantities of one scatter matrix,
/// shared by every look direction of every spectrum computed from it.
class ScatterAnalysis {
 public:
  ScatterAnalysis(const ScatterEstimate& r, const ArrayGeometry& geom);

  [[nodiscard]] const EigenDecomposition& eig() const noexcept { return eig_; }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] const ArrayGeometry& geometry() const noexcept { return geom_; }
  [[nodiscard]] double norm() const noexcept { return norm_; }

  /// Throws DegenerateInputError unless lambda_min > 1e-12 lambda_max.
  void require_invertible() const;

  /// a^H R^-1 a.
  [[nodiscard]] double inverse_quadratic(const CVector& a) const;

  /// Smallest eigenvalue of R w = lambda (a a^H + beta I) w.
  ///
  /// Works in the eigenbasis of R: with c = U^H a the minimizer is
  /// w ~ (R - lambda beta I)^-1 a, and lambda solves the secular equation
  ///   sum_i |c_i|^2 lambda / (lambda_i - lambda beta) = 1
  /// on (0, lambda_min / beta). Cost is O(M^2) per call.
  [[nodiscard]] GeneralizedEigPair min_generalized_eigpair(const CVector& a, double beta) const;

  [[nodiscard]] std::vector<double> g_trace(const std::vector<double>& grid_deg) const;

 private:
  CMatrix matrix_;
  ArrayGeometry geom_;
  EigenDecomposition eig_;
  double norm_ = 0.0;
};

Spectrum capon_spectrum(const ScatterAnalysis& r, const ScanGrid& grid);

/// k is the assumed number of sources; the noise subspace is spanned by the
/// trailing M - k eigenvectors.
Spectrum music_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, std::size_t k);

GeneralizedEigPair min_generalized_eigpair(const ScatterEstimate& r, const CVector& a, double beta);

/// The source_count deepest strict local minima of g(theta) form the source
/// set; beta_min is the largest g over that set. beta_max is the smallest g
/// outside the basins of those minima, a basin being the run of grid points
/// over which g rises monotonically away from its minimum.
BetaBounds beta_bounds(const ScatterAnalysis& r, const ScanGrid& grid, std::size_t source_count);

/// (1 - xi) beta_min + xi beta_max with xi = beta_min / beta_max.
double fixed_beta(const BetaBounds& b);

/// beta_max - (beta_max - beta_min) |u_M^H a(theta)| per grid angle.
std::vector<double> directional_beta(const ScatterAnalysis& r, const BetaBounds& b,
                                     const ScanGrid& grid);

/// 1 - |u_M^H a(theta)| per grid angle.
std::vector<double> distance_parameter(const ScatterAnalysis& r, const ScanGrid& grid);

/// Spectra are capped at this value where |w^H a|^2 underflows.
inline constexpr double kSpectrumCapDb = 140.0;

Spectrum music_like_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, BetaMode mode,
                             const BetaBounds& bounds);

/// Convenience overload that estimates the bounds with source_count minima.
Spectrum music_like_spectrum(const ScatterAnalysis& r, const ScanGrid& grid, BetaMode mode,
                             std::size_t source_count);

}  // namespace doalab
