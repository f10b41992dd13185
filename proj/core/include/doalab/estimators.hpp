#pragma once

#include <optional>
#include <string_view>

#include "doalab/array_model.hpp"
#include "doalab/types.hpp"

namespace doalab {

enum class EstimatorKind { Sample, Flom, Sscm };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

/// Hermitian M x M scatter matrix tagged with the estimator that produced it.
struct ScatterEstimate {
  CMatrix matrix;
  EstimatorKind kind = EstimatorKind::Sample;
  /// Set iff kind == Flom.
  std::optional<double> flom_order;

  [[nodiscard]] Eigen::Index dim() const noexcept { return matrix.rows(); }
};

/// Default FLOM order.
inline constexpr double kDefaultFlomOrder = 1.1;

/// (1/n) X X^H.
ScatterEstimate sample_covariance(const SnapshotMatrix& x);

/// Fractional lower-order moment matrix,
///   C_ik = mean_t x_i(t) |x_k(t)|^(p-2) conj(x_k(t)),
/// stored as (C + C^H) / 2. A zero x_k(t) contributes nothing to column k.
/// Requires 1 < p <= 2.
ScatterEstimate flom_matrix(const SnapshotMatrix& x, double p);

/// FLOM matrix before Hermitian symmetrization.
CMatrix flom_matrix_raw(const SnapshotMatrix& x, double p);

/// Spatial sign covariance: mean of u u^H with u = x(t) / |x(t)|.
/// All-zero snapshots are skipped and do not count toward the mean.
ScatterEstimate sscm(const SnapshotMatrix& x);

ScatterEstimate estimate_scatter(const SnapshotMatrix& x, EstimatorKind kind,
                                 double flom_order = kDefaultFlomOrder);

}  // namespace doalab
