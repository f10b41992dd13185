#include "doalab/estimators.hpp"

#include <cmath>
#include <string>

namespace doalab {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Sample:
      return "sample";
    case EstimatorKind::Flom:
      return "flom";
    case EstimatorKind::Sscm:
      return "sscm";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "sample") return EstimatorKind::Sample;
  if (name == "flom") return EstimatorKind::Flom;
  if (name == "sscm") return EstimatorKind::Sscm;
  throw ParameterError("unknown estimator '" + std::string(name) + "' (expected sample|flom|sscm)");
}

namespace {

void require_snapshots(const SnapshotMatrix& x) {
  if (x.data.cols() < 1 || x.data.rows() < 1) {
    throw ParameterError("scatter estimation needs at least one snapshot");
  }
}

}  // namespace

ScatterEstimate sample_covariance(const SnapshotMatrix& x) {
  require_snapshots(x);
  const double inv_n = 1.0 / static_cast<double>(x.data.cols());
  CMatrix r = (x.data * x.data.adjoint()) * inv_n;
  return {std::move(r), EstimatorKind::Sample, std::nullopt};
}

CMatrix flom_matrix_raw(const SnapshotMatrix& x, double p) {
  require_snapshots(x);
  if (!(p > 1.0 && p <= 2.0)) {
    throw ParameterError("FLOM order p must satisfy 1 < p <= 2, got " + std::to_string(p));
  }
  // Column k of the product sees x_k weighted by |x_k|^(p-2).
  CMatrix weighted(x.data.rows(), x.data.cols());
  for (Eigen::Index t = 0; t < x.data.cols(); ++t) {
    for (Eigen::Index k = 0; k < x.data.rows(); ++k) {
      const cdouble v = x.data(k, t);
      const double mag = std::abs(v);
      if (p == 2.0) {
        weighted(k, t) = v;
      } else {
        weighted(k, t) = mag > 0.0 ? v * std::pow(mag, p - 2.0) : cdouble(0.0, 0.0);
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(x.data.cols());
  return (x.data * weighted.adjoint()) * inv_n;
}

ScatterEstimate flom_matrix(const SnapshotMatrix& x, double p) {
  const CMatrix c = flom_matrix_raw(x, p);
  CMatrix sym = (c + c.adjoint()) * 0.5;
  return {std::move(sym), EstimatorKind::Flom, p};
}

ScatterEstimate sscm(const SnapshotMatrix& x) {
  require_snapshots(x);
  CMatrix normalized(x.data.rows(), x.data.cols());
  Eigen::Index used = 0;
  for (Eigen::Index t = 0; t < x.data.cols(); ++t) {
    const double norm = x.data.col(t).norm();
    if (norm > 0.0) {
      normalized.col(used++) = x.data.col(t) / norm;
    }
  }
  if (used == 0) {
    throw DegenerateInputError("SSCM undefined: every snapshot is identically zero");
  }
  const auto u = normalized.leftCols(used);
  CMatrix r = (u * u.adjoint()) / static_cast<double>(used);
  return {std::move(r), EstimatorKind::Sscm, std::nullopt};
}

ScatterEstimate estimate_scatter(const SnapshotMatrix& x, EstimatorKind kind, double flom_order) {
  switch (kind) {
    case EstimatorKind::Sample:
      return sample_covariance(x);
    case EstimatorKind::Flom:
      return flom_matrix(x, flom_order);
    case EstimatorKind::Sscm:
      return sscm(x);
  }
  throw ParameterError("unknown estimator kind");
}

}  // namespace doalab
