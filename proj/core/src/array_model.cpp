#include "doalab/array_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace doalab {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void ArrayGeometry::validate() const {
  if (sensors < 2) {
    throw ParameterError("array needs at least 2 sensors");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ParameterError("array spacing must be positive");
  }
}

void SourceScene::validate() const {
  if (!powers.empty() && powers.size() != doas_deg.size()) {
    throw ParameterError("scene has " + std::to_string(doas_deg.size()) + " DOAs but " +
                         std::to_string(powers.size()) + " powers");
  }
  for (std::size_t i = 0; i < doas_deg.size(); ++i) {
    const double d = doas_deg[i];
    if (!(d > 0.0 && d < 180.0)) {
      throw ParameterError("source DOA must lie strictly inside (0, 180) degrees, got " +
                           std::to_string(d));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (doas_deg[j] == d) {
        throw ParameterError("source DOAs must be pairwise distinct");
      }
    }
  }
  for (double p : powers) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ParameterError("source powers must be non-negative");
    }
  }
}

CVector steering_vector(const ArrayGeometry& geom, double theta_deg) {
  geom.validate();
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw ParameterError("look direction must lie in [0, 180] degrees, got " +
                         std::to_string(theta_deg));
  }
  const auto m = static_cast<Eigen::Index>(geom.sensors);
  const double phase_step = std::numbers::pi * geom.spacing * std::cos(theta_deg * kDegToRad);
  const double amp = 1.0 / std::sqrt(static_cast<double>(m));
  CVector a(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i) = std::polar(amp, phase_step * static_cast<double>(i));
  }
  return a;
}

CMatrix steering_matrix(const ArrayGeometry& geom, const std::vector<double>& thetas_deg) {
  CMatrix a(static_cast<Eigen::Index>(geom.sensors), static_cast<Eigen::Index>(thetas_deg.size()));
  for (std::size_t k = 0; k < thetas_deg.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = steering_vector(geom, thetas_deg[k]);
  }
  return a;
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const SourceScene& scene,
                                    std::size_t snapshots, const std::optional<NoiseParams>& noise,
                                    RandomStream& rng) {
  geom.validate();
  scene.validate();
  if (snapshots < 1) {
    throw ParameterError("at least one snapshot is required");
  }
  if (noise) {
    noise->validate();
  }
  const auto m = static_cast<Eigen::Index>(geom.sensors);
  const auto n = static_cast<Eigen::Index>(snapshots);
  const auto k = static_cast<Eigen::Index>(scene.size());

  SnapshotMatrix x{CMatrix::Zero(m, n)};
  if (k > 0) {
    const CMatrix a = steering_matrix(geom, scene.doas_deg) * std::sqrt(static_cast<double>(m));
    CMatrix s(k, n);
    // Column-major fill order: snapshot by snapshot, source by source.
    for (Eigen::Index t = 0; t < n; ++t) {
      for (Eigen::Index q = 0; q < k; ++q) {
        const double amp = std::sqrt(scene.power(static_cast<std::size_t>(q)) / 2.0);
        const double re = rng.normal();
        const double im = rng.normal();
        s(q, t) = amp * cdouble(re, im);
      }
    }
    x.data.noalias() = a * s;
  }
  if (noise) {
    const auto v = sample_complex_isotropic_sas(*noise, static_cast<std::size_t>(m * n), rng);
    x.data += Eigen::Map<const CMatrix>(v.data(), m, n);
  }
  return x;
}

}  // namespace doalab
