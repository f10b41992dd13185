#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "doalab/rng.hpp"
#include "doalab/sas_noise.hpp"
#include "doalab/types.hpp"

namespace doalab {

/// Uniform linear array. Angles are measured from the array axis, so
/// 90 degrees is broadside and 0/180 are endfire. The first sensor is the
/// phase reference.
struct ArrayGeometry {
  std::size_t sensors = 10;
  /// Inter-element spacing in half-wavelengths.
  double spacing = 1.0;

  void validate() const;
};

struct SourceScene {
  std::vector<double> doas_deg;
  /// Mean-square power per source; empty means unit power for every source.
  std::vector<double> powers;

  [[nodiscard]] std::size_t size() const noexcept { return doas_deg.size(); }
  [[nodiscard]] double power(std::size_t k) const { return powers.empty() ? 1.0 : powers.at(k); }
  void validate() const;
};

/// Sensors x snapshots block of array data.
struct SnapshotMatrix {
  CMatrix data;

  [[nodiscard]] std::size_t sensors() const noexcept { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t snapshots() const noexcept { return static_cast<std::size_t>(data.cols()); }
};

/// Unit-norm ULA response: entry m is exp(j pi spacing m cos(theta)) / sqrt(M).
CVector steering_vector(const ArrayGeometry& geom, double theta_deg);

/// Columns are steering vectors of the given angles.
CMatrix steering_matrix(const ArrayGeometry& geom, const std::vector<double>& thetas_deg);

/// X = sqrt(M) A S + V, with A the unit-norm steering matrix, so every source
/// arrives at every sensor with its scene power and signal_power / gamma^alpha
/// is a per-sensor GSNR. Source waveforms are independent circular complex
/// Gaussian. Noise entries are i.i.d. isotropic complex SaS; pass
/// std::nullopt to synthesize noiseless data.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const SourceScene& scene,
                                    std::size_t snapshots, const std::optional<NoiseParams>& noise,
                                    RandomStream& rng);

}  // namespace doalab
