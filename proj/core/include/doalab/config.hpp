#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doalab/array_model.hpp"
#include "doalab/estimators.hpp"
#include "doalab/spectral.hpp"

namespace doalab {

/// A DOA method as run by the harness: a spectrum kind paired with the
/// scatter estimator that feeds it.
enum class Method { Capon, Music, FlomMusic, SscmMusic, MusicLikeFixed, MusicLikeAdaptive };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
SpectrumMethod spectrum_method(Method method);

/// Thrown for invalid configuration documents; the message names the field.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

struct ExperimentConfig {
  ArrayGeometry geometry{10, 1.0};
  double grid_step_deg = 0.5;
  SourceScene scene{{50.0, 65.0, 110.0}, {}};
  std::size_t snapshots = 100;
  std::vector<double> alphas{2.0};
  std::vector<double> gsnr_db{0.0};
  bool noise_enabled = true;
  /// Estimator used by capon, music and the MUSIC-like methods.
  EstimatorKind estimator = EstimatorKind::Sample;
  double flom_p = kDefaultFlomOrder;
  std::vector<Method> methods{Method::Music, Method::FlomMusic, Method::SscmMusic,
                              Method::MusicLikeFixed, Method::MusicLikeAdaptive};
  /// Source count given to MUSIC and to the beta-bound estimate; defaults to
  /// the scene size.
  std::optional<std::size_t> assumed_k;
  std::size_t trials = 200;
  double tol_deg = 2.0;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;

  [[nodiscard]] std::size_t source_count() const { return assumed_k.value_or(scene.size()); }
  [[nodiscard]] ScanGrid grid() const { return ScanGrid::with_step(grid_step_deg); }
  /// Mean scene power; 1 for an empty scene.
  [[nodiscard]] double signal_power() const;
  /// Estimator feeding the given method.
  [[nodiscard]] EstimatorKind estimator_for(Method method) const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// JSON echo of the effective configuration.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace doalab
