#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "doalab/config.hpp"
#include "doalab/metrics.hpp"
#include "doalab/spectral.hpp"

namespace doalab {

inline constexpr const char* kSchemaLine = "# doa-lab schema v1";
inline constexpr int kSchemaVersion = 1;

/// Seed for the data of one trial. Methods do not enter the derivation, so
/// every method of a sweep point sees the same snapshots.
std::uint64_t trial_seed(std::uint64_t master_seed, double alpha, double gsnr_db,
                         std::size_t trial_index);

/// Snapshots for one trial of one (alpha, gsnr) point.
SnapshotMatrix synthesize_trial(const ExperimentConfig& config, double alpha, double gsnr_db,
                                std::size_t trial_index);

struct MethodSpectrum {
  Method method;
  Spectrum spectrum;
  /// Set for the MUSIC-like methods.
  std::optional<BetaBounds> bounds;
};

/// Every configured method evaluated on the same snapshot block.
std::vector<MethodSpectrum> compute_spectra(const ExperimentConfig& config, const SnapshotMatrix& x);

struct ResultRow {
  Method method = Method::Music;
  double alpha = 2.0;
  double gsnr_db = 0.0;
  std::size_t trials = 0;
  std::size_t resolved_count = 0;
  double prob_resolution = 0.0;
  /// Mean over resolved trials of the per-trial RMSE; absent if none resolved.
  std::optional<double> mean_rmse_deg;
  /// Trials whose beta bounds needed the collapse fallback (MUSIC-like only).
  std::size_t bound_fallbacks = 0;
};

/// Rows ordered alpha-major, then GSNR, then the configured method order.
std::vector<ResultRow> run_mc_sweep(const ExperimentConfig& config);

/// CSV body lines (no schema or header line) for the given rows.
std::vector<std::string> result_rows_csv(const std::vector<ResultRow>& rows);
std::string result_csv_header();

struct SweepFiles {
  std::filesystem::path results_csv;
  std::filesystem::path results_json;
  std::filesystem::path manifest_json;
  std::vector<std::filesystem::path> curve_files;
};

SweepFiles write_mc_sweep(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                          const std::filesystem::path& out_dir, double wall_seconds);

/// Spectra of trial 0 at the first (alpha, gsnr) point; one CSV per method
/// named spectrum_<method>.csv with columns angle_deg,value_db,beta.
std::vector<std::filesystem::path> run_spectrum(const ExperimentConfig& config,
                                                const std::filesystem::path& out_dir);

std::string spectrum_csv(const Spectrum& s);

struct EcfPoint {
  double t = 0.0;
  double ecf_abs = 0.0;
  double theory = 0.0;
  double abs_error = 0.0;
};

struct NoiseValidation {
  double alpha = 2.0;
  double gamma = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// 4 / sqrt(n).
  double band = 0.0;
  /// False when n is too small for the band check; a warning is set instead.
  bool band_checked = false;
  bool pass = false;
  std::optional<std::string> warning;
  /// Real SaS sampler against exp(-gamma |t|^alpha).
  std::vector<EcfPoint> real_ecf;
  /// Real part of the complex isotropic sampler against its marginal law.
  std::vector<EcfPoint> complex_marginal_ecf;
  /// First samples of the real part of the complex noise.
  std::vector<double> preview;
  double max_abs_real = 0.0;
  /// Sample variance of the real sampler, and 2 gamma at alpha = 2.
  double sample_variance = 0.0;
};

/// Minimum sample count for which the ECF band is checked.
inline constexpr std::size_t kMinEcfSamples = 1000;

NoiseValidation run_noise_validate(double alpha, double gamma, std::size_t n, std::uint64_t seed);
std::vector<std::filesystem::path> write_noise_validate(const NoiseValidation& v,
                                                        const std::filesystem::path& out_dir);

struct BetaTracePoint {
  double angle_deg = 0.0;
  double beta_theta = 0.0;
  double beta_fixed = 0.0;
  double g_theta = 0.0;
};

struct BetaVersusGsnr {
  double gsnr_db = 0.0;
  BetaBounds bounds;
  double beta_fixed = 0.0;
};

struct BetaTrace {
  BetaBounds bounds;
  std::vector<BetaTracePoint> points;
  /// One entry per configured GSNR value, all at the first alpha.
  std::vector<BetaVersusGsnr> versus_gsnr;
};

/// Trace at the first (alpha, gsnr) point, trial 0.
BetaTrace run_beta_trace(const ExperimentConfig& config);
std::vector<std::filesystem::path> write_beta_trace(const ExperimentConfig& config,
                                                    const BetaTrace& trace,
                                                    const std::filesystem::path& out_dir);

/// Run manifest: config echo, seed, schema version, wall time and a timestamp.
std::string run_manifest_json(const ExperimentConfig& config, const std::string& command,
                              double wall_seconds);

}  // namespace doalab
