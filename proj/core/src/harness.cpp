#include "doalab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "doalab/sas_noise.hpp"

namespace doalab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kTrialDomain = 0x747269616cULL;  // "trial"

std::string fmt_double(double v, int precision = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, double alpha, double gsnr_db,
                         std::size_t trial_index) {
  return RandomStream::derive_seed(
      master_seed, {kTrialDomain, std::bit_cast<std::uint64_t>(alpha),
                    std::bit_cast<std::uint64_t>(gsnr_db), static_cast<std::uint64_t>(trial_index)});
}

SnapshotMatrix synthesize_trial(const ExperimentConfig& config, double alpha, double gsnr_db,
                                std::size_t trial_index) {
  RandomStream rng(trial_seed(config.master_seed, alpha, gsnr_db, trial_index));
  std::optional<NoiseParams> noise;
  if (config.noise_enabled) {
    noise = NoiseParams{alpha, gamma_for_gsnr(config.signal_power(), gsnr_db, alpha)};
  }
  return synthesize_snapshots(config.geometry, config.scene, config.snapshots, noise, rng);
}

std::vector<MethodSpectrum> compute_spectra(const ExperimentConfig& config, const SnapshotMatrix& x) {
  const ScanGrid grid = config.grid();
  const std::size_t k = config.source_count();

  std::map<EstimatorKind, ScatterAnalysis> analyses;
  const auto analysis_for = [&](EstimatorKind kind) -> const ScatterAnalysis& {
    auto it = analyses.find(kind);
    if (it == analyses.end()) {
      it = analyses.emplace(kind, ScatterAnalysis(estimate_scatter(x, kind, config.flom_p),
                                                  config.geometry))
               .first;
    }
    return it->second;
  };
  std::optional<BetaBounds> bounds;

  std::vector<MethodSpectrum> out;
  out.reserve(config.methods.size());
  for (Method m : config.methods) {
    const ScatterAnalysis& r = analysis_for(config.estimator_for(m));
    switch (m) {
      case Method::Capon:
        out.push_back({m, capon_spectrum(r, grid), std::nullopt});
        break;
      case Method::Music:
      case Method::FlomMusic:
      case Method::SscmMusic:
        out.push_back({m, music_spectrum(r, grid, k), std::nullopt});
        break;
      case Method::MusicLikeFixed:
      case Method::MusicLikeAdaptive: {
        if (!bounds) bounds = beta_bounds(r, grid, k);
        const BetaMode mode = m == Method::MusicLikeFixed ? BetaMode::Fixed : BetaMode::Directional;
        out.push_back({m, music_like_spectrum(r, grid, mode, *bounds), bounds});
        break;
      }
    }
  }
  return out;
}

std::vector<ResultRow> run_mc_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_methods = config.methods.size();
  const std::vector<double>& truth = config.scene.doas_deg;

  struct Cell {
    bool resolved = false;
    double rmse = 0.0;
    bool fallback = false;
  };

  std::vector<ResultRow> rows;
  for (double alpha : config.alphas) {
    for (double gsnr : config.gsnr_db) {
      // cells[trial * n_methods + method]
      std::vector<Cell> cells(config.trials * n_methods);
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_mutex;

      const auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
          try {
            const SnapshotMatrix x = synthesize_trial(config, alpha, gsnr, t);
            const auto spectra = compute_spectra(config, x);
            for (std::size_t m = 0; m < n_methods; ++m) {
              const TrialOutcome o = score_trial(spectra[m].spectrum, truth, config.tol_deg);
              Cell& c = cells[t * n_methods + m];
              c.resolved = o.resolved;
              c.rmse = o.rmse_deg.value_or(0.0);
              c.fallback = spectra[m].bounds && spectra[m].bounds->collapsed;
            }
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = config.trials;
          }
        }
      };

      const unsigned n_threads =
          static_cast<unsigned>(std::min<std::size_t>(config.threads, config.trials));
      if (n_threads <= 1) {
        worker();
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      }
      if (failure) std::rethrow_exception(failure);

      // Aggregate in trial order so sums do not depend on scheduling.
      for (std::size_t m = 0; m < n_methods; ++m) {
        ResultRow row;
        row.method = config.methods[m];
        row.alpha = alpha;
        row.gsnr_db = gsnr;
        row.trials = config.trials;
        double rmse_sum = 0.0;
        for (std::size_t t = 0; t < config.trials; ++t) {
          const Cell& c = cells[t * n_methods + m];
          if (c.resolved) {
            ++row.resolved_count;
            rmse_sum += c.rmse;
          }
          if (c.fallback) ++row.bound_fallbacks;
        }
        row.prob_resolution =
            static_cast<double>(row.resolved_count) / static_cast<double>(row.trials);
        if (row.resolved_count > 0) {
          row.mean_rmse_deg = rmse_sum / static_cast<double>(row.resolved_count);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string result_csv_header() {
  return "method,alpha,gsnr_db,trials,resolved_count,prob_resolution,mean_rmse_deg";
}

std::vector<std::string> result_rows_csv(const std::vector<ResultRow>& rows) {
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const ResultRow& r : rows) {
    std::string line = std::string(to_string(r.method));
    line += ',' + fmt_double(r.alpha) + ',' + fmt_double(r.gsnr_db) + ',' + std::to_string(r.trials) +
            ',' + std::to_string(r.resolved_count) + ',' + fmt_double(r.prob_resolution) + ',';
    if (r.mean_rmse_deg) line += fmt_double(*r.mean_rmse_deg);
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string run_manifest_json(const ExperimentConfig& config, const std::string& command,
                              double wall_seconds) {
  json manifest = {
      {"tool", "doa-lab"},
      {"command", command},
      {"schema_version", kSchemaVersion},
      {"master_seed", config.master_seed},
      {"config", json::parse(config_to_json(config))},
      {"wall_time_s", wall_seconds},
      {"timestamp_utc", utc_timestamp()},
  };
  return manifest.dump(2) + "\n";
}

SweepFiles write_mc_sweep(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                          const fs::path& out_dir, double wall_seconds) {
  ensure_dir(out_dir);
  SweepFiles files{out_dir / "results.csv", out_dir / "results.json", out_dir / "manifest.json", {}};

  std::string csv = std::string(kSchemaLine) + "\n" + result_csv_header() + "\n";
  for (const auto& line : result_rows_csv(rows)) csv += line + "\n";
  write_file(files.results_csv, csv);

  json jrows = json::array();
  for (const ResultRow& r : rows) {
    jrows.push_back({{"method", std::string(to_string(r.method))},
                     {"alpha", r.alpha},
                     {"gsnr_db", r.gsnr_db},
                     {"trials", r.trials},
                     {"resolved_count", r.resolved_count},
                     {"prob_resolution", r.prob_resolution},
                     {"mean_rmse_deg", r.mean_rmse_deg ? json(*r.mean_rmse_deg) : json(nullptr)},
                     {"bound_fallbacks", r.bound_fallbacks}});
  }
  json results = {
      {"schema_version", kSchemaVersion},
      {"rmse_convention", "mean over resolved trials of the per-trial RMSE in degrees"},
      {"resolution_tol_deg", config.tol_deg},
      {"rows", jrows},
  };
  write_file(files.results_json, results.dump(2) + "\n");
  write_file(files.manifest_json, run_manifest_json(config, "mc-sweep", wall_seconds));

  // Wide curve files per alpha: one row per GSNR, one column per method.
  for (double alpha : config.alphas) {
    for (const char* metric : {"prob_resolution", "rmse"}) {
      const bool prob = std::string_view(metric) == "prob_resolution";
      std::string body = std::string(kSchemaLine) + "\ngsnr_db";
      for (Method m : config.methods) body += ',' + std::string(to_string(m));
      body += '\n';
      for (double gsnr : config.gsnr_db) {
        body += fmt_double(gsnr);
        for (Method m : config.methods) {
          body += ',';
          auto it = std::find_if(rows.begin(), rows.end(), [&](const ResultRow& r) {
            return r.method == m && r.alpha == alpha && r.gsnr_db == gsnr;
          });
          if (it == rows.end()) continue;
          if (prob) {
            body += fmt_double(it->prob_resolution);
          } else if (it->mean_rmse_deg) {
            body += fmt_double(*it->mean_rmse_deg);
          }
        }
        body += '\n';
      }
      const fs::path p = out_dir / (std::string(metric) + "_alpha_" + fmt_fixed(alpha, 2) + ".csv");
      write_file(p, body);
      files.curve_files.push_back(p);
    }
  }
  return files;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string body = std::string(kSchemaLine) + "\nangle_deg,value_db,beta\n";
  for (std::size_t i = 0; i < s.grid_deg.size(); ++i) {
    body += fmt_double(s.grid_deg[i]) + ',' + fmt_double(s.values_db[i]) + ',';
    if (s.beta_trace) body += fmt_double((*s.beta_trace)[i]);
    body += '\n';
  }
  return body;
}

std::vector<fs::path> run_spectrum(const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SnapshotMatrix x = synthesize_trial(config, config.alphas.front(), config.gsnr_db.front(), 0);
  const auto spectra = compute_spectra(config, x);
  ensure_dir(out_dir);
  std::vector<fs::path> paths;
  for (const MethodSpectrum& ms : spectra) {
    const fs::path p = out_dir / ("spectrum_" + std::string(to_string(ms.method)) + ".csv");
    write_file(p, spectrum_csv(ms.spectrum));
    paths.push_back(p);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(out_dir / "manifest.json", run_manifest_json(config, "spectrum", wall));
  return paths;
}

namespace {

std::vector<EcfPoint> ecf_points(const std::vector<double>& samples, double alpha, double gamma) {
  // Probe t where the theoretical ECF spans roughly 0.97 down to 0.02.
  const double scale = std::pow(gamma, 1.0 / alpha);
  std::vector<EcfPoint> pts;
  for (double c : {0.2, 0.5, 1.0, 1.5, 2.0}) {
    const double t = c / scale;
    double re = 0.0;
    double im = 0.0;
    for (double x : samples) {
      re += std::cos(t * x);
      im += std::sin(t * x);
    }
    const double n = static_cast<double>(samples.size());
    EcfPoint p;
    p.t = t;
    p.ecf_abs = samples.empty() ? 0.0 : std::hypot(re / n, im / n);
    p.theory = std::exp(-gamma * std::pow(std::abs(t), alpha));
    p.abs_error = std::abs(p.ecf_abs - p.theory);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

NoiseValidation run_noise_validate(double alpha, double gamma, std::size_t n, std::uint64_t seed) {
  const NoiseParams params{alpha, gamma};
  params.validate();
  NoiseValidation v;
  v.alpha = alpha;
  v.gamma = gamma;
  v.n = n;
  v.seed = seed;
  v.band = n > 0 ? 4.0 / std::sqrt(static_cast<double>(n)) : 0.0;

  const RandomStream root(seed);
  RandomStream real_rng = root.derive({1});
  RandomStream complex_rng = root.derive({2});
  const std::vector<double> real = sample_real_sas(params, n, real_rng);
  const std::vector<cdouble> cplx = sample_complex_isotropic_sas(params, n, complex_rng);
  std::vector<double> marginal(cplx.size());
  std::transform(cplx.begin(), cplx.end(), marginal.begin(), [](cdouble z) { return z.real(); });

  v.real_ecf = ecf_points(real, alpha, gamma);
  v.complex_marginal_ecf = ecf_points(marginal, alpha, marginal_gamma(params));
  v.preview.assign(marginal.begin(), marginal.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(200, n)));
  for (double x : real) v.max_abs_real = std::max(v.max_abs_real, std::abs(x));
  if (n > 1) {
    double mean = 0.0;
    for (double x : real) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : real) ss += (x - mean) * (x - mean);
    v.sample_variance = ss / static_cast<double>(n - 1);
  }

  if (n < kMinEcfSamples) {
    v.band_checked = false;
    v.pass = false;
    v.warning = "only " + std::to_string(n) + " samples; ECF band check needs at least " +
                std::to_string(kMinEcfSamples);
    return v;
  }
  v.band_checked = true;
  v.pass = true;
  for (const auto* pts : {&v.real_ecf, &v.complex_marginal_ecf}) {
    for (const EcfPoint& p : *pts) {
      if (p.abs_error > v.band) v.pass = false;
    }
  }
  return v;
}

std::vector<fs::path> write_noise_validate(const NoiseValidation& v, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::string ecf = std::string(kSchemaLine) + "\nsampler,t,ecf_abs,theory,abs_error\n";
  const auto emit = [&](const char* name, const std::vector<EcfPoint>& pts) {
    for (const EcfPoint& p : pts) {
      ecf += std::string(name) + ',' + fmt_double(p.t) + ',' + fmt_double(p.ecf_abs) + ',' +
             fmt_double(p.theory) + ',' + fmt_double(p.abs_error) + '\n';
    }
  };
  emit("real", v.real_ecf);
  emit("complex_real_part", v.complex_marginal_ecf);

  std::string preview = std::string(kSchemaLine) + "\nindex,real_part\n";
  for (std::size_t i = 0; i < v.preview.size(); ++i) {
    preview += std::to_string(i) + ',' + fmt_double(v.preview[i]) + '\n';
  }

  json summary = {
      {"schema_version", kSchemaVersion},
      {"alpha", v.alpha},
      {"gamma", v.gamma},
      {"marginal_gamma", marginal_gamma(NoiseParams{v.alpha, v.gamma})},
      {"n", v.n},
      {"seed", v.seed},
      {"band", v.band},
      {"band_checked", v.band_checked},
      {"pass", v.pass},
      {"max_abs_real", v.max_abs_real},
      {"sample_variance", v.sample_variance},
      {"warning", v.warning ? json(*v.warning) : json(nullptr)},
  };
  const std::vector<fs::path> paths{out_dir / "ecf.csv", out_dir / "noise_preview.csv",
                                    out_dir / "noise_summary.json"};
  write_file(paths[0], ecf);
  write_file(paths[1], preview);
  write_file(paths[2], summary.dump(2) + "\n");
  return paths;
}

BetaTrace run_beta_trace(const ExperimentConfig& config) {
  config.validate();
  const ScanGrid grid = config.grid();
  const std::size_t k = config.source_count();
  const double alpha = config.alphas.front();

  const auto analysis_at = [&](double gsnr) {
    const SnapshotMatrix x = synthesize_trial(config, alpha, gsnr, 0);
    return ScatterAnalysis(estimate_scatter(x, config.estimator, config.flom_p), config.geometry);
  };

  BetaTrace trace;
  const ScatterAnalysis r = analysis_at(config.gsnr_db.front());
  trace.bounds = beta_bounds(r, grid, k);
  const double fixed = fixed_beta(trace.bounds);
  const std::vector<double> angles = grid.angles();
  const std::vector<double> g = r.g_trace(angles);
  const std::vector<double> beta = directional_beta(r, trace.bounds, grid);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    trace.points.push_back({angles[i], beta[i], fixed, g[i]});
  }
  for (double gsnr : config.gsnr_db) {
    const ScatterAnalysis ri = analysis_at(gsnr);
    BetaVersusGsnr entry{gsnr, beta_bounds(ri, grid, k), 0.0};
    entry.beta_fixed = fixed_beta(entry.bounds);
    trace.versus_gsnr.push_back(entry);
  }
  return trace;
}

std::vector<fs::path> write_beta_trace(const ExperimentConfig& config, const BetaTrace& trace,
                                       const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::string body = std::string(kSchemaLine) + "\nangle_deg,beta_theta,beta_fixed,g_theta\n";
  for (const BetaTracePoint& p : trace.points) {
    body += fmt_double(p.angle_deg) + ',' + fmt_double(p.beta_theta) + ',' +
            fmt_double(p.beta_fixed) + ',' + fmt_double(p.g_theta) + '\n';
  }
  std::string vs = std::string(kSchemaLine) + "\ngsnr_db,beta_min,beta_max,xi,beta_fixed,collapsed\n";
  for (const BetaVersusGsnr& e : trace.versus_gsnr) {
    vs += fmt_double(e.gsnr_db) + ',' + fmt_double(e.bounds.beta_min) + ',' +
          fmt_double(e.bounds.beta_max) + ',' + fmt_double(e.bounds.xi) + ',' +
          fmt_double(e.beta_fixed) + ',' + (e.bounds.collapsed ? "1" : "0") + '\n';
  }
  const std::vector<fs::path> paths{out_dir / "beta_trace.csv", out_dir / "beta_vs_gsnr.csv",
                                    out_dir / "manifest.json"};
  write_file(paths[0], body);
  write_file(paths[1], vs);
  write_file(paths[2], run_manifest_json(config, "beta-trace", 0.0));
  return paths;
}

}  // namespace doalab
