#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doalab/harness.hpp"

using namespace doalab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("doalab_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_sweep() {
  ExperimentConfig c;
  c.scene = {{50.0, 65.0, 110.0}, {}};
  c.alphas = {2.0, 1.8};
  c.gsnr_db = {-4.0, 4.0};
  c.methods = {Method::Music, Method::SscmMusic, Method::MusicLikeAdaptive};
  c.trials = 6;
  c.master_seed = 2024;
  return c;
}

bool same_rows(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  return result_rows_csv(a) == result_rows_csv(b);
}

}  // namespace

TEST_CASE("trial seeds separate every coordinate") {
  const auto s = trial_seed(1, 2.0, 0.0, 0);
  CHECK(s == trial_seed(1, 2.0, 0.0, 0));
  CHECK(s != trial_seed(2, 2.0, 0.0, 0));
  CHECK(s != trial_seed(1, 1.9, 0.0, 0));
  CHECK(s != trial_seed(1, 2.0, 2.0, 0));
  CHECK(s != trial_seed(1, 2.0, 0.0, 1));
}

TEST_CASE("every method of a trial sees the same snapshots") {
  ExperimentConfig a = small_sweep();
  ExperimentConfig b = a;
  b.methods = {Method::Capon};
  CHECK(synthesize_trial(a, 1.8, -4.0, 3).data == synthesize_trial(b, 1.8, -4.0, 3).data);
}

TEST_CASE("sweep rows are ordered and arithmetically consistent") {
  const ExperimentConfig c = small_sweep();
  const auto rows = run_mc_sweep(c);
  REQUIRE(rows.size() == 2 * 2 * 3);
  std::size_t i = 0;
  for (double alpha : c.alphas) {
    for (double gsnr : c.gsnr_db) {
      for (Method m : c.methods) {
        CHECK(rows[i].alpha == alpha);
        CHECK(rows[i].gsnr_db == gsnr);
        CHECK(rows[i].method == m);
        CHECK(rows[i].trials == c.trials);
        CHECK(rows[i].prob_resolution ==
              static_cast<double>(rows[i].resolved_count) / static_cast<double>(c.trials));
        CHECK(rows[i].mean_rmse_deg.has_value() == (rows[i].resolved_count > 0));
        if (rows[i].method != Method::MusicLikeAdaptive) CHECK(rows[i].bound_fallbacks == 0);
        ++i;
      }
    }
  }
}

TEST_CASE("a single trial resolves or it does not") {
  ExperimentConfig c = small_sweep();
  c.trials = 1;
  for (const ResultRow& r : run_mc_sweep(c)) {
    CHECK((r.prob_resolution == 0.0 || r.prob_resolution == 1.0));
  }
}

TEST_CASE("thread count does not change results") {
  ExperimentConfig c = small_sweep();
  const auto serial = run_mc_sweep(c);
  c.threads = 4;
  CHECK(same_rows(run_mc_sweep(c), serial));
}

TEST_CASE("split sweeps concatenate to the full sweep") {
  const ExperimentConfig full = small_sweep();
  ExperimentConfig first = full;
  ExperimentConfig second = full;
  first.alphas = {full.alphas[0]};
  second.alphas = {full.alphas[1]};
  auto joined = run_mc_sweep(first);
  const auto tail = run_mc_sweep(second);
  joined.insert(joined.end(), tail.begin(), tail.end());
  CHECK(same_rows(joined, run_mc_sweep(full)));
}

TEST_CASE("sweep files") {
  const ExperimentConfig c = small_sweep();
  const auto rows = run_mc_sweep(c);
  const fs::path dir = scratch("sweep");
  const SweepFiles f = write_mc_sweep(c, rows, dir, 0.5);
  const std::string csv = slurp(f.results_csv);
  CHECK(csv.rfind(std::string(kSchemaLine) + "\n" + result_csv_header() + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size() + 2));
  CHECK(f.curve_files.size() == 4);
  CHECK(fs::exists(dir / "prob_resolution_alpha_1.80.csv"));
  CHECK(fs::exists(dir / "rmse_alpha_2.00.csv"));
  CHECK(slurp(f.results_json).find("resolved trials") != std::string::npos);
  const std::string manifest = slurp(f.manifest_json);
  CHECK(manifest.find("\"schema_version\": 1") != std::string::npos);
  CHECK(manifest.find("\"master_seed\": 2024") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("spectrum files for the five-method comparison") {
  ExperimentConfig c;
  c.scene = {{50.0, 60.0, 110.0}, {}};
  c.alphas = {1.8};
  c.gsnr_db = {-2.0};
  const fs::path d1 = scratch("spectrum_a");
  const fs::path d2 = scratch("spectrum_b");
  const auto p1 = run_spectrum(c, d1);
  const auto p2 = run_spectrum(c, d2);
  REQUIRE(p1.size() == 5);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(slurp(p1[i]) == slurp(p2[i]));
  }
  const std::string adaptive = slurp(d1 / "spectrum_music_like_adaptive.csv");
  CHECK(adaptive.rfind(std::string(kSchemaLine) + "\nangle_deg,value_db,beta\n", 0) == 0);
  const std::string music = slurp(d1 / "spectrum_music.csv");
  CHECK(music.find(",\n") != std::string::npos);  // blank beta column
  CHECK(fs::exists(d1 / "manifest.json"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("empty scene gives a flat MUSIC spectrum") {
  ExperimentConfig c;
  c.scene = {};
  c.assumed_k = 0;
  c.methods = {Method::Music};
  const SnapshotMatrix x = synthesize_trial(c, 2.0, 0.0, 0);
  const auto spectra = compute_spectra(c, x);
  REQUIRE(spectra.size() == 1);
  for (double v : spectra[0].spectrum.values_db) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("noise validation") {
  const NoiseValidation g = run_noise_validate(2.0, 0.5, 100000, 7);
  CHECK(g.band_checked);
  CHECK(g.pass);
  CHECK(g.band == doctest::Approx(4.0 / std::sqrt(1e5)));
  CHECK(g.real_ecf.size() == 5);
  CHECK(g.preview.size() == 200);
  for (const EcfPoint& p : g.real_ecf) CHECK(p.abs_error <= g.band);
  CHECK(std::abs(g.sample_variance - 1.0) < 3.0 * std::sqrt(2.0 / 1e5));

  const NoiseValidation heavy = run_noise_validate(1.7, 0.5, 100000, 7);
  CHECK(heavy.pass);
  CHECK(heavy.max_abs_real > g.max_abs_real);

  const NoiseValidation tiny = run_noise_validate(1.7, 0.5, 10, 7);
  CHECK_FALSE(tiny.band_checked);
  CHECK(tiny.warning.has_value());
  CHECK(tiny.preview.size() == 10);

  CHECK_THROWS_AS(run_noise_validate(2.5, 0.5, 100, 7), ParameterError);

  const fs::path dir = scratch("noise");
  const auto paths = write_noise_validate(g, dir);
  CHECK(paths.size() == 3);
  CHECK(slurp(dir / "ecf.csv").find("sampler,t,ecf_abs,theory,abs_error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("beta trace on the two-source scenario") {
  ExperimentConfig c;
  c.scene = {{50.0, 110.0}, {}};
  c.snapshots = 200;
  c.alphas = {2.0};
  c.gsnr_db = {-5.0, 0.0, 5.0};
  const BetaTrace t = run_beta_trace(c);
  CHECK(t.bounds.beta_min < t.bounds.beta_max);
  REQUIRE_FALSE(t.points.empty());
  for (const BetaTracePoint& p : t.points) {
    CHECK(p.beta_theta >= t.bounds.beta_min);
    CHECK(p.beta_theta <= t.bounds.beta_max);
    CHECK(p.beta_fixed == t.points.front().beta_fixed);
    CHECK(p.g_theta > 0.0);
  }
  CHECK(t.versus_gsnr.size() == 3);

  const fs::path dir = scratch("beta");
  const auto paths = write_beta_trace(c, t, dir);
  CHECK(slurp(paths[0]).find("angle_deg,beta_theta,beta_fixed,g_theta") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("noise-only beta trace falls back to near-flat bounds") {
  ExperimentConfig c;
  c.scene = {};
  c.alphas = {2.0};
  c.gsnr_db = {0.0};
  const BetaTrace t = run_beta_trace(c);
  CHECK(t.bounds.collapsed);
  for (const BetaTracePoint& p : t.points) {
    CHECK(p.beta_theta >= 0.9 * t.bounds.beta_max * (1.0 - 1e-12));
    CHECK(p.beta_theta <= t.bounds.beta_max);
  }
}
