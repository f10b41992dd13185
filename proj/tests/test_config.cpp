#include <doctest.h>

#include <string>

#include "doalab/config.hpp"

using namespace doalab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty document yields defaults") {
  const ExperimentConfig c = parse_config("{}");
  CHECK(c.geometry.sensors == 10);
  CHECK(c.scene.doas_deg == std::vector<double>{50, 65, 110});
  CHECK(c.snapshots == 100);
  CHECK(c.trials == 200);
  CHECK(c.tol_deg == 2.0);
  CHECK(c.flom_p == 1.1);
  CHECK(c.source_count() == 3);
  CHECK(c.estimator_for(Method::Music) == EstimatorKind::Sample);
  CHECK(c.estimator_for(Method::FlomMusic) == EstimatorKind::Flom);
  CHECK(c.estimator_for(Method::SscmMusic) == EstimatorKind::Sscm);
  CHECK(c.estimator_for(Method::MusicLikeAdaptive) == EstimatorKind::Sample);
}

TEST_CASE("full document parses") {
  const ExperimentConfig c = parse_config(R"({
    "array": {"sensors": 8, "spacing": 1.0},
    "grid": {"step_deg": 0.25},
    "scene": {"doas_deg": [40, 70], "powers": [1.0, 2.0]},
    "snapshots": 64,
    "noise": {"alpha": [1.8, 2.0], "gsnr_db": [-4, 0, 4], "enabled": true},
    "estimator": {"kind": "sscm", "flom_p": 1.3},
    "methods": ["capon", "music", "music_like_adaptive"],
    "assumed_k": 2,
    "monte_carlo": {"trials": 10, "tol_deg": 1.5, "seed": 42},
    "threads": 3
  })");
  CHECK(c.geometry.sensors == 8);
  CHECK(c.grid().size() == 719);
  CHECK(c.scene.power(1) == 2.0);
  CHECK(c.signal_power() == 1.5);
  CHECK(c.alphas.size() == 2);
  CHECK(c.gsnr_db.size() == 3);
  CHECK(c.estimator == EstimatorKind::Sscm);
  CHECK(c.flom_p == 1.3);
  REQUIRE(c.methods.size() == 3);
  CHECK(c.methods[0] == Method::Capon);
  CHECK(c.assumed_k == 2u);
  CHECK(c.trials == 10);
  CHECK(c.master_seed == 42);
  CHECK(c.threads == 3);
}

TEST_CASE("echo round-trips") {
  ExperimentConfig c;
  c.alphas = {1.7, 1.9};
  c.gsnr_db = {-10, 10};
  c.assumed_k = 2;
  c.master_seed = 0xfeedULL;
  const ExperimentConfig back = parse_config(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.master_seed == 0xfeedULL);
  CHECK(back.assumed_k == 2u);
}

TEST_CASE("validation errors name the field") {
  CHECK(error_of(R"({"monte_carlo": {"trials": 0}})").find("monte_carlo.trials") == 0);
  CHECK(error_of(R"({"noise": {"gsnr_db": []}})").find("noise.gsnr_db") == 0);
  CHECK(error_of(R"({"noise": {"alpha": [2.5]}})").find("noise.alpha") == 0);
  CHECK(error_of(R"({"methods": []})").find("methods") == 0);
  CHECK(error_of(R"({"methods": ["esprit"]})").find("methods") == 0);
  CHECK(error_of(R"({"assumed_k": 10})").find("assumed_k") == 0);
  CHECK(error_of(R"({"estimator": {"flom_p": 1.0}})").find("estimator.flom_p") == 0);
  CHECK(error_of(R"({"estimator": {"kind": "tyler"}})").find("estimator.kind") == 0);
  CHECK(error_of(R"({"scene": {"doas_deg": [50, 50]}})").find("scene") == 0);
  CHECK(error_of(R"({"array": {"sensors": 0}})").find("array") == 0);
  CHECK(error_of(R"({"snapshots": "many"})").find("snapshots") == 0);
  CHECK(error_of("{not json").find("config") == 0);
  CHECK(error_of("[1, 2]").find("config") == 0);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Capon, Method::Music, Method::FlomMusic, Method::SscmMusic,
                   Method::MusicLikeFixed, Method::MusicLikeAdaptive}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(spectrum_method(Method::FlomMusic) == SpectrumMethod::Music);
  CHECK(spectrum_method(Method::MusicLikeFixed) == SpectrumMethod::MusicLikeFixed);
}

TEST_CASE("missing file is a config error") {
  CHECK_THROWS_AS(load_config("/nonexistent/doa.json"), ConfigError);
}
