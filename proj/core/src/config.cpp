#include "doalab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace doalab {

using nlohmann::json;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Capon:
      return "capon";
    case Method::Music:
      return "music";
    case Method::FlomMusic:
      return "flom_music";
    case Method::SscmMusic:
      return "sscm_music";
    case Method::MusicLikeFixed:
      return "music_like_fixed";
    case Method::MusicLikeAdaptive:
      return "music_like_adaptive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Capon, Method::Music, Method::FlomMusic, Method::SscmMusic,
                   Method::MusicLikeFixed, Method::MusicLikeAdaptive}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("methods: unknown method '" + std::string(name) + "'");
}

SpectrumMethod spectrum_method(Method method) {
  switch (method) {
    case Method::Capon:
      return SpectrumMethod::Capon;
    case Method::Music:
    case Method::FlomMusic:
    case Method::SscmMusic:
      return SpectrumMethod::Music;
    case Method::MusicLikeFixed:
      return SpectrumMethod::MusicLikeFixed;
    case Method::MusicLikeAdaptive:
      return SpectrumMethod::MusicLikeAdaptive;
  }
  return SpectrumMethod::Music;
}

double ExperimentConfig::signal_power() const {
  if (scene.size() == 0) return 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) acc += scene.power(k);
  return acc / static_cast<double>(scene.size());
}

EstimatorKind ExperimentConfig::estimator_for(Method method) const {
  switch (method) {
    case Method::FlomMusic:
      return EstimatorKind::Flom;
    case Method::SscmMusic:
      return EstimatorKind::Sscm;
    default:
      return estimator;
  }
}

void ExperimentConfig::validate() const {
  const auto field = [](bool ok, const char* name, const std::string& what) {
    if (!ok) throw ConfigError(std::string(name) + ": " + what);
  };
  try {
    geometry.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("array: ") + e.what());
  }
  try {
    scene.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  field(grid_step_deg > 0.0 && grid_step_deg < 45.0, "grid.step_deg", "must be in (0, 45)");
  field(snapshots >= 1, "snapshots", "must be at least 1");
  field(!alphas.empty(), "noise.alpha", "list must be non-empty");
  for (double a : alphas) field(a > 0.0 && a <= 2.0, "noise.alpha", "entries must be in (0, 2]");
  field(!gsnr_db.empty(), "noise.gsnr_db", "list must be non-empty");
  for (double g : gsnr_db) field(std::isfinite(g), "noise.gsnr_db", "entries must be finite");
  field(flom_p > 1.0 && flom_p <= 2.0, "estimator.flom_p", "must be in (1, 2]");
  field(!methods.empty(), "methods", "list must be non-empty");
  field(source_count() < geometry.sensors, "assumed_k", "must be below the sensor count");
  field(trials >= 1, "monte_carlo.trials", "must be at least 1");
  field(tol_deg > 0.0, "monte_carlo.tol_deg", "must be positive");
  field(threads >= 1, "threads", "must be at least 1");
}

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const char* path) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(path) + ": wrong type");
  }
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) return empty;
  const json& s = root.at(key);
  if (!s.is_object()) throw ConfigError(std::string(key) + ": must be an object");
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig c;
  const json& array = section(root, "array");
  c.geometry.sensors = get_or<std::size_t>(array, "sensors", c.geometry.sensors, "array.sensors");
  c.geometry.spacing = get_or<double>(array, "spacing", c.geometry.spacing, "array.spacing");

  c.grid_step_deg = get_or<double>(section(root, "grid"), "step_deg", c.grid_step_deg, "grid.step_deg");

  const json& scene = section(root, "scene");
  c.scene.doas_deg = get_or<std::vector<double>>(scene, "doas_deg", c.scene.doas_deg, "scene.doas_deg");
  c.scene.powers = get_or<std::vector<double>>(scene, "powers", {}, "scene.powers");

  c.snapshots = get_or<std::size_t>(root, "snapshots", c.snapshots, "snapshots");

  const json& noise = section(root, "noise");
  c.alphas = get_or<std::vector<double>>(noise, "alpha", c.alphas, "noise.alpha");
  c.gsnr_db = get_or<std::vector<double>>(noise, "gsnr_db", c.gsnr_db, "noise.gsnr_db");
  c.noise_enabled = get_or<bool>(noise, "enabled", c.noise_enabled, "noise.enabled");

  const json& est = section(root, "estimator");
  if (est.contains("kind")) {
    try {
      c.estimator = parse_estimator_kind(get_or<std::string>(est, "kind", "sample", "estimator.kind"));
    } catch (const ConfigError&) {
      throw;
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("estimator.kind: ") + e.what());
    }
  }
  c.flom_p = get_or<double>(est, "flom_p", c.flom_p, "estimator.flom_p");

  if (root.contains("methods")) {
    c.methods.clear();
    for (const auto& name : get_or<std::vector<std::string>>(root, "methods", {}, "methods")) {
      c.methods.push_back(parse_method(name));
    }
  }
  if (root.contains("assumed_k") && !root.at("assumed_k").is_null()) {
    c.assumed_k = get_or<std::size_t>(root, "assumed_k", 0, "assumed_k");
  }

  const json& mc = section(root, "monte_carlo");
  c.trials = get_or<std::size_t>(mc, "trials", c.trials, "monte_carlo.trials");
  c.tol_deg = get_or<double>(mc, "tol_deg", c.tol_deg, "monte_carlo.tol_deg");
  c.master_seed = get_or<std::uint64_t>(mc, "seed", c.master_seed, "monte_carlo.seed");
  c.threads = get_or<unsigned>(root, "threads", c.threads, "threads");

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  json root = {
      {"array", {{"sensors", c.geometry.sensors}, {"spacing", c.geometry.spacing}}},
      {"grid", {{"step_deg", c.grid_step_deg}}},
      {"scene", {{"doas_deg", c.scene.doas_deg}, {"powers", c.scene.powers}}},
      {"snapshots", c.snapshots},
      {"noise", {{"alpha", c.alphas}, {"gsnr_db", c.gsnr_db}, {"enabled", c.noise_enabled}}},
      {"estimator", {{"kind", std::string(to_string(c.estimator))}, {"flom_p", c.flom_p}}},
      {"methods", methods},
      {"assumed_k", c.source_count()},
      {"monte_carlo", {{"trials", c.trials}, {"tol_deg", c.tol_deg}, {"seed", c.master_seed}}},
      {"threads", c.threads},
  };
  return root.dump(2);
}

}  // namespace doalab
