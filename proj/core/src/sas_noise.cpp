#include "doalab/sas_noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace doalab {

void NoiseParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw ParameterError("noise alpha must satisfy 0 < alpha <= 2, got " + std::to_string(alpha));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("noise gamma must be positive and finite, got " + std::to_string(gamma));
  }
}

double standard_sas(double alpha, RandomStream& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double v = rng.uniform_open(-half_pi, half_pi);
  const double w = rng.exponential();
  if (alpha == 1.0) {
    return std::tan(v);
  }
  if (alpha == 2.0) {
    // CMS at alpha = 2 collapses to 2 sin(v) sqrt(w), which is N(0, 2).
    return 2.0 * std::sin(v) * std::sqrt(w);
  }
  const double av = alpha * v;
  return std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

double positive_stable(double index, RandomStream& rng) {
  if (index == 1.0) {
    return 1.0;
  }
  const double u = rng.uniform_open(0.0, std::numbers::pi);
  const double w = rng.exponential();
  const double zolotarev = std::pow(std::sin(index * u), index / (1.0 - index)) *
                           std::sin((1.0 - index) * u) /
                           std::pow(std::sin(u), 1.0 / (1.0 - index));
  return std::pow(zolotarev / w, (1.0 - index) / index);
}

std::vector<double> sample_real_sas(const NoiseParams& params, std::size_t n, RandomStream& rng) {
  params.validate();
  const double scale = std::pow(params.gamma, 1.0 / params.alpha);
  std::vector<double> out(n);
  for (auto& x : out) {
    x = scale * standard_sas(params.alpha, rng);
  }
  return out;
}

std::vector<cdouble> sample_complex_isotropic_sas(const NoiseParams& params, std::size_t n,
                                                  RandomStream& rng) {
  params.validate();
  const double sub_index = params.alpha / 2.0;
  const double scale = params.gamma / std::numbers::sqrt2;
  std::vector<cdouble> out(n);
  for (auto& x : out) {
    const double mix = std::sqrt(positive_stable(sub_index, rng));
    const double re = rng.normal();
    const double im = rng.normal();
    x = scale * mix * cdouble(re, im);
  }
  return out;
}

double marginal_gamma(const NoiseParams& params) {
  return std::pow(params.gamma / 2.0, params.alpha);
}

double gamma_for_gsnr(double signal_power, double gsnr_db, double alpha) {
  if (!(signal_power > 0.0)) {
    throw ParameterError("signal power must be positive for GSNR calibration");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw ParameterError("alpha must satisfy 0 < alpha <= 2");
  }
  return std::pow(signal_power / std::pow(10.0, gsnr_db / 10.0), 1.0 / alpha);
}

double gsnr_of_gamma(double signal_power, double gamma, double alpha) {
  if (!(signal_power > 0.0) || !(gamma > 0.0)) {
    throw ParameterError("signal power and gamma must be positive");
  }
  return 10.0 * std::log10(signal_power / std::pow(gamma, alpha));
}

}  // namespace doalab
