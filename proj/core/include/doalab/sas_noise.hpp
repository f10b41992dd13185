#pragma once

#include <cstddef>
#include <vector>

#include "doalab/rng.hpp"
#include "doalab/types.hpp"

namespace doalab {

/// Symmetric alpha-stable law with zero location and zero skewness.
///
/// Real samples follow the characteristic function exp(-gamma |t|^alpha):
/// gamma multiplies |t|^alpha directly, it is not raised to alpha.
struct NoiseParams {
  double alpha = 2.0;
  double gamma = 1.0;

  /// Throws ParameterError unless 0 < alpha <= 2 and gamma > 0.
  void validate() const;
};

/// Chambers-Mallows-Stuck draw with characteristic function exp(-|t|^alpha).
double standard_sas(double alpha, RandomStream& rng);

/// Totally skewed positive stable variate with Laplace transform
/// E[exp(-s A)] = exp(-s^index), 0 < index < 1 (Kanter's representation).
/// index == 1 returns the degenerate value 1.
double positive_stable(double index, RandomStream& rng);

std::vector<double> sample_real_sas(const NoiseParams& params, std::size_t n, RandomStream& rng);

/// Isotropic complex SaS samples through the sub-Gaussian representation
///
///   v = gamma * sqrt(A) * (g1 + j g2) / sqrt(2),   g1, g2 ~ N(0, 1),
///
/// with A positive (alpha/2)-stable. Here gamma is a true scale on the complex
/// sample: at alpha = 2, A == 1 and E|v|^2 = gamma^2, so gamma plays the part
/// of a standard deviation and signal_power / gamma^alpha is the ordinary SNR.
/// Each real marginal has characteristic function
/// exp(-marginal_gamma(params) |t|^alpha).
std::vector<cdouble> sample_complex_isotropic_sas(const NoiseParams& params, std::size_t n,
                                                  RandomStream& rng);

/// Dispersion of the real (or imaginary) part of sample_complex_isotropic_sas,
/// in the exp(-gamma_r |t|^alpha) convention: gamma_r = (gamma / 2)^alpha.
double marginal_gamma(const NoiseParams& params);

/// gamma such that 10 log10(signal_power / gamma^alpha) == gsnr_db.
double gamma_for_gsnr(double signal_power, double gsnr_db, double alpha);
double gsnr_of_gamma(double signal_power, double gamma, double alpha);

}  // namespace doalab
