#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "doalab/spectral.hpp"

namespace doalab {

struct TrialOutcome {
  std::vector<double> estimated_doas;
  bool resolved = false;
  /// Present iff resolved.
  std::optional<double> rmse_deg;
};

/// Up to k strict interior local maxima, strongest first for truncation,
/// returned in ascending angle order. A flat top counts once, at its
/// leftmost index, when both flanking values are lower.
std::vector<double> find_peaks(const Spectrum& s, std::size_t k);

/// True iff peaks and truth have the same size and, after sorting both, each
/// truth angle is within tol_deg of its peak.
bool resolution_success(const std::vector<double>& peaks, const std::vector<double>& truth,
                        double tol_deg);

/// Root mean squared error of the order-preserving matching. Throws
/// ContractViolation if sizes differ. Callers should check resolution first.
double rmse_deg(const std::vector<double>& peaks, const std::vector<double>& truth);

TrialOutcome score_trial(const Spectrum& s, const std::vector<double>& truth, double tol_deg);

}  // namespace doalab
