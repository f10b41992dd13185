#include "doalab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace doalab {

std::vector<double> find_peaks(const Spectrum& s, std::size_t k) {
  if (k < 1) {
    throw ParameterError("peak count must be at least 1");
  }
  const auto& v = s.values_db;
  const std::size_t n = v.size();
  std::vector<std::size_t> idx;
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) {
      ++j;
    }
    // [i, j] is a run of equal values; j + 1 < n is required for a right flank.
    if (j + 1 < n && v[i] > v[i - 1] && v[j] > v[j + 1]) {
      idx.push_back(i);
    }
    i = j + 1;
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t lhs, std::size_t rhs) { return v[lhs] > v[rhs]; });
  if (idx.size() > k) {
    idx.resize(k);
  }
  std::sort(idx.begin(), idx.end());
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t p : idx) {
    out.push_back(s.grid_deg[p]);
  }
  return out;
}

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

bool resolution_success(const std::vector<double>& peaks, const std::vector<double>& truth,
                        double tol_deg) {
  if (!(tol_deg > 0.0)) {
    throw ParameterError("resolution tolerance must be positive");
  }
  if (peaks.size() != truth.size()) {
    return false;
  }
  const auto p = sorted(peaks);
  const auto t = sorted(truth);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i] - t[i]) > tol_deg) {
      return false;
    }
  }
  return true;
}

double rmse_deg(const std::vector<double>& peaks, const std::vector<double>& truth) {
  if (peaks.size() != truth.size() || truth.empty()) {
    throw ContractViolation("RMSE requires a resolved trial with one peak per true source");
  }
  const auto p = sorted(peaks);
  const auto t = sorted(truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = p[i] - t[i];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(p.size()));
}

TrialOutcome score_trial(const Spectrum& s, const std::vector<double>& truth, double tol_deg) {
  TrialOutcome out;
  out.estimated_doas = truth.empty() ? std::vector<double>{} : find_peaks(s, truth.size());
  out.resolved = !truth.empty() && resolution_success(out.estimated_doas, truth, tol_deg);
  if (out.resolved) {
    out.rmse_deg = rmse_deg(out.estimated_doas, truth);
  }
  return out;
}

}  // namespace doalab
