#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace doalab {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seedable, splittable random stream.
///
/// A stream owns its engine. Child streams are derived from the stream seed
/// and a list of integer tags, never from the engine state, so a child for
/// (seed, tags...) is the same regardless of how many draws the parent made.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  [[nodiscard]] RandomStream derive(std::initializer_list<std::uint64_t> tags) const {
    return RandomStream(derive_seed(seed_, tags));
  }

  static std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Uniform on (lo, hi), endpoints excluded.
  double uniform_open(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }
  /// Standard exponential, strictly positive.
  double exponential();
  double normal();

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace doalab
