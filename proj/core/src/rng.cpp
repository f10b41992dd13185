#include "doalab/rng.hpp"

#include <cmath>

namespace doalab {

std::uint64_t RandomStream::derive_seed(std::uint64_t seed,
                                        std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (std::uint64_t t : tags) {
    h = mix64(h ^ mix64(t + 0x3c6ef372fe94f82bULL));
  }
  return h;
}

double RandomStream::uniform_open() {
  // 53 random mantissa bits, offset by half an ulp so 0 is never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return -std::log(uniform_open()); }

double RandomStream::normal() { return normal_(engine_); }

}  // namespace doalab
