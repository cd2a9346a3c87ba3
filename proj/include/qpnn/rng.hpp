#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qpnn {

// Deterministic random source used everywhere a draw is needed. Gaussian
// deviates go through an explicit Box-Muller transform instead of
// std::normal_distribution, whose output is implementation defined, so a
// seed reproduces the same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1) with 53 bits of precision
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double mean, double stddev);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a hash of a byte string, used to derive independent child seeds from
// a base seed plus a human-readable tag.
std::uint64_t fnv1a64(std::string_view bytes);

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

}  // namespace qpnn
