#pragma once

#include <cstdint>
#include <random>

namespace slicecov {

/// Deterministic random source. mt19937_64 output is fixed by the standard and
/// the uniform/normal mappings below avoid std::*_distribution, whose results
/// vary across standard libraries, so streams are bitwise reproducible on any
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller; generates pairs and caches the spare.
  double normal();

  /// Independent substream: mixes (seed, stream) through splitmix64 so
  /// distinct stream ids give unrelated engines.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer, the usual seed-mixing function.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace slicecov
