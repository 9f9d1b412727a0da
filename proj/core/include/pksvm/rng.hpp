#ifndef PKSVM_RNG_HPP
#define PKSVM_RNG_HPP

#include <cstdint>
#include <random>

namespace pksvm::rng {

/// Seed derivation for independent substreams: a splitmix64 finalizer over
/// (seed, stream). Streams derived from the same seed do not collide for
/// any practical stream count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// The project-wide pinned generator. mt19937_64 has a standard-specified
/// output sequence, so seeded draws reproduce across compilers.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random mantissa bits. Used instead of
/// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform01(Engine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal variates via Box-Muller on top of uniform01. Generates
/// pairs; the second variate of each pair is cached and returned next.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next();

 private:
  Engine gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pksvm::rng

#endif  // PKSVM_RNG_HPP
