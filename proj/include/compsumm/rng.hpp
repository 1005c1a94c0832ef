#ifndef COMPSUMM_RNG_HPP
#define COMPSUMM_RNG_HPP

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace compsumm {

/// SplitMix64 step (Steele, Lea, Flood 2014). Used for seeding and for
/// deriving independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for sub-stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** 1.0 (Blackman & Vigna 2018), state filled from SplitMix64.
///
/// Every random decision in the library goes through this generator and the
/// helpers below, which use only integer arithmetic and IEEE double
/// operations, so sequences are identical across platforms and compilers.
/// The standard library distributions are deliberately not used: their
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform01();

  /// Standard normal by the Marsaglia polar method.
  double normal();

  /// Fisher-Yates shuffle, swapping position i with uniform_below(i + 1)
  /// for i = n-1 down to 1.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace compsumm

#endif  // COMPSUMM_RNG_HPP
