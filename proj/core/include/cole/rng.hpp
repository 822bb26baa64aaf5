#ifndef COLE_RNG_HPP_
#define COLE_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace cole {

// splitmix64 step; used to derive independent substream seeds so that every
// random decision is a pure function of (master seed, generation, purpose).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

// Substream purposes. Keeping the tags stable keeps old logs replayable.
enum class SeedPurpose : std::uint64_t {
  kSolver = 0x01,
  kOracle = 0x02,
  kEvict = 0x03,
  kSimulate = 0x04,
};

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t generation,
                              SeedPurpose purpose) {
  return sub_seed(master, generation, static_cast<std::uint64_t>(purpose));
}

// Uniform double in [0, 1) from the top 53 bits. We avoid
// std::uniform_real_distribution because its output is not pinned by the
// standard and the generation logs must be reproducible bit for bit.
inline double uniform_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void fisher_yates_shuffle(std::vector<T>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(gen, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Inverse-CDF draw from nonnegative weights (need not be normalized).
inline std::size_t sample_weighted(const std::vector<double>& weights,
                                   std::mt19937_64& gen) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform_double(gen) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace cole

#endif  // COLE_RNG_HPP_
