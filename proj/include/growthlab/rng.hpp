#pragma once
// Seed derivation and named random streams.
//
// Every run owns one user-facing seed. Each internal consumer (shock draws,
// weight init, replay sampling, OU noise) gets its own generator derived from
// (seed, tag), so adding draws to one consumer never shifts another's stream.
// That separation is what makes paired comparisons work: two runs with the
// same seed see the same shock sequence even when their agents act differently.

#include <cstdint>
#include <random>

namespace growthlab {

// Stream tags. Keep values stable; they are part of the determinism contract.
inline constexpr std::uint64_t kStreamShock = 1;
inline constexpr std::uint64_t kStreamActorInit = 2;
inline constexpr std::uint64_t kStreamCriticInit = 3;
inline constexpr std::uint64_t kStreamReplay = 4;
inline constexpr std::uint64_t kStreamOuNoise = 5;
// Evaluation runs re-key the user seed through this tag so they do not replay
// the training streams.
inline constexpr std::uint64_t kStreamEvalRun = 6;

// splitmix64 scrambler (Steele, Lea, Flood). Good enough to decorrelate seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag * 0x9e3779b97f4a7c15ull + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(derive_seed(seed, tag));
}

// Standard-normal stream with a stable draw sequence. normal_distribution
// caches a second variate internally, so the distribution object must live as
// long as the stream for the sequence to be reproducible call by call.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() { return dist_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace growthlab
