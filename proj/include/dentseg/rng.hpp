// Deterministic RNG used everywhere randomness appears (augmentation draws,
// weight init, shuffles, dropout masks). std::uniform_real_distribution is
// implementation-defined, so draws are mapped from raw 64-bit output by hand;
// the single-word state also serializes trivially into checkpoints.
#pragma once

#include <cstdint>
#include <vector>

namespace dentseg {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Uniform integer in [0, n). Modulo bias is irrelevant at our scales.
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from (seed, stream). Used to split the
// augmentor RNG per output index so parallel and serial generation agree.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
  mix.next();
  return mix.next();
}

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace dentseg
