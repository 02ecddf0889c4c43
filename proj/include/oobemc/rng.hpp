#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Reproducible random streams.
//
// Stream layout: every (trial, purpose) pair gets its own generator seeded by
//   stream_seed = splitmix64(splitmix64(master_seed ^ splitmix64(trial))
//                            ^ splitmix64(stream_id))
// on top of mt19937_64. Uniform doubles come from the top 53 bits of the raw
// output; Poisson and Bernoulli draws are built from those uniforms below
// rather than from std::*_distribution, whose sequences differ across
// standard libraries. Identifier echoed in run manifests:
// "splitmix64+mt19937_64".

namespace oobemc {

inline constexpr const char* kRngAlgorithm = "splitmix64+mt19937_64";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

// Purpose ids for per-trial substreams. Keeping classes on separate streams
// means adding repeaters or UEs to a scenario never shifts the draws of the
// other classes, so paired runs stay paired.
enum class RngStream : std::uint64_t {
  kGnb = 0,
  kRepeater = 1,
  kUe = 2,
};

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Knuth's multiplication method, split into chunks so exp(-mean) stays in
  // normal double range for any mean.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 500.0) {
      total += poisson_small(500.0);
      mean -= 500.0;
    }
    return total + poisson_small(mean);
  }

 private:
  std::uint64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t count = 0;
    double product = uniform();
    while (product > limit) {
      ++count;
      product *= uniform();
    }
    return count;
  }

  std::mt19937_64 engine_;
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return mix_seed(master_seed, trial_index);
}

inline TrialRng stream_rng(std::uint64_t master_seed, std::uint64_t trial_index,
                           RngStream stream) {
  return TrialRng(mix_seed(trial_seed(master_seed, trial_index),
                           static_cast<std::uint64_t>(stream)));
}

}  // namespace oobemc
