#pragma once

#include <cstdint>
#include <limits>

namespace egbm {

// Identifies an independent random stream inside one training run. Streams
// are derived by hashing, so the order in which they are consumed (or the
// thread that consumes them) never changes the draws.
struct StreamId {
  std::uint64_t feature = 0;
  std::uint64_t iteration = 0;
  std::uint64_t step = 0;
};

// Distinct purposes for streams that are not per-stump.
enum class StreamPurpose : std::uint64_t {
  kStump = 0,
  kFolds = 1,
  kPerturbation = 2,
  kSynthetic = 3,
  kSampling = 4,
};

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** seeded through splitmix64. The uniform and normal conversions
// are implemented here rather than through <random> distributions so that
// the streams are identical on every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, StreamPurpose purpose, StreamId id = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace egbm
