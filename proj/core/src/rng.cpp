#include "egbm/rng.hpp"

#include <cmath>
#include <initializer_list>

namespace egbm {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& s : s_) s = splitmix64(state);
}

Rng::Rng(std::uint64_t seed, StreamPurpose purpose, StreamId id) {
  // Fold every component through the mixer so that nearby ids do not
  // produce correlated states.
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  for (std::uint64_t part : {static_cast<std::uint64_t>(purpose), id.feature, id.iteration, id.step}) {
    state = key ^ (part * 0xD1B54A32D192ED03ULL);
    key = splitmix64(state);
  }
  state = key;
  for (auto& s : s_) s = splitmix64(state);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) {
  if (!(hi > lo)) return lo;
  const double u = lo + (hi - lo) * uniform();
  return u > hi ? hi : u;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection to remove modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return r % n;
}

}  // namespace egbm
