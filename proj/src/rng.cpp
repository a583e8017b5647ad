#include "mgvp/rng.h"

#include <cmath>
#include <numbers>

namespace mgvp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path_index, Channel channel) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ (path_index * kStreamSalt + kGolden));
  k = mix64(k ^ (static_cast<std::uint64_t>(channel) + 1) * kGolden);
  key_ = k;
}

CounterRng::result_type CounterRng::operator()() {
  const std::uint64_t c = counter_++;
  return mix64(mix64(key_ ^ (c * kGolden)) + key_);
}

double CounterRng::uniform() {
  // 53 random bits centred in their bucket: never 0, never 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace mgvp
