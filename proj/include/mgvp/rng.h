#pragma once

#include <cstdint>
#include <limits>

namespace mgvp {

/// Substream channels. W and W-tilde never share a stream.
enum class Channel : std::uint64_t { kDriver = 0, kDisturbance = 1 };

/// Counter-based generator: output i of stream (seed, path, channel) is a
/// stateless hash of the stream key and i, so any path can be generated
/// independently of every other.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t path_index, Channel channel);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on (0, 1).
  double uniform();

  /// Standard normal via Box-Muller; variates are produced in pairs.
  double gaussian();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace mgvp
