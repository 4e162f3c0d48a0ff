#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace gaitscore {

/// Counter-based generator: the i-th draw of stream (seed, stream) is
/// splitmix64(key + i * golden), where key mixes seed and stream id. Draws
/// depend only on (seed, stream, i), so results are identical on every
/// platform and independent of how streams are interleaved.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller (one draw per call, two uniforms consumed).
  double normal();

  /// Derive an independent child stream.
  [[nodiscard]] CounterRng fork(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gaitscore
