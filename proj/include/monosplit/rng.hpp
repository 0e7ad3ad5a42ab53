#pragma once

// Counter-based random streams for reproducible Monte Carlo.
//
// A stream is a 64-bit key plus a draw counter; each output is the SplitMix64
// finalizer applied to (key, counter).  Because a draw is a pure function of
// those two integers, a stream can be copied, forked, or replayed without any
// hidden state, and independent substreams for (trial, iteration, half-step)
// tuples are cheap to derive.  Forking never advances the parent.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace monosplit {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t key = 0)
      : key_(detail::mix64(key + detail::kGolden)) {}

  // Derives an independent substream from a tag.  Streams forked with
  // distinct tags (or from distinct parents) behave as unrelated generators.
  RngStream fork(std::uint64_t tag) const {
    RngStream child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(tag * detail::kGolden + 0x632be59bd9b4e019ull));
    return child;
  }

  std::uint64_t next_u64() {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("RngStream::uniform: lo > hi");
    return lo + (hi - lo) * uniform();
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace monosplit
