#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ti {

// Error taxonomy used across the library. The CLI maps kinds to exit codes.
enum class errc { usage, alphabet, dimension, capacity, precondition, io };

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

// Seeded splittable generator. All randomness in reports is derived from a
// recorded 64-bit seed so runs are reproducible byte-for-byte.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased value in [0, bound).
  uint64_t below(uint64_t bound) {
    uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dULL); }
};

}  // namespace ti
