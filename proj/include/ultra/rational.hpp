#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ultra {

using Int = mpz_class;
using Rat = mpq_class;

/// Parses an exact rational written as "num" or "num/den" (base 10).
/// Floats, exponents and empty strings are rejected.
Rat parse_rational(const std::string& s);

/// Canonical form: "num" when the denominator is 1, "num/den" otherwise.
std::string format_rational(const Rat& q);

using RatVec = std::vector<Rat>;
using RatMatrixData = std::vector<std::vector<Rat>>;

/// Deterministic 64-bit stream (splitmix64).  Used everywhere a seeded
/// random choice is needed so runs are reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform signed integer with |value| < 2^bits as an exact integer.
  Int signed_bits(unsigned bits) {
    Int v = 0;
    unsigned got = 0;
    while (got < bits) {
      unsigned take = bits - got >= 64 ? 64 : bits - got;
      std::uint64_t w = next();
      if (take < 64) w &= (1ULL << take) - 1;
      Int chunk;
      mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
      v = (v << take) + chunk;
      got += take;
    }
    return next() & 1 ? Int(-v) : v;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

}  // namespace ultra
