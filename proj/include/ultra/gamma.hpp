#pragma once

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <vector>

namespace ultra {

/// Element of Gamma = Z^d in additive notation.  Edge colors, color-change
/// shifts and Laurent exponents are all GammaVectors.
struct GammaVector {
  std::vector<std::int64_t> e;

  GammaVector() = default;
  explicit GammaVector(std::size_t d) : e(d, 0) {}
  GammaVector(std::initializer_list<std::int64_t> init) : e(init) {}

  std::size_t dim() const { return e.size(); }
  std::int64_t operator[](std::size_t i) const { return e[i]; }
  std::int64_t& operator[](std::size_t i) { return e[i]; }

  bool operator==(const GammaVector&) const = default;

  bool is_zero() const {
    for (auto v : e)
      if (v != 0) return false;
    return true;
  }

  std::uint64_t l1_norm() const {
    std::uint64_t s = 0;
    for (auto v : e) s += static_cast<std::uint64_t>(v < 0 ? -v : v);
    return s;
  }

  GammaVector operator+(const GammaVector& o) const {
    GammaVector r(*this);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
  }

  GammaVector operator-(const GammaVector& o) const {
    GammaVector r(*this);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
    return r;
  }

  GammaVector operator-() const {
    GammaVector r(*this);
    for (auto& v : r.e) v = -v;
    return r;
  }
};

/// k . gamma reduced into [0, N).  Negative exponents wrap around.
inline std::uint64_t dot_mod(const std::vector<std::uint64_t>& k,
                             const GammaVector& gamma, std::uint64_t N) {
  if (N == 1) return 0;
  std::int64_t sN = static_cast<std::int64_t>(N);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < gamma.e.size(); ++i) {
    std::int64_t g = gamma.e[i] % sN;
    if (g < 0) g += sN;
    acc = (acc + static_cast<std::int64_t>(k[i] % N) * g) % sN;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace ultra
