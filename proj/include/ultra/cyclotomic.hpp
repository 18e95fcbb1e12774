#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ultra/numtheory.hpp"
#include "ultra/rational.hpp"

namespace ultra {

/// Exact arithmetic context for Q(zeta_N) in the power basis
/// {1, zeta, ..., zeta^{phi(N)-1}}.  Immutable and shareable.
class CycloContext {
 public:
  explicit CycloContext(std::uint64_t N);

  std::uint64_t order() const { return N_; }
  std::uint64_t phi() const { return phi_; }
  const IntPoly& min_poly() const { return min_poly_; }

  /// Power-basis coordinates of zeta^k for phi <= k <= 2 phi - 2.
  const std::vector<Int>& reduction_row(std::uint64_t k) const {
    return table_[k - phi_];
  }

 private:
  std::uint64_t N_;
  std::uint64_t phi_;
  IntPoly min_poly_;
  std::vector<std::vector<Int>> table_;
};

/// Element of Q(zeta_N); coefficient vector of length phi(N) over Q.
class CycloNumber {
 public:
  CycloNumber() : ctx_(nullptr) {}
  explicit CycloNumber(const CycloContext& ctx)
      : ctx_(&ctx), coeffs_(ctx.phi()) {}
  CycloNumber(const CycloContext& ctx, const Rat& scalar)
      : ctx_(&ctx), coeffs_(ctx.phi()) {
    coeffs_[0] = scalar;
  }

  const CycloContext& context() const { return *ctx_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  std::vector<Rat>& coeffs() { return coeffs_; }

  bool is_zero() const;
  bool operator==(const CycloNumber& o) const {
    return coeffs_ == o.coeffs_;
  }

  CycloNumber operator+(const CycloNumber& o) const;
  CycloNumber operator-(const CycloNumber& o) const;
  CycloNumber operator*(const CycloNumber& o) const;
  CycloNumber operator*(const Rat& s) const;
  CycloNumber& operator+=(const CycloNumber& o);
  CycloNumber& operator-=(const CycloNumber& o);

  /// Field inverse via extended Euclid against m_N; throws on zero.
  CycloNumber invert() const;

  /// Rough size measure used for pivot selection.
  std::size_t cost() const;

 private:
  const CycloContext* ctx_;
  std::vector<Rat> coeffs_;
};

/// zeta^k in the power basis (k arbitrary, reduced mod N).
CycloNumber zeta_power(const CycloContext& ctx, std::int64_t k);

// ---------------------------------------------------------------------------
// Homomorphic images in prime fields with N | p - 1.

struct BadPrimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// F_p image of Q(zeta_N): a prime p = 1 (mod N) and an element of exact
/// multiplicative order N.
struct ModPContext {
  std::uint64_t N = 1;
  std::uint64_t p = 0;
  std::uint64_t zeta_p = 1;
};

/// Deterministic given (N, seed).  `bits` controls the prime size; the
/// default 62 keeps single-prime false-deficiency odds negligible.
/// `attempt` selects successive independent contexts for retries.
ModPContext find_modp_context(std::uint64_t N, unsigned bits = 62,
                              std::uint64_t seed = 0,
                              std::uint64_t attempt = 0);

/// Evaluates the coefficient polynomial at zeta_p; throws BadPrimeError
/// when a denominator is divisible by p.
std::uint64_t project_modp(const CycloNumber& a, const ModPContext& mp);

/// num/den mod p; throws BadPrimeError when p | den.
std::uint64_t rat_modp(const Rat& q, std::uint64_t p);

// Modular helpers (64-bit, products via __int128).
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
bool is_prime_u64(std::uint64_t n);

}  // namespace ultra
