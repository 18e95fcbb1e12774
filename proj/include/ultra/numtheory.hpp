#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/gamma.hpp"
#include "ultra/rational.hpp"

namespace ultra {

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);  // sorted ascending

/// Dense integer polynomial, coefficient of x^i at c[i].
struct IntPoly {
  std::vector<Int> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  void trim();
  bool operator==(const IntPoly&) const = default;
};

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
/// Exact division; throws if the remainder is nonzero.
IntPoly poly_divexact(const IntPoly& num, const IntPoly& den);
/// f(x^q)
IntPoly poly_compose_power(const IntPoly& f, std::uint64_t q);

/// N-th cyclotomic polynomial by the prime recursion
///   m_1 = x - 1,   m_qk = m_k(x^q)/m_k(x)  (q prime, q not dividing k),
///   m_qk = m_k(x^q)                        (q prime, q dividing k).
IntPoly cyclotomic_poly(std::uint64_t N);

/// Index of the subgroup of Z^2 generated by the vectors, by the
/// three-step Euclidean reduction; nullopt means infinite (rank < 2).
std::optional<Int> subgroup_index_z2(const std::vector<GammaVector>& vs);

/// Column-style Hermite normal form of the d x k matrix whose columns are
/// the given vectors.  Returns the canonical basis (pivot columns).
std::vector<std::vector<Int>> hnf_basis(const std::vector<GammaVector>& vs,
                                        int d);

/// General-d subgroup index via Hermite form (the d = 2 case follows the
/// Euclidean algorithm verbatim and is cross-checked against this).
std::optional<Int> subgroup_index(const std::vector<GammaVector>& vs, int d);

/// Torsion-order cutoff data for a scan.
struct Bound {
  int d = 2;
  Int D = 0;       // total color weight
  Rat C_hat;       // upper bound on C_d * field_degree * D
  Int N0 = 0;      // scan cutoff (safe, rounded up)
};

/// C_d = (4/3)^{(d-1)(2d-3)/4} * d^{(d-1)/2} as an upper-bound rational,
/// accurate to at least `digits` significant decimal digits.
Rat constant_Cd(int d, int digits = 60);

/// Round-down companion of constant_Cd, used to bracket the constant.
Rat constant_Cd_lower(int d, int digits = 60);

/// N0 = max(8500, ceil((C_hat ln C_hat)^d)) for d = 2,3 and
/// max(256 d^4, ...) for d >= 4, with C_hat = C_d * field_degree * D.
/// All rounding is upward so the bound is safe.
Bound bound_N0(int d, const Int& D, const Int& field_degree = 1);

enum class FilterResult { Skip, Check };

/// Skip N when phi(N) > C_hat * N^{(d-1)/d}, decided exactly via
/// phi(N)^d > C_hat^d * N^{d-1}.  N = 1 is always checked.
FilterResult phi_filter(std::uint64_t N, const Bound& bound);

}  // namespace ultra
