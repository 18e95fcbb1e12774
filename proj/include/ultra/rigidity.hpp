#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ultra/cyclotomic.hpp"
#include "ultra/graph.hpp"
#include "ultra/rational.hpp"

namespace ultra {

/// Dense matrix of exact rationals with optional row/column labels.
struct RationalMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rat> data;  // row-major
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  Rat& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  const Rat& at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

/// One term c * x^gamma of a group-ring entry.
struct Monomial {
  Rat coeff;
  GammaVector exp;
};

/// Sparse entry of a Laurent matrix: column index plus monomial list
/// (one term for ordinary edges, two for loops).
struct LaurentEntry {
  int col = 0;
  std::vector<Monomial> terms;
};

/// The matrix S-hat: m rows, d*n columns, entries scalar multiples of
/// Laurent monomials x^gamma.  Rows are stored sparsely; only the incident
/// vertex blocks of an edge are populated.
struct LaurentMatrix {
  int d = 0;
  int n = 0;
  int m = 0;
  std::vector<std::vector<LaurentEntry>> rows;

  int cols() const { return d * n; }
};

/// omega = (zeta^{k_1}, ..., zeta^{k_d}) with zeta a primitive N-th root.
struct TorsionPoint {
  std::uint64_t N = 1;
  std::vector<std::uint64_t> k;

  bool is_identity() const {
    for (auto v : k)
      if (v % N != 0) return false;
    return true;
  }

  /// Intrinsic order N / gcd(k_1, ..., k_d, N).
  std::uint64_t order() const {
    std::uint64_t g = N;
    for (auto v : k) g = std::gcd(g, v % N);
    return N / g;
  }

  bool operator==(const TorsionPoint&) const = default;
};

/// Dense matrix over Q(zeta_N).
struct CycloMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<CycloNumber> data;

  CycloNumber& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  const CycloNumber& at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

/// Periodic rigidity matrix S: m rows, d*n + d^2 columns.  Row ij carries
/// -d_ij / +d_ij in the endpoint blocks and gamma_k * d_ij in lattice
/// column group k (the lattice unknown M flattened column-major).
RationalMatrix build_S(const ColoredGraph& g,
                       const std::vector<RatVec>& dvecs);

/// Group-ring rigidity matrix: -d_ij at exponent 0 in the tail block,
/// +d_ij at exponent -gamma_ij in the head block; loop contributions are
/// combined into a single two-term entry.
LaurentMatrix build_Shat(const ColoredGraph& g,
                         const std::vector<RatVec>& dvecs);

/// pr_omega: every monomial c x^gamma becomes c zeta^{k . gamma mod N}.
CycloMatrix evaluate_at(const LaurentMatrix& shat, const TorsionPoint& omega,
                        const CycloContext& ctx);

/// pr_1 as a rational matrix (all exponents collapse to scalars).
RationalMatrix evaluate_at_one(const LaurentMatrix& shat);

/// Appends the fixed-volume constraint tr(L^{-1} M) = 0 as one extra row
/// (zero on vertex columns, entries of (L^{-1})^T on the lattice block).
/// Throws on singular L.
RationalMatrix augment_fixed_volume(const RationalMatrix& S,
                                    const RatMatrixData& L);

int rank_exact(RationalMatrix m);
int rank_exact(CycloMatrix m);

/// Rank of pr_omega(S-hat) over F_p.  Never exceeds the exact rank; full
/// rank certifies full rank in characteristic zero.  Throws BadPrimeError
/// when an entry denominator collides with p.
int rank_modp(const LaurentMatrix& shat, const TorsionPoint& omega,
              const ModPContext& mp);

/// Montgomery-form modular arithmetic; the scan kernel lives on this.
struct MontgomeryDomain {
  std::uint64_t p = 0;
  std::uint64_t p_neg_inv = 0;  // -p^{-1} mod 2^64
  std::uint64_t r2 = 0;         // 2^128 mod p

  explicit MontgomeryDomain(std::uint64_t prime);
  MontgomeryDomain() = default;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    using u128 = unsigned __int128;
    u128 t = static_cast<u128>(a) * b;
    std::uint64_t m = static_cast<std::uint64_t>(t) * p_neg_inv;
    std::uint64_t r = static_cast<std::uint64_t>(
        (t + static_cast<u128>(m) * p) >> 64);
    return r >= p ? r - p : r;
  }
  std::uint64_t to(std::uint64_t a) const { return mul(a % p, r2); }
  std::uint64_t from(std::uint64_t a) const { return mul(a, 1); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p - b;
  }
};

/// S-hat precompiled against a fixed prime context, for tight scan loops.
/// Entries live in Montgomery form.
class ShatModP {
 public:
  ShatModP(const LaurentMatrix& shat, const ModPContext& mp);

  int rank_at(const std::vector<std::uint64_t>& k,
              std::vector<std::uint64_t>& scratch) const;
  int rank_at(const std::vector<std::uint64_t>& k) const;

  const ModPContext& context() const { return mp_; }
  int rows() const { return m_; }
  int cols() const { return cols_; }

 private:
  struct Term {
    int row;
    int col;
    std::uint64_t c;                // Montgomery form
    std::vector<std::uint64_t> exp; // exponent reduced into [0, N)
  };
  ModPContext mp_;
  MontgomeryDomain dom_;
  int m_;
  int cols_;
  std::vector<Term> terms_;
  std::vector<std::uint64_t> zeta_pow_;  // Montgomery form, e in [0, N)
};

/// Transports every edge vector by the nonsingular matrix A.
std::vector<RatVec> apply_affine(const std::vector<RatVec>& dvecs,
                                 const RatMatrixData& A);

// Small exact-linear-algebra helpers shared by several modules.
Rat det_exact(const RatMatrixData& A);
RatMatrixData invert_matrix(const RatMatrixData& A);  // throws if singular

}  // namespace ultra
