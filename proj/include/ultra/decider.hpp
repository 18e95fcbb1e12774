#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ultra/graph.hpp"
#include "ultra/numtheory.hpp"
#include "ultra/rigidity.hpp"

namespace ultra {

enum class Model { FlexibleLattice, FixedLattice, FixedVolume };

std::string model_name(Model m);

enum class VerdictKind { Ultrarigid, NotPeriodicallyRigid, TorsionFlexible };

std::string verdict_name(VerdictKind k);

/// Ranks of the relevant matrices at omega = 1.
struct BaseRankReport {
  int rank_S = 0;
  std::optional<int> rank_S_fixed_volume;  // absent when L is singular
  int rank_Shat_at_one = 0;
  int required = 0;  // threshold for the chosen model
  bool passed = false;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Ultrarigid;
  std::optional<TorsionPoint> witness;  // present iff TorsionFlexible
  int witness_nullity = 0;
  BaseRankReport base;
  Bound bound_used;
  std::uint64_t n_checked = 0;        // N values that ran the point loop
  std::uint64_t n_skipped = 0;        // N values removed by the phi-filter
  std::uint64_t points_checked = 0;   // torsion points rank-tested
  std::uint64_t points_skipped = 0;   // points inside skipped N values
};

struct DecideOptions {
  std::uint64_t seed = 0;
  int threads = 1;  // <= 1 selects the serial reference scan
  /// decide() aborts when N0 exceeds this ceiling instead of truncating.
  Int bound_ceiling = Int(1000000);
  /// Optional truncation of the scan (testing / oracle comparisons only).
  std::optional<Int> scan_limit;
  bool galois_reduced = true;
  bool use_modp = true;
};

struct BoundTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Torsion points of the order-N context.  Reduced mode: k_1 runs over
/// divisors of N (the divisor N standing for k_1 = 0), remaining k_i over
/// [0, N), omega = 1 omitted.  Unreduced mode: all k in [0, N)^d except
/// omega = 1.
std::vector<TorsionPoint> enumerate_torsion(std::uint64_t N, int d,
                                            bool galois_reduced);

/// Number of points enumerate_torsion would yield (no materialization).
std::uint64_t count_torsion(std::uint64_t N, int d, bool galois_reduced);

/// The ultrarigidity decision procedure: base rank test at omega = 1, then
/// the filtered torsion scan up to N0 with mod-p certificates and exact
/// confirmation of candidate witnesses.
Verdict decide(const Framework& fw, Model model,
               const DecideOptions& opts = {});

struct RumPoint {
  TorsionPoint omega;
  int nullity = 0;

  bool operator==(const RumPoint&) const = default;
};

/// All torsion points of order <= max_order with positive nullity of
/// pr_omega(S-hat), with exact nullity.  No Galois reduction: the spectrum
/// is reported, not decided.
std::vector<RumPoint> rum_rational_spectrum(const Framework& fw,
                                            std::uint64_t max_order,
                                            const DecideOptions& opts = {});

}  // namespace ultra
