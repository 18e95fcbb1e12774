#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/graph.hpp"
#include "ultra/numtheory.hpp"

namespace ultra {

/// (k, l) sparsity counts, l < 2k.
struct SparsityParams {
  int k = 2;
  int l = 2;
};

struct PebbleResult {
  bool sparse = false;            // every edge accepted
  bool tight = false;             // sparse and m = k n - l
  std::vector<int> independent;   // accepted edge ids (maximal sparse subset)
};

/// Lee-Streinu (k, l) pebble game on a multigraph given as endpoint pairs.
PebbleResult pebble_game(SparsityParams params, int n_vertices,
                         const std::vector<std::pair<int, int>>& edges);

/// Unique (k, l)-circuit created by adding `extra` to a sparse graph; the
/// reported set includes the extra edge.  Throws if the graph plus edge is
/// still sparse.
std::vector<int> find_circuit(SparsityParams params, int n_vertices,
                              const std::vector<std::pair<int, int>>& edges,
                              std::pair<int, int> extra);

/// T(G) for a connected Z/NZ-colored graph with exactly one independent
/// cycle: 1 if the cycle color sums to 0 mod N, else 0.
int T_value(const PushedGraph& g);

/// Certificate produced by the theorem checkers on rejection.
struct CombCertificate {
  std::string reason;
  std::vector<int> edges;                      // offending subset / circuit
  std::optional<std::pair<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>>
      epimorphism;                             // (N, (a, b)) with Psi(rho) = 0
  std::optional<std::pair<int, int>> edge_pair;
};

struct CombOptions {
  std::uint64_t seed = 1;
  /// Exhaustive subgraph checks run when m <= this; beyond it only the
  /// randomized certificate path is available.
  int exhaustive_edge_cap = 16;
  bool use_phi_filter = true;       // filter the N loop of the flexible check
  bool canonical_epimorphisms = true;
  std::optional<Int> scan_limit;    // truncation for oracle tests
  int threads = 1;
};

struct CombResult {
  bool holds = false;
  std::optional<CombCertificate> certificate;
  std::string certificate_type;  // "randomized" | "exhaustive" | "count"
};

// --- 2-D sparsity classes -------------------------------------------------

bool is_ross(const ColoredGraph& g, const CombOptions& opts = {});
bool is_colored_laman(const ColoredGraph& g, const CombOptions& opts = {});
bool is_colored_laman_sparse(const ColoredGraph& g,
                             const CombOptions& opts = {});
bool is_unit_area_laman(const ColoredGraph& g, const CombOptions& opts = {});

/// Edge set independence in the Ross matroid: (2,2)-sparse and every
/// (2,3)-circuit has nonzero rho-image.
bool ross_independent(const ColoredGraph& g, const std::vector<int>& subset,
                      const CombOptions& opts = {});

/// Greedy spanning Ross subgraph extraction; nullopt when none exists.
std::optional<std::vector<int>> extract_spanning_ross(
    const ColoredGraph& g, const CombOptions& opts = {});

/// Gamma-(2,2) test for a Z/NZ-colored graph with m = 2n (randomized
/// M_{N,2,2} rank certificate, deterministic count fallback).
bool is_gamma22(const PushedGraph& g, const CombOptions& opts = {});

/// Spanning variant: some 2n-edge subset is Gamma-(2,2) tight.
bool is_gamma22_spanning(const PushedGraph& g, const CombOptions& opts = {});

/// Surjective homomorphisms Z^2 -> Z/NZ as pairs (a, b) mod N with
/// gcd(a, b, N) = 1, reduced modulo the unit-group action (canonical =
/// lexicographically smallest orbit member) unless `canonical` is false.
std::vector<std::pair<std::uint64_t, std::uint64_t>> enumerate_epimorphisms(
    std::uint64_t N, bool canonical = true);

/// Theorem checker, flexible lattice (m = 2n + 1): colored-Laman plus the
/// Gamma-(2,2) spanning condition for every epimorphism up to the shared
/// bound N0 with C_hat = C_2 * D.
CombResult check_thm_flexible(const ColoredGraph& g,
                              const CombOptions& opts = {});

/// Theorem checker, fixed lattice / fixed area (m = 2n): spanning Ross
/// extraction plus the circuit conditions of the pairwise-removal loop.
CombResult check_thm_fixed(const ColoredGraph& g,
                           const CombOptions& opts = {});

/// Random rational realization with `bits`-bit entries and nonsingular
/// lattice; drives the generic-rank certificates and the cross-validation
/// suites.
Framework random_rational_realization(const ColoredGraph& g,
                                      std::uint64_t seed, unsigned bits = 62);

}  // namespace ultra
