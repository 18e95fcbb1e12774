#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ultra/gamma.hpp"
#include "ultra/rational.hpp"

namespace ultra {

/// Directed edge of a colored quotient graph.  Loops (tail == head) and
/// parallel edges are permitted.
struct Edge {
  int tail = 0;
  int head = 0;
  GammaVector color;

  bool operator==(const Edge&) const = default;
};

/// Finite directed multigraph with Z^d edge colors; the quotient of a
/// d-periodic graph by its translation lattice.
struct ColoredGraph {
  int d = 0;
  int n_vertices = 0;
  std::vector<Edge> edges;

  bool operator==(const ColoredGraph&) const = default;

  int n_edges() const { return static_cast<int>(edges.size()); }

  /// Total color weight D = sum of ||gamma||_1 over all edges.
  std::uint64_t color_weight() const {
    std::uint64_t s = 0;
    for (const auto& e : edges) s += e.color.l1_norm();
    return s;
  }
};

/// Colored graph together with a rational realization: per-vertex positions
/// and the lattice matrix L (row-major; columns of L are the images of the
/// standard generators of Z^d).
struct Framework {
  ColoredGraph graph;
  RatMatrixData positions;  // n x d
  RatMatrixData lattice;    // d x d
};

/// Subgroup of Z^d described by a canonical (Hermite-form) basis.
struct SubgroupDescription {
  int rank = 0;
  std::vector<GammaVector> basis;
  std::optional<Int> index;  // engaged iff rank == d

  bool operator==(const SubgroupDescription&) const = default;
};

/// Structural checks: endpoint validity and color dimension homogeneity.
/// Returns the list of problems, empty when the graph is well-formed.
std::vector<std::string> validate(const ColoredGraph& g);

/// rho-image of an edge subset: the subgroup of Z^d generated by the colors
/// of its cycles, computed from a spanning forest and fundamental cycles.
/// Passing no subset means all edges.
SubgroupDescription rho_image(const ColoredGraph& g,
                              const std::vector<int>& edge_subset);
SubgroupDescription rho_image(const ColoredGraph& g);

/// Fundamental-cycle generators of the rho-image (one per non-forest edge
/// of the subset); rho_image reduces these to a canonical basis.
std::vector<GammaVector> rho_generators(const ColoredGraph& g,
                                        const std::vector<int>& edge_subset);

/// Recoloring induced by moving the representative of vertex k by shift:
/// incoming edges at k lose shift, outgoing edges gain it, loops unchanged.
ColoredGraph elementary_color_change(const ColoredGraph& g, int k,
                                     const GammaVector& shift);

/// Z/NZ-colored graph: the image of a Z^2-colored graph under an
/// epimorphism Z^2 -> Z/NZ.
struct PushedGraph {
  std::uint64_t N = 1;
  int n_vertices = 0;
  std::vector<int> tails, heads;
  std::vector<std::uint64_t> colors;

  int n_edges() const { return static_cast<int>(tails.size()); }
};

/// Pushes colors along Psi(x, y) = a*x + b*y mod N.  Requires d = 2 and
/// gcd(a, b, N) = 1 (surjectivity).
PushedGraph push_colors(const ColoredGraph& g, std::uint64_t a,
                        std::uint64_t b, std::uint64_t N);

/// d_ij = p_head - p_tail + L * gamma for every edge, in edge order.
std::vector<RatVec> edge_vectors(const Framework& fw);

/// Orientation normal form: non-loop edges with tail > head are reversed
/// with negated color.  Reversal does not change the framework.
ColoredGraph normalized_orientation(const ColoredGraph& g);

}  // namespace ultra
