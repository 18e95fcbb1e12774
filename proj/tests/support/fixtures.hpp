#pragma once

// Shared test fixtures: small frameworks used across the suites.

#include "ultra/graph.hpp"

namespace fixtures {

inline ultra::Framework with_identity_lattice(ultra::ColoredGraph g) {
  ultra::Framework fw;
  fw.graph = std::move(g);
  fw.positions.assign(fw.graph.n_vertices, ultra::RatVec(fw.graph.d,
                                                         ultra::Rat(0)));
  fw.lattice.assign(fw.graph.d, ultra::RatVec(fw.graph.d, ultra::Rat(0)));
  for (int i = 0; i < fw.graph.d; ++i) fw.lattice[i][i] = 1;
  return fw;
}

/// One vertex, loops (1,0) and (0,1): the square lattice quotient.
inline ultra::Framework square_lattice() {
  ultra::ColoredGraph g;
  g.d = 2;
  g.n_vertices = 1;
  g.edges = {{0, 0, {1, 0}}, {0, 0, {0, 1}}};
  return with_identity_lattice(std::move(g));
}

/// One vertex, loops (1,0), (0,1), (1,1): ultrarigid in the flexible model.
inline ultra::Framework three_loops() {
  ultra::ColoredGraph g;
  g.d = 2;
  g.n_vertices = 1;
  g.edges = {{0, 0, {1, 0}}, {0, 0, {0, 1}}, {0, 0, {1, 1}}};
  return with_identity_lattice(std::move(g));
}

/// Two vertices, four parallel edges colored (0,0),(1,0),(0,1),(1,1):
/// unit-area-Laman, fixed-lattice ultrarigid for generic realizations.
inline ultra::Framework four_parallel() {
  ultra::ColoredGraph g;
  g.d = 2;
  g.n_vertices = 2;
  g.edges = {{0, 1, {0, 0}}, {0, 1, {1, 0}}, {0, 1, {0, 1}}, {0, 1, {1, 1}}};
  ultra::Framework fw = with_identity_lattice(std::move(g));
  fw.positions[1] = {ultra::Rat(1, 3), ultra::Rat(1, 5)};
  return fw;
}

/// One vertex, loops (1,0) and (0,2): infinitesimally f.l. ultraflexible
/// but f.l. rigid (the pulled-tight construction); the second coordinates
/// are all even, so pushing by the mod-2 second coordinate kills it.
inline ultra::Framework ultraflex_but_rigid() {
  ultra::ColoredGraph g;
  g.d = 2;
  g.n_vertices = 1;
  g.edges = {{0, 0, {1, 0}}, {0, 0, {0, 2}}};
  return with_identity_lattice(std::move(g));
}

}  // namespace fixtures
