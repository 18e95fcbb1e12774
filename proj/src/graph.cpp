#include "ultra/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "ultra/numtheory.hpp"

namespace ultra {

std::vector<std::string> validate(const ColoredGraph& g) {
  std::vector<std::string> errors;
  if (g.d <= 0) errors.push_back("dimension must be positive");
  if (g.n_vertices <= 0) errors.push_back("graph needs at least one vertex");
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.tail < 0 || e.tail >= g.n_vertices || e.head < 0 ||
        e.head >= g.n_vertices) {
      std::ostringstream os;
      os << "edge " << i << ": endpoint out of range (" << e.tail << " -> "
         << e.head << ", " << g.n_vertices << " vertices)";
      errors.push_back(os.str());
      break;  // report first malformed edge
    }
    if (static_cast<int>(e.color.dim()) != g.d) {
      std::ostringstream os;
      os << "edge " << i << ": color has length " << e.color.dim()
         << ", expected " << g.d;
      errors.push_back(os.str());
      break;
    }
  }
  return errors;
}

std::vector<GammaVector> rho_generators(const ColoredGraph& g,
                                        const std::vector<int>& edge_subset) {
  // Spanning forest by BFS over the subset; potentials rho(path root -> v).
  std::vector<std::vector<std::pair<int, int>>> adj(g.n_vertices);
  for (int id : edge_subset) {
    const Edge& e = g.edges[id];
    adj[e.tail].push_back({e.head, id});
    adj[e.head].push_back({e.tail, id});
  }
  std::vector<int> comp(g.n_vertices, -1);
  std::vector<GammaVector> pot(g.n_vertices, GammaVector(g.d));
  std::vector<char> in_tree(g.edges.size(), 0);
  int n_comp = 0;
  for (int root = 0; root < g.n_vertices; ++root) {
    if (comp[root] != -1) continue;
    comp[root] = n_comp++;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, id] : adj[v]) {
        if (comp[w] != -1 || in_tree[id]) continue;
        const Edge& e = g.edges[id];
        if (e.tail == e.head) continue;  // loops are never tree edges
        in_tree[id] = 1;
        comp[w] = comp[v];
        pot[w] = v == e.tail ? pot[v] + e.color : pot[v] - e.color;
        q.push(w);
      }
    }
  }
  std::vector<GammaVector> gens;
  for (int id : edge_subset) {
    if (in_tree[id]) continue;
    const Edge& e = g.edges[id];
    // rho(B) = rho(path to tail) + gamma - rho(path to head)
    gens.push_back(pot[e.tail] + e.color - pot[e.head]);
  }
  return gens;
}

SubgroupDescription rho_image(const ColoredGraph& g,
                              const std::vector<int>& edge_subset) {
  std::vector<GammaVector> gens = rho_generators(g, edge_subset);
  SubgroupDescription out;
  auto basis = hnf_basis(gens, g.d);
  out.rank = static_cast<int>(basis.size());
  for (const auto& col : basis) {
    GammaVector v(g.d);
    for (int i = 0; i < g.d; ++i) {
      if (!col[i].fits_slong_p())
        throw std::overflow_error("rho_image: basis entry exceeds int64");
      v[i] = col[i].get_si();
    }
    out.basis.push_back(v);
  }
  if (out.rank == g.d) out.index = subgroup_index(gens, g.d);
  return out;
}

SubgroupDescription rho_image(const ColoredGraph& g) {
  std::vector<int> all(g.edges.size());
  std::iota(all.begin(), all.end(), 0);
  return rho_image(g, all);
}

ColoredGraph elementary_color_change(const ColoredGraph& g, int k,
                                     const GammaVector& shift) {
  ColoredGraph out = g;
  for (Edge& e : out.edges) {
    if (e.tail == k && e.head == k) continue;  // loops unchanged
    if (e.head == k) e.color = e.color - shift;
    if (e.tail == k) e.color = e.color + shift;
  }
  return out;
}

PushedGraph push_colors(const ColoredGraph& g, std::uint64_t a,
                        std::uint64_t b, std::uint64_t N) {
  if (g.d != 2) throw std::invalid_argument("push_colors requires d = 2");
  std::uint64_t gcd_all = std::gcd(std::gcd(a % N, b % N), N);
  if (gcd_all != 1)
    throw std::invalid_argument("Psi is not surjective: gcd(a, b, N) != 1");
  PushedGraph out;
  out.N = N;
  out.n_vertices = g.n_vertices;
  auto mod = [N](std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(N);
    if (r < 0) r += static_cast<std::int64_t>(N);
    return static_cast<std::uint64_t>(r);
  };
  for (const Edge& e : g.edges) {
    out.tails.push_back(e.tail);
    out.heads.push_back(e.head);
    using u128 = unsigned __int128;
    u128 c = u128(a % N) * mod(e.color[0]) + u128(b % N) * mod(e.color[1]);
    out.colors.push_back(static_cast<std::uint64_t>(c % N));
  }
  return out;
}

std::vector<RatVec> edge_vectors(const Framework& fw) {
  const ColoredGraph& g = fw.graph;
  std::vector<RatVec> out;
  out.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    RatVec d(g.d);
    for (int i = 0; i < g.d; ++i) {
      d[i] = fw.positions[e.head][i] - fw.positions[e.tail][i];
      for (int j = 0; j < g.d; ++j)
        d[i] += fw.lattice[i][j] * Rat(static_cast<long>(e.color[j]));
    }
    out.push_back(std::move(d));
  }
  return out;
}

ColoredGraph normalized_orientation(const ColoredGraph& g) {
  ColoredGraph out = g;
  for (Edge& e : out.edges) {
    if (e.tail > e.head) {
      std::swap(e.tail, e.head);
      e.color = -e.color;
    }
  }
  return out;
}

}  // namespace ultra
