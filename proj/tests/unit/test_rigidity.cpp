#include <doctest.h>

#include "support/fixtures.hpp"
#include "ultra/combinatorics.hpp"
#include "ultra/decider.hpp"
#include "ultra/rigidity.hpp"

using namespace ultra;

namespace {

ColoredGraph random_graph(SplitMix64& rng, int n, int m) {
  ColoredGraph g;
  g.d = 2;
  g.n_vertices = n;
  for (int i = 0; i < m; ++i) {
    Edge e;
    e.tail = static_cast<int>(rng.below(n));
    e.head = static_cast<int>(rng.below(n));
    e.color = {static_cast<std::int64_t>(rng.below(3)) - 1,
               static_cast<std::int64_t>(rng.below(3)) - 1};
    g.edges.push_back(e);
  }
  return g;
}

TorsionPoint random_point(SplitMix64& rng, std::uint64_t N, int d) {
  TorsionPoint w;
  w.N = N;
  for (int i = 0; i < d; ++i) w.k.push_back(rng.below(N));
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("rigidity");

TEST_CASE("build_S row pattern") {
  // single vertex, loop (1,0), d = (a,b): row (0,0 | a,b,0,0)
  ColoredGraph g;
  g.d = 2;
  g.n_vertices = 1;
  g.edges = {{0, 0, {1, 0}}};
  std::vector<RatVec> dv{{Rat(5), Rat(7)}};
  RationalMatrix S = build_S(g, dv);
  REQUIRE(S.rows == 1);
  REQUIRE(S.cols == 2 + 4);
  CHECK(S.at(0, 0) == 0);
  CHECK(S.at(0, 1) == 0);
  CHECK(S.at(0, 2) == 5);
  CHECK(S.at(0, 3) == 7);
  CHECK(S.at(0, 4) == 0);
  CHECK(S.at(0, 5) == 0);

  // uncolored edge: lattice block zero
  ColoredGraph g2;
  g2.d = 2;
  g2.n_vertices = 2;
  g2.edges = {{0, 1, {0, 0}}};
  RationalMatrix S2 = build_S(g2, {{Rat(1), Rat(2)}});
  CHECK(S2.at(0, 0) == -1);
  CHECK(S2.at(0, 1) == -2);
  CHECK(S2.at(0, 2) == 1);
  CHECK(S2.at(0, 3) == 2);
  for (int c = 4; c < 8; ++c) CHECK(S2.at(0, c) == 0);

  // three-loop fixture: rank dn + (d choose 2) = 3
  Framework fw = fixtures::three_loops();
  CHECK(rank_exact(build_S(fw.graph, edge_vectors(fw))) == 3);
}

TEST_CASE("build_Shat entries and sign convention") {
  // loop color (1,0), d=(1,0): entry d (x^{(-1,0)} - 1) on the loop block
  Framework fw = fixtures::square_lattice();
  LaurentMatrix sh = build_Shat(fw.graph, edge_vectors(fw));
  REQUIRE(sh.rows[0].size() == 1);
  const LaurentEntry& e = sh.rows[0][0];
  CHECK(e.col == 0);
  REQUIRE(e.terms.size() == 2);
  CHECK(e.terms[0].coeff == 1);
  CHECK(e.terms[0].exp == GammaVector{-1, 0});
  CHECK(e.terms[1].coeff == -1);
  CHECK(e.terms[1].exp == GammaVector{0, 0});

  // head block of a non-loop edge carries x^{-gamma}
  ColoredGraph g;
  g.d = 2;
  g.n_vertices = 2;
  g.edges = {{0, 1, {2, -1}}};
  LaurentMatrix sh2 = build_Shat(g, {{Rat(3), Rat(4)}});
  bool found = false;
  for (const LaurentEntry& entry : sh2.rows[0]) {
    if (entry.col == 2) {  // head block, x coordinate
      REQUIRE(entry.terms.size() == 1);
      CHECK(entry.terms[0].coeff == 3);
      CHECK(entry.terms[0].exp == GammaVector{-2, 1});
      found = true;
    }
  }
  CHECK(found);

  // uncolored edges collapse to the finite rigidity row at omega = 1
  g.edges = {{0, 1, {0, 0}}};
  RationalMatrix pr1 = evaluate_at_one(build_Shat(g, {{Rat(1), Rat(2)}}));
  CHECK(pr1.at(0, 0) == -1);
  CHECK(pr1.at(0, 1) == -2);
  CHECK(pr1.at(0, 2) == 1);
  CHECK(pr1.at(0, 3) == 2);
}

TEST_CASE("evaluate_at on the square lattice fixture") {
  Framework fw = fixtures::square_lattice();
  LaurentMatrix sh = build_Shat(fw.graph, edge_vectors(fw));
  CycloContext ctx(2);

  // omega = (-1, 1): diag(-2, 0), rank 1
  CycloMatrix m1 = evaluate_at(sh, TorsionPoint{2, {1, 0}}, ctx);
  CHECK(m1.at(0, 0).coeffs() == std::vector<Rat>{-2});
  CHECK(m1.at(0, 1).is_zero());
  CHECK(m1.at(1, 0).is_zero());
  CHECK(m1.at(1, 1).is_zero());
  CHECK(rank_exact(m1) == 1);

  // omega = (-1, -1): diag(-2, -2), rank 2
  CycloMatrix m2 = evaluate_at(sh, TorsionPoint{2, {1, 1}}, ctx);
  CHECK(m2.at(0, 0).coeffs() == std::vector<Rat>{-2});
  CHECK(m2.at(1, 1).coeffs() == std::vector<Rat>{-2});
  CHECK(rank_exact(m2) == 2);

  // omega = 1 collapses every exponent
  CycloContext c1(1);
  CycloMatrix m0 = evaluate_at(sh, TorsionPoint{1, {0, 0}}, c1);
  CHECK(rank_exact(m0) == 0);
}

TEST_CASE("augment_fixed_volume") {
  Framework fw = fixtures::square_lattice();
  RationalMatrix S = build_S(fw.graph, edge_vectors(fw));

  RationalMatrix aug = augment_fixed_volume(S, fw.lattice);
  REQUIRE(aug.rows == S.rows + 1);
  // L = I: the row selects M(0,0) + M(1,1)
  CHECK(aug.at(2, 0) == 0);
  CHECK(aug.at(2, 1) == 0);
  CHECK(aug.at(2, 2) == 1);  // M(0,0)
  CHECK(aug.at(2, 3) == 0);
  CHECK(aug.at(2, 4) == 0);
  CHECK(aug.at(2, 5) == 1);  // M(1,1)

  RatMatrixData diag{{Rat(2), Rat(0)}, {Rat(0), Rat(3)}};
  RationalMatrix aug2 = augment_fixed_volume(S, diag);
  CHECK(aug2.at(2, 2) == Rat(1, 2));
  CHECK(aug2.at(2, 3) == 0);
  CHECK(aug2.at(2, 4) == 0);
  CHECK(aug2.at(2, 5) == Rat(1, 3));

  // shear: tr(L^{-1} M) = M00 - M10 + M11
  RatMatrixData shear{{Rat(1), Rat(1)}, {Rat(0), Rat(1)}};
  RationalMatrix aug3 = augment_fixed_volume(S, shear);
  CHECK(aug3.at(2, 2) == 1);   // M(0,0)
  CHECK(aug3.at(2, 3) == -1);  // M(1,0)
  CHECK(aug3.at(2, 4) == 0);   // M(0,1)
  CHECK(aug3.at(2, 5) == 1);   // M(1,1)

  RatMatrixData singular{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  CHECK_THROWS_AS(augment_fixed_volume(S, singular), std::invalid_argument);
}

TEST_CASE("rank engines: basics") {
  RationalMatrix zero;
  zero.rows = 3;
  zero.cols = 4;
  zero.data.assign(12, Rat(0));
  CHECK(rank_exact(zero) == 0);

  RationalMatrix eye;
  eye.rows = 4;
  eye.cols = 4;
  eye.data.assign(16, Rat(0));
  for (int i = 0; i < 4; ++i) eye.at(i, i) = Rat(i + 1, 7);
  CHECK(rank_exact(eye) == 4);
}

TEST_CASE("rank_modp agrees on the square-lattice fixture") {
  Framework fw = fixtures::square_lattice();
  LaurentMatrix sh = build_Shat(fw.graph, edge_vectors(fw));
  ModPContext mp{2, 13, 12};  // zeta = -1 mod 13
  CHECK(rank_modp(sh, TorsionPoint{2, {1, 0}}, mp) == 1);
  CHECK(rank_modp(sh, TorsionPoint{2, {1, 1}}, mp) == 2);
}

TEST_CASE("rank_modp never exceeds rank_exact") {
  SplitMix64 rng(2024);
  int checked = 0;
  while (checked < 120) {
    int n = 1 + static_cast<int>(rng.below(3));
    int m = 1 + static_cast<int>(rng.below(6));
    ColoredGraph g = random_graph(rng, n, m);
    Framework fw = random_rational_realization(g, rng.next(), 16);
    LaurentMatrix sh = build_Shat(g, edge_vectors(fw));
    std::uint64_t N = 1 + rng.below(12);
    TorsionPoint w = random_point(rng, N, 2);
    CycloContext ctx(N);
    int exact = rank_exact(evaluate_at(sh, w, ctx));
    ModPContext mp = find_modp_context(N, 62, rng.next());
    int modp = rank_modp(sh, w, mp);
    REQUIRE(modp <= exact);
    ++checked;
  }
}

TEST_CASE("ranks invariant under valid color changes") {
  // Color-change rank preservation holds for arbitrary edge vectors, so the
  // same dvecs drive both matrices.
  SplitMix64 rng(5150);
  for (int t = 0; t < 100; ++t) {
    int n = 1 + static_cast<int>(rng.below(3));
    int m = 1 + static_cast<int>(rng.below(5));
    ColoredGraph g = random_graph(rng, n, m);
    Framework fw = random_rational_realization(g, rng.next(), 16);
    std::vector<RatVec> dv = edge_vectors(fw);
    int k = static_cast<int>(rng.below(n));
    GammaVector shift{static_cast<std::int64_t>(rng.below(5)) - 2,
                      static_cast<std::int64_t>(rng.below(5)) - 2};
    ColoredGraph g2 = elementary_color_change(g, k, shift);

    CHECK(rank_exact(build_S(g, dv)) == rank_exact(build_S(g2, dv)));

    std::uint64_t N = 1 + rng.below(8);
    TorsionPoint w = random_point(rng, N, 2);
    CycloContext ctx(N);
    CHECK(rank_exact(evaluate_at(build_Shat(g, dv), w, ctx)) ==
          rank_exact(evaluate_at(build_Shat(g2, dv), w, ctx)));
  }
}

TEST_CASE("ranks invariant under affine transport") {
  SplitMix64 rng(31337);
  Framework fw = fixtures::four_parallel();
  LaurentMatrix sh = build_Shat(fw.graph, edge_vectors(fw));
  RationalMatrix S = build_S(fw.graph, edge_vectors(fw));

  for (int t = 0; t < 20; ++t) {
    RatMatrixData A(2, RatVec(2));
    do {
      for (auto& row : A) {
        for (auto& x : row) {
          x = Rat(static_cast<long>(rng.below(9)) - 4,
                  1 + static_cast<long>(rng.below(4)));
          x.canonicalize();
        }
      }
    } while (det_exact(A) == 0);
    std::vector<RatVec> dv2 = apply_affine(edge_vectors(fw), A);
    CHECK(rank_exact(build_S(fw.graph, dv2)) == rank_exact(S));
    LaurentMatrix sh2 = build_Shat(fw.graph, dv2);
    for (std::uint64_t N : {2ULL, 3ULL, 4ULL}) {
      CycloContext ctx(N);
      for (const TorsionPoint& w : enumerate_torsion(N, 2, false)) {
        CHECK(rank_exact(evaluate_at(sh2, w, ctx)) ==
              rank_exact(evaluate_at(sh, w, ctx)));
      }
    }
  }
  CHECK_THROWS_AS(
      apply_affine(edge_vectors(fw),
                   RatMatrixData{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}),
      std::invalid_argument);
  // identity and scaling leave everything alone
  RatMatrixData two{{Rat(2), Rat(0)}, {Rat(0), Rat(2)}};
  auto dv = edge_vectors(fw);
  auto doubled = apply_affine(dv, two);
  for (std::size_t i = 0; i < dv.size(); ++i) {
    CHECK(doubled[i][0] == 2 * dv[i][0]);
    CHECK(doubled[i][1] == 2 * dv[i][1]);
  }
}

TEST_CASE("pr_1 of an uncolored quotient is the finite rigidity matrix") {
  // triangle with zero colors
  ColoredGraph g;
  g.d = 2;
  g.n_vertices = 3;
  g.edges = {{0, 1, {0, 0}}, {1, 2, {0, 0}}, {2, 0, {0, 0}}};
  Framework fw;
  fw.graph = g;
  fw.positions = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  fw.lattice = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  auto dv = edge_vectors(fw);
  RationalMatrix pr1 = evaluate_at_one(build_Shat(g, dv));
  CHECK(rank_exact(pr1) == 3);  // 2n - 3 for an isostatic triangle
  // every row: -d in tail block, +d in head block
  for (int r = 0; r < 3; ++r) {
    const Edge& e = g.edges[r];
    CHECK(pr1.at(r, 2 * e.tail) == -dv[r][0]);
    CHECK(pr1.at(r, 2 * e.head) == dv[r][0]);
  }
}

TEST_CASE("row scaling leaves ranks unchanged") {
  Framework fw = fixtures::three_loops();
  LaurentMatrix sh = build_Shat(fw.graph, edge_vectors(fw));
  LaurentMatrix scaled = sh;
  for (LaurentEntry& e : scaled.rows[1])
    for (Monomial& t : e.terms) t.coeff *= Rat(7, 3);
  for (std::uint64_t N : {1ULL, 2ULL, 3ULL, 4ULL}) {
    CycloContext ctx(N);
    for (const TorsionPoint& w : enumerate_torsion(N, 2, false)) {
      CHECK(rank_exact(evaluate_at(sh, w, ctx)) ==
            rank_exact(evaluate_at(scaled, w, ctx)));
    }
  }
}

TEST_SUITE_END();
