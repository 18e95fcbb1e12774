#include <doctest.h>

#include "support/oracles.hpp"
#include "ultra/numtheory.hpp"

using namespace ultra;

TEST_SUITE_BEGIN("numtheory");

TEST_CASE("factorize, phi, divisors") {
  CHECK(euler_phi(1) == 1);
  CHECK(divisors(1) == std::vector<std::uint64_t>{1});
  CHECK(euler_phi(12) == 4);
  CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(euler_phi(97) == 96);
  auto fac = factorize(360);
  CHECK(fac == std::vector<std::pair<std::uint64_t, int>>{
                   {2, 3}, {3, 2}, {5, 1}});
}

TEST_CASE("cyclotomic polynomials: small cases") {
  CHECK(cyclotomic_poly(1).c == std::vector<Int>{-1, 1});
  CHECK(cyclotomic_poly(2).c == std::vector<Int>{1, 1});
  CHECK(cyclotomic_poly(4).c == std::vector<Int>{1, 0, 1});
  // m_6 = m_3(x^2)/m_3(x) by exact division
  IntPoly m3 = cyclotomic_poly(3);
  IntPoly m6_expected = poly_divexact(poly_compose_power(m3, 2), m3);
  CHECK(cyclotomic_poly(6).c == m6_expected.c);
  CHECK(cyclotomic_poly(6).c == std::vector<Int>{1, -1, 1});
}

TEST_CASE("product of cyclotomics is x^N - 1, degree is phi") {
  for (std::uint64_t N = 1; N <= 200; ++N) {
    IntPoly prod;
    prod.c = {Int(1)};
    for (std::uint64_t e : divisors(N))
      prod = poly_mul(prod, cyclotomic_poly(e));
    IntPoly expected;
    expected.c.assign(N + 1, Int(0));
    expected.c[0] = -1;
    expected.c[N] = 1;
    REQUIRE(prod.c == expected.c);
    REQUIRE(cyclotomic_poly(N).degree() == static_cast<int>(euler_phi(N)));
  }
}

TEST_CASE("subgroup index: examples") {
  auto idx = [](std::vector<GammaVector> vs) { return subgroup_index(vs, 2); };
  CHECK(idx({{1, 0}, {0, 1}}) == Int(1));
  CHECK(idx({{2, 0}, {0, 3}}) == Int(6));
  CHECK(!idx({{2, 4}, {1, 2}}).has_value());  // collinear
  CHECK(idx({{2, 1}, {4, 3}}) == Int(2));
  CHECK(!idx({}).has_value());
  CHECK(!idx({{3, 6}}).has_value());
}

TEST_CASE("subgroup index equals |det| for independent pairs") {
  for (std::int64_t a = -10; a <= 10; a += 3)
    for (std::int64_t b = -10; b <= 10; b += 2)
      for (std::int64_t c = -10; c <= 10; c += 2)
        for (std::int64_t d = -10; d <= 10; d += 3) {
          Int det = Int(static_cast<long>(a * d - b * c));
          auto got = subgroup_index_z2({{a, b}, {c, d}});
          if (det == 0)
            CHECK(!got.has_value());
          else
            CHECK(*got == abs(det));
        }
}

TEST_CASE("subgroup index agrees with coset counting") {
  // smaller sweep than the acceptance criterion, same oracle
  for (std::int64_t a = -4; a <= 4; ++a)
    for (std::int64_t b = -4; b <= 4; ++b)
      for (std::int64_t c = -4; c <= 4; ++c)
        for (std::int64_t d = -4; d <= 4; ++d) {
          GammaVector v{a, b}, w{c, d};
          auto counted = oracles::coset_count_z2(v, w, 40);
          auto got = subgroup_index_z2({v, w});
          if (counted) {
            REQUIRE(got.has_value());
            REQUIRE(*got == Int(static_cast<unsigned long>(*counted)));
          } else {
            REQUIRE((!got || *got > 40));
          }
        }
}

TEST_CASE("hnf basis canonical forms") {
  auto basis = hnf_basis({{2, 3}}, 2);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == std::vector<Int>{2, 3});
  // invariant under generator order and sign
  auto b1 = hnf_basis({{1, 0}, {0, 1}, {3, 5}}, 2);
  auto b2 = hnf_basis({{3, 5}, {0, -1}, {-1, 0}}, 2);
  CHECK(b1 == b2);
  CHECK(hnf_basis({}, 2).empty());
}

TEST_CASE("constant C_d brackets") {
  // closed form (4/3)^{(d-1)(2d-3)/4} d^{(d-1)/2}
  Rat c2u = constant_Cd(2), c2l = constant_Cd_lower(2);
  CHECK(c2l <= c2u);
  CHECK(c2u - c2l < Rat(1, 1000000));
  CHECK(c2l > Rat(15196, 10000));
  CHECK(c2u < Rat(15198, 10000));
  Rat c3 = constant_Cd(3);
  CHECK(c3 > Rat(46187, 10000));
  CHECK(c3 < Rat(46190, 10000));
  Rat c4 = constant_Cd(4);
  CHECK(c4 > Rat(234, 10));
  CHECK(c4 < Rat(236, 10));
}

TEST_CASE("bound N0: floors and formula") {
  Bound b = bound_N0(2, 4);
  CHECK(b.N0 == 8500);
  CHECK(b.C_hat > Rat(607, 100));
  CHECK(b.C_hat < Rat(609, 100));

  CHECK(bound_N0(2, 0).N0 == 8500);
  CHECK(bound_N0(3, 1).N0 == 8500);  // (C_3 ln C_3)^3 ~ 353 stays under
  CHECK(bound_N0(3, 10).N0 > 8500);  // ~5.5e6: the formula wins here
  CHECK(bound_N0(4, 0).N0 == Int(256) * 4 * 4 * 4 * 4);
  CHECK(bound_N0(5, 0).N0 == Int(256) * 5 * 5 * 5 * 5);

  // d=2, D=10000: N0 = (C_hat ln C_hat)^2 ~ 2.15e10
  Bound big = bound_N0(2, 10000);
  CHECK(big.N0 > Int("20000000000"));
  CHECK(big.N0 < Int("23000000000"));
}

TEST_CASE("bound N0 monotone in D and field degree") {
  Int prev = 0;
  for (int D : {0, 1, 10, 100, 1000, 20000}) {
    Bound b = bound_N0(2, D);
    CHECK(b.N0 >= prev);
    prev = b.N0;
  }
  CHECK(bound_N0(2, 500, 2).N0 >= bound_N0(2, 500, 1).N0);
  CHECK(bound_N0(3, 500, 7).N0 >= bound_N0(3, 500, 3).N0);
}

TEST_CASE("phi filter") {
  Bound b = bound_N0(2, 4);  // C_hat ~ 6.08
  CHECK(phi_filter(1, b) == FilterResult::Check);
  CHECK(phi_filter(2310, b) == FilterResult::Skip);  // phi = 480 > 6.08 sqrt(2310)
  CHECK(phi_filter(210, b) == FilterResult::Check);  // phi = 48 <= ~88
  // exact boundary arithmetic: phi(N)^2 vs C_hat^2 N
  for (std::uint64_t N : {2ULL, 6ULL, 30ULL, 100ULL, 1000ULL, 8500ULL}) {
    Rat lhs(Int(static_cast<unsigned long>(euler_phi(N))) *
            Int(static_cast<unsigned long>(euler_phi(N))));
    Rat rhs = b.C_hat * b.C_hat * Rat(static_cast<unsigned long>(N));
    bool skip_expected = lhs > rhs;
    CHECK((phi_filter(N, b) == FilterResult::Skip) == skip_expected);
  }
  // D = 0 skips everything except N = 1
  Bound zero = bound_N0(2, 0);
  CHECK(phi_filter(1, zero) == FilterResult::Check);
  CHECK(phi_filter(2, zero) == FilterResult::Skip);
}

TEST_SUITE_END();
