#include <doctest.h>

#include "ultra/cyclotomic.hpp"
#include "ultra/rational.hpp"

using namespace ultra;

namespace {

CycloNumber random_element(const CycloContext& ctx, SplitMix64& rng) {
  CycloNumber a(ctx);
  for (auto& c : a.coeffs()) {
    c = Rat(static_cast<long>(rng.below(41)) - 20,
            static_cast<long>(1 + rng.below(7)));
    c.canonicalize();
  }
  return a;
}

}  // namespace

TEST_SUITE_BEGIN("cyclotomic");

TEST_CASE("zeta powers in the power basis") {
  CycloContext c4(4);
  CHECK(zeta_power(c4, 1).coeffs() == std::vector<Rat>{0, 1});
  CHECK(zeta_power(c4, 2).coeffs() == std::vector<Rat>{-1, 0});  // i^2 = -1
  CycloContext c5(5);
  CHECK(zeta_power(c5, 4).coeffs() == std::vector<Rat>{-1, -1, -1, -1});
  // negative exponents wrap
  CHECK(zeta_power(c4, -1) == zeta_power(c4, 3));
}

TEST_CASE("field arithmetic in Q(zeta_4)") {
  CycloContext ctx(4);
  CycloNumber one(ctx, 1);
  CycloNumber zeta = zeta_power(ctx, 1);
  CycloNumber a = one + zeta;   // 1 + i
  CycloNumber b = one - zeta;   // 1 - i
  CHECK((a * b).coeffs() == std::vector<Rat>{2, 0});
}

TEST_CASE("invert: closed form at N = 3") {
  CycloContext ctx(3);
  CycloNumber zeta = zeta_power(ctx, 1);
  CHECK(zeta.invert().coeffs() == std::vector<Rat>{-1, -1});
  CHECK((zeta * zeta.invert()).coeffs() == std::vector<Rat>{1, 0});
}

TEST_CASE("a * invert(a) = 1 for random elements") {
  for (std::uint64_t N : {4ULL, 6ULL, 12ULL}) {
    CycloContext ctx(N);
    SplitMix64 rng(N * 77 + 1);
    CycloNumber one(ctx, 1);
    for (int t = 0; t < 100; ++t) {
      CycloNumber a = random_element(ctx, rng);
      if (a.is_zero()) continue;
      CHECK(a * a.invert() == one);
    }
  }
  CycloContext ctx(5);
  CHECK_THROWS_AS(CycloNumber(ctx).invert(), std::domain_error);
}

TEST_CASE("zeta is a root of its minimal polynomial") {
  std::vector<std::uint64_t> orders;
  for (std::uint64_t N = 1; N <= 80; ++N) orders.push_back(N);
  for (std::uint64_t N : {105ULL, 128ULL, 210ULL, 256ULL, 360ULL, 500ULL})
    orders.push_back(N);
  for (std::uint64_t N : orders) {
    CycloContext ctx(N);
    CycloNumber zeta = zeta_power(ctx, 1);
    // evaluate m_N at zeta by incremental powers
    CycloNumber acc(ctx, 1);
    CycloNumber val(ctx);
    for (int i = 0; i <= ctx.min_poly().degree(); ++i) {
      val += acc * Rat(ctx.min_poly().c[i]);
      if (i < ctx.min_poly().degree()) acc = acc * zeta;
    }
    REQUIRE(val.is_zero());
    // zeta^{N-1} * zeta = 1 exercises the reduction path
    CycloNumber prod = zeta_power(ctx, static_cast<std::int64_t>(N) - 1) * zeta;
    REQUIRE(prod == CycloNumber(ctx, 1));
  }
}

TEST_CASE("ring axioms, randomized") {
  CycloContext ctx(12);
  SplitMix64 rng(99);
  for (int t = 0; t < 60; ++t) {
    CycloNumber a = random_element(ctx, rng);
    CycloNumber b = random_element(ctx, rng);
    CycloNumber c = random_element(ctx, rng);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("find_modp_context basics") {
  ModPContext mp1 = find_modp_context(1, 62, 7);
  CHECK(mp1.zeta_p == 1);
  CHECK(is_prime_u64(mp1.p));

  ModPContext mp2 = find_modp_context(2, 62, 7);
  CHECK(mp2.zeta_p == mp2.p - 1);  // the element -1
  CHECK(mp2.p % 2 == 1);

  // small-bit test mode: the only prime in [8, 16) with p = 1 mod 12 is 13
  ModPContext mp12 = find_modp_context(12, 4, 3);
  CHECK(mp12.p == 13);
  bool ok = mp12.zeta_p == 2 || mp12.zeta_p == 6 || mp12.zeta_p == 7 ||
            mp12.zeta_p == 11;
  CHECK(ok);
  // exact order 12
  CHECK(powmod(mp12.zeta_p, 12, 13) == 1);
  CHECK(powmod(mp12.zeta_p, 6, 13) != 1);
  CHECK(powmod(mp12.zeta_p, 4, 13) != 1);
}

TEST_CASE("find_modp_context is deterministic in (N, seed, attempt)") {
  ModPContext a = find_modp_context(30, 62, 5, 0);
  ModPContext b = find_modp_context(30, 62, 5, 0);
  CHECK(a.p == b.p);
  CHECK(a.zeta_p == b.zeta_p);
  ModPContext c = find_modp_context(30, 62, 5, 1);
  CHECK((c.p != a.p || c.zeta_p != a.zeta_p));
  CHECK(a.p % 30 == 1);
}

TEST_CASE("project_modp examples") {
  CycloContext c2(2);
  ModPContext mp2 = find_modp_context(2, 62, 1);
  CHECK(project_modp(CycloNumber(c2, 1), mp2) == 1);
  CHECK(project_modp(zeta_power(c2, 1), mp2) == mp2.p - 1);

  // N = 4, p = 13, zeta_p = 5: 1 + zeta -> 6 (mod 13)
  CycloContext c4(4);
  ModPContext mp{4, 13, 5};
  CycloNumber a = CycloNumber(c4, 1) + zeta_power(c4, 1);
  CHECK(project_modp(a, mp) == 6);

  // denominator divisible by p is rejected
  CycloNumber bad(c4);
  bad.coeffs()[0] = Rat(1, 13);
  CHECK_THROWS_AS(project_modp(bad, mp), BadPrimeError);
}

TEST_CASE("project_modp is a ring homomorphism") {
  for (std::uint64_t N : {6ULL, 12ULL, 20ULL}) {
    CycloContext ctx(N);
    ModPContext mp = find_modp_context(N, 62, N);
    SplitMix64 rng(N);
    for (int t = 0; t < 350; ++t) {
      CycloNumber a = random_element(ctx, rng);
      CycloNumber b = random_element(ctx, rng);
      std::uint64_t pa = project_modp(a, mp), pb = project_modp(b, mp);
      CHECK(project_modp(a * b, mp) == mulmod(pa, pb, mp.p));
      CHECK(project_modp(a + b, mp) == (pa + pb) % mp.p);
    }
  }
}

TEST_SUITE_END();
