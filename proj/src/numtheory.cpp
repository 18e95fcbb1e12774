#include "ultra/numtheory.hpp"

#include <algorithm>
#include <stdexcept>

#include <mpfr.h>

namespace ultra {

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize(0)");
  std::vector<std::pair<std::uint64_t, int>> fac;
  auto strip = [&](std::uint64_t p) {
    int a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    if (a) fac.push_back({p, a});
  };
  strip(2);
  strip(3);
  strip(5);
  // 2,3,5 wheel
  static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t p = 7;
  int w = 0;
  while (p * p <= n) {
    strip(p);
    p += wheel[w];
    w = (w + 1) & 7;
  }
  if (n > 1) fac.push_back({n, 1});
  return fac;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = 1;
  for (auto [p, a] : factorize(n)) {
    phi *= p - 1;
    for (int i = 1; i < a; ++i) phi *= p;
  }
  return phi;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> divs{1};
  for (auto [p, a] : factorize(n)) {
    std::size_t sz = divs.size();
    std::uint64_t pk = 1;
    for (int i = 0; i < a; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

void IntPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.c.empty() || b.c.empty()) return {};
  IntPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

IntPoly poly_divexact(const IntPoly& num, const IntPoly& den) {
  if (den.c.empty()) throw std::invalid_argument("division by zero polynomial");
  IntPoly rem = num;
  rem.trim();
  IntPoly quot;
  int dn = den.degree();
  const Int& lead = den.c.back();
  if (rem.degree() >= dn) quot.c.assign(rem.degree() - dn + 1, Int(0));
  while (rem.degree() >= dn && !rem.c.empty()) {
    int k = rem.degree() - dn;
    Int q;
    mpz_divexact(q.get_mpz_t(), rem.c.back().get_mpz_t(), lead.get_mpz_t());
    quot.c[k] = q;
    for (int i = 0; i <= dn; ++i) rem.c[k + i] -= q * den.c[i];
    rem.trim();
  }
  if (!rem.c.empty()) throw std::logic_error("poly_divexact: nonzero remainder");
  quot.trim();
  return quot;
}

IntPoly poly_compose_power(const IntPoly& f, std::uint64_t q) {
  IntPoly r;
  if (f.c.empty()) return r;
  r.c.assign((f.c.size() - 1) * q + 1, Int(0));
  for (std::size_t i = 0; i < f.c.size(); ++i) r.c[i * q] = f.c[i];
  return r;
}

IntPoly cyclotomic_poly(std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("cyclotomic_poly(0)");
  IntPoly m;
  m.c = {Int(-1), Int(1)};  // m_1 = x - 1
  if (N == 1) return m;
  auto fac = factorize(N);
  std::uint64_t radical = 1;
  for (auto [p, a] : fac) {
    // m_{pk} = m_k(x^p) / m_k(x), p a new prime
    m = poly_divexact(poly_compose_power(m, p), m);
    radical *= p;
  }
  // m_{qk} = m_k(x^q) for primes q already dividing k
  if (N / radical > 1) m = poly_compose_power(m, N / radical);
  return m;
}

std::optional<Int> subgroup_index_z2(const std::vector<GammaVector>& vs) {
  if (vs.empty()) return std::nullopt;
  std::vector<std::pair<Int, Int>> v;
  for (const auto& g : vs) {
    if (g.dim() != 2)
      throw std::invalid_argument("subgroup_index_z2 needs Z^2 vectors");
    v.push_back({Int(static_cast<long>(g[0])), Int(static_cast<long>(g[1]))});
  }
  // Step I: zero the first coordinate of every vector after the first.
  for (std::size_t i = 1; i < v.size(); ++i) {
    while (v[i].first != 0) {
      Int q = v[0].first / v[i].first;  // truncated division, Euclid-style
      v[0].first -= q * v[i].first;
      v[0].second -= q * v[i].second;
      std::swap(v[0], v[i]);
    }
  }
  // Step II: the rest are essentially integers; gcd them into v[1].
  Int t = 0;
  for (std::size_t i = 1; i < v.size(); ++i) t = gcd(t, v[i].second);
  // Step III: determinant of the 2x2 with rows v[0], (0, t).
  Int det = v[0].first * t;
  if (det == 0) return std::nullopt;
  return abs(det);
}

std::vector<std::vector<Int>> hnf_basis(const std::vector<GammaVector>& vs,
                                        int d) {
  // Column-style Hermite form: pivots positive, entries right of a pivot
  // reduced into [0, pivot).
  std::vector<std::vector<Int>> cols;
  for (const auto& g : vs) {
    std::vector<Int> c(d);
    for (int i = 0; i < d; ++i) c[i] = Int(static_cast<long>(g[i]));
    cols.push_back(std::move(c));
  }
  int pivot_col = 0;
  for (int row = 0; row < d && pivot_col < static_cast<int>(cols.size());
       ++row) {
    // Reduce all columns >= pivot_col so only one has a nonzero at `row`.
    while (true) {
      int best = -1;
      for (int j = pivot_col; j < static_cast<int>(cols.size()); ++j) {
        if (cols[j][row] == 0) continue;
        if (best == -1 || abs(cols[j][row]) < abs(cols[best][row])) best = j;
      }
      if (best == -1) break;
      std::swap(cols[pivot_col], cols[best]);
      bool done = true;
      for (int j = pivot_col + 1; j < static_cast<int>(cols.size()); ++j) {
        if (cols[j][row] == 0) continue;
        Int q = cols[j][row] / cols[pivot_col][row];
        for (int i = 0; i < d; ++i) cols[j][i] -= q * cols[pivot_col][i];
        if (cols[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[pivot_col][row] == 0) continue;  // row has no pivot
    if (cols[pivot_col][row] < 0)
      for (int i = 0; i < d; ++i) cols[pivot_col][i] = -cols[pivot_col][i];
    ++pivot_col;
  }
  cols.resize(pivot_col);
  // Reduce entries above later pivots so the form is canonical.
  std::vector<int> pivot_row(pivot_col);
  for (int j = 0; j < pivot_col; ++j) {
    int r = 0;
    while (cols[j][r] == 0) ++r;
    pivot_row[j] = r;
  }
  for (int j = 1; j < pivot_col; ++j) {
    for (int i = 0; i < j; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), cols[i][pivot_row[j]].get_mpz_t(),
                 cols[j][pivot_row[j]].get_mpz_t());
      if (q == 0) continue;
      for (int r = 0; r < d; ++r) cols[i][r] -= q * cols[j][r];
    }
  }
  return cols;
}

std::optional<Int> subgroup_index(const std::vector<GammaVector>& vs, int d) {
  if (d == 2) return subgroup_index_z2(vs);
  auto basis = hnf_basis(vs, d);
  if (static_cast<int>(basis.size()) < d) return std::nullopt;
  Int det = 1;
  for (int j = 0; j < d; ++j) {
    int r = 0;
    while (basis[j][r] == 0) ++r;
    det *= basis[j][r];
  }
  return det;
}

namespace {

// C_d at `prec` bits with directed rounding.
void mpfr_constant_Cd(mpfr_t out, int d, mpfr_rnd_t rnd) {
  mpfr_rnd_t inner = rnd;  // all partial factors rounded the same way
  mpfr_t base, exp1, pow1, pow2;
  mpfr_inits2(mpfr_get_prec(out), base, exp1, pow1, pow2, (mpfr_ptr) nullptr);
  // (4/3)^{(d-1)(2d-3)/4}
  mpfr_set_ui(base, 4, inner);
  mpfr_div_ui(base, base, 3, inner);
  mpfr_set_si(exp1, static_cast<long>(d - 1) * (2 * d - 3), inner);
  mpfr_div_ui(exp1, exp1, 4, inner);
  mpfr_pow(pow1, base, exp1, inner);
  // d^{(d-1)/2}
  mpfr_set_ui(base, static_cast<unsigned long>(d), inner);
  mpfr_set_ui(exp1, static_cast<unsigned long>(d - 1), inner);
  mpfr_div_ui(exp1, exp1, 2, inner);
  mpfr_pow(pow2, base, exp1, inner);
  mpfr_mul(out, pow1, pow2, rnd);
  mpfr_clears(base, exp1, pow1, pow2, (mpfr_ptr) nullptr);
}

Rat mpfr_to_rat(const mpfr_t x) {
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, x);
  Rat out(q);
  mpq_clear(q);
  out.canonicalize();
  return out;
}

mpfr_prec_t prec_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(digits * 3.33) + 64;
}

}  // namespace

Rat constant_Cd(int d, int digits) {
  if (d < 2) throw std::invalid_argument("constant_Cd requires d >= 2");
  mpfr_t x;
  mpfr_init2(x, prec_for_digits(digits));
  mpfr_constant_Cd(x, d, MPFR_RNDU);
  Rat out = mpfr_to_rat(x);
  mpfr_clear(x);
  return out;
}

Rat constant_Cd_lower(int d, int digits) {
  if (d < 2) throw std::invalid_argument("constant_Cd requires d >= 2");
  mpfr_t x;
  mpfr_init2(x, prec_for_digits(digits));
  mpfr_constant_Cd(x, d, MPFR_RNDD);
  Rat out = mpfr_to_rat(x);
  mpfr_clear(x);
  return out;
}

Bound bound_N0(int d, const Int& D, const Int& field_degree) {
  if (d < 2) throw std::invalid_argument("bound_N0 requires d >= 2");
  if (D < 0 || field_degree < 1)
    throw std::invalid_argument("bound_N0: D >= 0 and field_degree >= 1");
  Bound b;
  b.d = d;
  b.D = D;

  mpfr_prec_t prec = prec_for_digits(60);
  mpfr_t chat, lg, tmp;
  mpfr_inits2(prec, chat, lg, tmp, (mpfr_ptr) nullptr);

  // C_hat = C_d * field_degree * D, rounded up.
  mpfr_constant_Cd(chat, d, MPFR_RNDU);
  mpfr_mul_z(chat, chat, field_degree.get_mpz_t(), MPFR_RNDU);
  mpfr_mul_z(chat, chat, D.get_mpz_t(), MPFR_RNDU);
  b.C_hat = mpfr_to_rat(chat);

  // (C_hat ln C_hat)^d, natural log, rounded up; nonpositive when
  // C_hat <= 1, in which case the floor wins anyway.
  Int formula = 0;
  if (mpfr_cmp_ui(chat, 1) > 0) {
    mpfr_log(lg, chat, MPFR_RNDU);
    mpfr_mul(tmp, chat, lg, MPFR_RNDU);
    mpfr_pow_ui(tmp, tmp, static_cast<unsigned long>(d), MPFR_RNDU);
    mpfr_ceil(tmp, tmp);
    Int v;
    mpfr_get_z(v.get_mpz_t(), tmp, MPFR_RNDU);
    formula = v;
  }
  mpfr_clears(chat, lg, tmp, (mpfr_ptr) nullptr);

  Int floor_val;
  if (d <= 3) {
    floor_val = 8500;
  } else {
    floor_val = Int(256) * d * d * d * d;
  }
  b.N0 = std::max(floor_val, formula);
  return b;
}

FilterResult phi_filter(std::uint64_t N, const Bound& bound) {
  if (N == 1) return FilterResult::Check;
  // phi(N)^d > C_hat^d * N^{d-1}, with C_hat already an upper bound.
  Int phi_d = 1;
  Int phi_n(static_cast<unsigned long>(euler_phi(N)));
  for (int i = 0; i < bound.d; ++i) phi_d *= phi_n;
  Rat rhs = 1;
  for (int i = 0; i < bound.d; ++i) rhs *= bound.C_hat;
  Int n_pow = 1;
  for (int i = 0; i < bound.d - 1; ++i) n_pow *= Int(static_cast<unsigned long>(N));
  rhs *= Rat(n_pow);
  return Rat(phi_d) > rhs ? FilterResult::Skip : FilterResult::Check;
}

}  // namespace ultra
