#include "ultra/cyclotomic.hpp"

#include <algorithm>

namespace ultra {

CycloContext::CycloContext(std::uint64_t N) : N_(N) {
  if (N == 0) throw std::invalid_argument("CycloContext order must be >= 1");
  min_poly_ = cyclotomic_poly(N);
  phi_ = static_cast<std::uint64_t>(min_poly_.degree());
  // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1}),
  // subsequent rows by shift-and-reduce.
  if (phi_ >= 1) {
    std::vector<Int> row(phi_);
    for (std::uint64_t i = 0; i < phi_; ++i) row[i] = -min_poly_.c[i];
    table_.push_back(row);
    for (std::uint64_t k = phi_ + 1; k + 1 <= 2 * phi_ - 1; ++k) {
      const std::vector<Int>& prev = table_.back();
      std::vector<Int> next(phi_);
      Int overflow = prev[phi_ - 1];
      for (std::uint64_t i = phi_ - 1; i >= 1; --i) next[i] = prev[i - 1];
      next[0] = 0;
      if (overflow != 0)
        for (std::uint64_t i = 0; i < phi_; ++i)
          next[i] += overflow * table_[0][i];
      table_.push_back(std::move(next));
    }
  }
}

bool CycloNumber::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

CycloNumber CycloNumber::operator+(const CycloNumber& o) const {
  CycloNumber r(*this);
  r += o;
  return r;
}

CycloNumber CycloNumber::operator-(const CycloNumber& o) const {
  CycloNumber r(*this);
  r -= o;
  return r;
}

CycloNumber& CycloNumber::operator+=(const CycloNumber& o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycloNumber& CycloNumber::operator-=(const CycloNumber& o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycloNumber CycloNumber::operator*(const Rat& s) const {
  CycloNumber r(*this);
  for (auto& c : r.coeffs_) c *= s;
  return r;
}

CycloNumber CycloNumber::operator*(const CycloNumber& o) const {
  const CycloContext& ctx = *ctx_;
  std::uint64_t phi = ctx.phi();
  std::vector<Rat> conv(2 * phi - 1);
  for (std::uint64_t i = 0; i < phi; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::uint64_t j = 0; j < phi; ++j) {
      if (o.coeffs_[j] == 0) continue;
      conv[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  CycloNumber r(ctx);
  for (std::uint64_t i = 0; i < phi; ++i) r.coeffs_[i] = conv[i];
  for (std::uint64_t k = phi; k <= 2 * phi - 2; ++k) {
    if (conv[k] == 0) continue;
    const std::vector<Int>& row = ctx.reduction_row(k);
    for (std::uint64_t i = 0; i < phi; ++i) {
      if (row[i] != 0) r.coeffs_[i] += conv[k] * Rat(row[i]);
    }
  }
  return r;
}

namespace {

// Polynomials over Q for the extended Euclid behind invert().
using RatPoly = std::vector<Rat>;

void rp_trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  rp_trim(r);
  return r;
}

RatPoly rp_sub(const RatPoly& a, const RatPoly& b) {
  RatPoly r = a;
  if (b.size() > r.size()) r.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  rp_trim(r);
  return r;
}

// a = q*b + r
std::pair<RatPoly, RatPoly> rp_divmod(RatPoly a, const RatPoly& b) {
  RatPoly q;
  if (a.size() >= b.size()) q.resize(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t k = a.size() - b.size();
    q[k] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] -= f * b[i];
    rp_trim(a);
  }
  return {q, a};
}

}  // namespace

CycloNumber CycloNumber::invert() const {
  if (is_zero()) throw std::domain_error("CycloNumber: division by zero");
  const CycloContext& ctx = *ctx_;
  // Extended Euclid for gcd(a, m_N) = 1 over Q[x]; m_N irreducible so the
  // gcd is a nonzero constant.
  RatPoly r0, r1 = coeffs_;
  rp_trim(r1);
  for (const Int& c : ctx.min_poly().c) r0.push_back(Rat(c));
  RatPoly s0{}, s1{Rat(1)};  // coefficients of `a` in r0, r1
  while (r1.size() > 1) {
    auto [q, rem] = rp_divmod(r0, r1);
    RatPoly s_next = rp_sub(s0, rp_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s_next);
  }
  if (r1.empty()) throw std::logic_error("invert: gcd degenerated");
  Rat lead = r1[0];
  CycloNumber out(ctx);
  for (std::size_t i = 0; i < s1.size() && i < out.coeffs_.size(); ++i)
    out.coeffs_[i] = s1[i] / lead;
  return out;
}

std::size_t CycloNumber::cost() const {
  std::size_t c = 0;
  for (const auto& q : coeffs_) {
    if (q == 0) continue;
    c += mpz_size(q.get_num().get_mpz_t()) + mpz_size(q.get_den().get_mpz_t());
  }
  return c;
}

CycloNumber zeta_power(const CycloContext& ctx, std::int64_t k) {
  std::int64_t N = static_cast<std::int64_t>(ctx.order());
  std::int64_t e = k % N;
  if (e < 0) e += N;
  std::uint64_t ue = static_cast<std::uint64_t>(e);
  CycloNumber out(ctx);
  if (ue < ctx.phi()) {
    out.coeffs()[ue] = 1;
    return out;
  }
  if (ue <= 2 * ctx.phi() - 2) {
    const auto& row = ctx.reduction_row(ue);
    for (std::uint64_t i = 0; i < ctx.phi(); ++i) out.coeffs()[i] = Rat(row[i]);
    return out;
  }
  // Square-and-multiply on the field.
  CycloNumber base(ctx);
  if (ctx.phi() > 1)
    base.coeffs()[1] = 1;
  else
    base.coeffs()[0] = Rat(ctx.order() == 1 ? 1 : -1);  // zeta_1=1, zeta_2=-1
  CycloNumber acc(ctx, Rat(1));
  while (ue > 0) {
    if (ue & 1) acc = acc * base;
    ue >>= 1;
    if (ue) base = base * base;
  }
  return acc;
}

// ---------------------------------------------------------------------------

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  // m prime in all uses.
  return powmod(a % m, m - 2, m);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit inputs with these witnesses.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

ModPContext find_modp_context(std::uint64_t N, unsigned bits,
                              std::uint64_t seed, std::uint64_t attempt) {
  if (bits < 3 || bits > 63)
    throw std::invalid_argument("find_modp_context: bits out of range");
  std::uint64_t lo = 1ULL << (bits - 1);
  std::uint64_t hi = (bits == 63) ? UINT64_MAX / 2 : (1ULL << bits);
  if (N >= hi) throw std::invalid_argument("find_modp_context: N too large");
  SplitMix64 rng(hash_combine(hash_combine(seed, N), attempt));
  auto fac = factorize(N);
  std::uint64_t k_lo = lo / N + 1;
  std::uint64_t k_hi = (hi - 2) / N;
  if (k_hi < k_lo) k_hi = k_lo;
  for (int tries = 0; tries < 2000000; ++tries) {
    std::uint64_t k = k_lo + rng.below(k_hi - k_lo + 1);
    std::uint64_t p = k * N + 1;
    if (p < lo || p >= hi || !is_prime_u64(p)) continue;
    for (int g_try = 0; g_try < 64; ++g_try) {
      std::uint64_t g = 2 + rng.below(p - 3);
      std::uint64_t z = powmod(g, (p - 1) / N, p);
      if (z == 1 && N > 1) continue;
      bool exact = true;
      for (auto [q, a] : fac) {
        (void)a;
        if (powmod(z, N / q, p) == 1) {
          exact = false;
          break;
        }
      }
      if (!exact) continue;
      return ModPContext{N, p, N == 1 ? 1 : z};
    }
  }
  throw std::runtime_error("find_modp_context: retry cap exceeded");
}

std::uint64_t rat_modp(const Rat& q, std::uint64_t p) {
  Int num = q.get_num();
  Int den = q.get_den();
  std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
  if (d == 0) throw BadPrimeError("denominator divisible by p");
  std::uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), p);
  return mulmod(n, invmod(d, p), p);
}

std::uint64_t project_modp(const CycloNumber& a, const ModPContext& mp) {
  // Horner at zeta_p.
  const auto& cs = a.coeffs();
  std::uint64_t acc = 0;
  for (std::size_t i = cs.size(); i-- > 0;) {
    acc = mulmod(acc, mp.zeta_p, mp.p);
    acc = (acc + rat_modp(cs[i], mp.p)) % mp.p;
  }
  return acc;
}

}  // namespace ultra
