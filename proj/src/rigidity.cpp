#include "ultra/rigidity.hpp"

#include <algorithm>
#include <sstream>

namespace ultra {

namespace {

std::string vertex_label(int v, int coord) {
  std::ostringstream os;
  os << "v" << v << "." << coord;
  return os.str();
}

std::string lattice_label(int a, int k) {
  std::ostringstream os;
  os << "M(" << a << "," << k << ")";
  return os.str();
}

}  // namespace

RationalMatrix build_S(const ColoredGraph& g,
                       const std::vector<RatVec>& dvecs) {
  const int d = g.d, n = g.n_vertices, m = g.n_edges();
  RationalMatrix S;
  S.rows = m;
  S.cols = d * n + d * d;
  S.data.assign(static_cast<std::size_t>(S.rows) * S.cols, Rat(0));
  for (int v = 0; v < n; ++v)
    for (int a = 0; a < d; ++a) S.col_labels.push_back(vertex_label(v, a));
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a) S.col_labels.push_back(lattice_label(a, k));
  for (int r = 0; r < m; ++r) {
    const Edge& e = g.edges[r];
    const RatVec& dv = dvecs[r];
    std::ostringstream os;
    os << "e" << r;
    S.row_labels.push_back(os.str());
    for (int a = 0; a < d; ++a) {
      S.at(r, e.tail * d + a) -= dv[a];
      S.at(r, e.head * d + a) += dv[a];  // cancels on loops
    }
    // Lattice unknown M flattened column-major: column group k holds the
    // k-th column of M, so the coefficient of M(a,k) is gamma_k * d_a.
    for (int k = 0; k < d; ++k) {
      if (e.color[k] == 0) continue;
      Rat gk(static_cast<long>(e.color[k]));
      for (int a = 0; a < d; ++a)
        S.at(r, d * n + k * d + a) += gk * dv[a];
    }
  }
  return S;
}

LaurentMatrix build_Shat(const ColoredGraph& g,
                         const std::vector<RatVec>& dvecs) {
  LaurentMatrix sh;
  sh.d = g.d;
  sh.n = g.n_vertices;
  sh.m = g.n_edges();
  sh.rows.resize(sh.m);
  for (int r = 0; r < sh.m; ++r) {
    const Edge& e = g.edges[r];
    const RatVec& dv = dvecs[r];
    for (int a = 0; a < g.d; ++a) {
      if (dv[a] == 0) continue;
      if (e.tail == e.head) {
        // d * (x^{-gamma} - 1); the two terms collapse when gamma = 0.
        if (e.color.is_zero()) continue;
        LaurentEntry entry;
        entry.col = e.tail * g.d + a;
        entry.terms.push_back({dv[a], -e.color});
        entry.terms.push_back({-dv[a], GammaVector(g.d)});
        sh.rows[r].push_back(std::move(entry));
      } else {
        LaurentEntry tail_entry;
        tail_entry.col = e.tail * g.d + a;
        tail_entry.terms.push_back({-dv[a], GammaVector(g.d)});
        sh.rows[r].push_back(std::move(tail_entry));
        LaurentEntry head_entry;
        head_entry.col = e.head * g.d + a;
        head_entry.terms.push_back({dv[a], -e.color});
        sh.rows[r].push_back(std::move(head_entry));
      }
    }
  }
  return sh;
}

CycloMatrix evaluate_at(const LaurentMatrix& shat, const TorsionPoint& omega,
                        const CycloContext& ctx) {
  if (ctx.order() != omega.N)
    throw std::invalid_argument("evaluate_at: context order mismatch");
  CycloMatrix out;
  out.rows = shat.m;
  out.cols = shat.cols();
  out.data.assign(static_cast<std::size_t>(out.rows) * out.cols,
                  CycloNumber(ctx));
  for (int r = 0; r < shat.m; ++r) {
    for (const LaurentEntry& entry : shat.rows[r]) {
      CycloNumber v(ctx);
      for (const Monomial& t : entry.terms) {
        std::uint64_t e = dot_mod(omega.k, t.exp, omega.N);
        v += zeta_power(ctx, static_cast<std::int64_t>(e)) * t.coeff;
      }
      out.at(r, entry.col) += v;
    }
  }
  return out;
}

RationalMatrix evaluate_at_one(const LaurentMatrix& shat) {
  RationalMatrix out;
  out.rows = shat.m;
  out.cols = shat.cols();
  out.data.assign(static_cast<std::size_t>(out.rows) * out.cols, Rat(0));
  for (int r = 0; r < shat.m; ++r)
    for (const LaurentEntry& entry : shat.rows[r])
      for (const Monomial& t : entry.terms) out.at(r, entry.col) += t.coeff;
  return out;
}

RationalMatrix augment_fixed_volume(const RationalMatrix& S,
                                    const RatMatrixData& L) {
  const int d = static_cast<int>(L.size());
  RatMatrixData Linv = invert_matrix(L);  // throws on singular L
  RationalMatrix out = S;
  out.rows += 1;
  out.data.resize(static_cast<std::size_t>(out.rows) * out.cols, Rat(0));
  out.row_labels.push_back("tr(L^-1 M)=0");
  const int base = out.cols - d * d;
  // tr(L^{-1} M) = sum_{k,a} (L^{-1})_{k,a} M(a,k): spread (L^{-1})^T over
  // the column-major lattice block.
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      out.at(out.rows - 1, base + k * d + a) = Linv[k][a];
  return out;
}

namespace {

// Forward elimination over an exact field; pivots chosen by smallest
// representation cost to limit coefficient growth.
template <class T, class Ops>
int rank_gauss(int rows, int cols, std::vector<T>& a, const Ops& ops) {
  auto at = [&](int r, int c) -> T& {
    return a[static_cast<std::size_t>(r) * cols + c];
  };
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    std::size_t best_cost = 0;
    for (int r = rank; r < rows; ++r) {
      if (ops.is_zero(at(r, c))) continue;
      std::size_t cost = ops.cost(at(r, c));
      if (pivot == -1 || cost < best_cost) {
        pivot = r;
        best_cost = cost;
      }
    }
    if (pivot == -1) continue;
    if (pivot != rank)
      for (int k = c; k < cols; ++k) std::swap(at(pivot, k), at(rank, k));
    T inv_pivot = ops.inverse(at(rank, c));
    for (int r = rank + 1; r < rows; ++r) {
      if (ops.is_zero(at(r, c))) continue;
      T factor = ops.mul(at(r, c), inv_pivot);
      for (int k = c; k < cols; ++k)
        ops.submul(at(r, k), factor, at(rank, k));
    }
    ++rank;
  }
  return rank;
}

struct RatOps {
  bool is_zero(const Rat& x) const { return x == 0; }
  std::size_t cost(const Rat& x) const {
    return mpz_size(x.get_num().get_mpz_t()) +
           mpz_size(x.get_den().get_mpz_t());
  }
  Rat inverse(const Rat& x) const { return 1 / x; }
  Rat mul(const Rat& x, const Rat& y) const { return x * y; }
  void submul(Rat& x, const Rat& f, const Rat& y) const { x -= f * y; }
};

struct CycloOps {
  bool is_zero(const CycloNumber& x) const { return x.is_zero(); }
  std::size_t cost(const CycloNumber& x) const { return x.cost(); }
  CycloNumber inverse(const CycloNumber& x) const { return x.invert(); }
  CycloNumber mul(const CycloNumber& x, const CycloNumber& y) const {
    return x * y;
  }
  void submul(CycloNumber& x, const CycloNumber& f,
              const CycloNumber& y) const {
    x -= f * y;
  }
};

}  // namespace

int rank_exact(RationalMatrix m) {
  return rank_gauss(m.rows, m.cols, m.data, RatOps{});
}

int rank_exact(CycloMatrix m) {
  return rank_gauss(m.rows, m.cols, m.data, CycloOps{});
}

MontgomeryDomain::MontgomeryDomain(std::uint64_t prime) : p(prime) {
  // Newton iteration for p^{-1} mod 2^64 (p odd).
  std::uint64_t inv = p;
  for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
  p_neg_inv = -inv;
  // 2^128 mod p via repeated doubling of 2^64 mod p.
  using u128 = unsigned __int128;
  r2 = static_cast<std::uint64_t>(((u128(1) << 64) % p));
  u128 acc = r2;
  acc = acc * r2 % p;  // (2^64)^2 = 2^128
  r2 = static_cast<std::uint64_t>(acc);
}

ShatModP::ShatModP(const LaurentMatrix& shat, const ModPContext& mp)
    : mp_(mp), dom_(mp.p), m_(shat.m), cols_(shat.cols()) {
  const std::uint64_t N = mp.N;
  for (int r = 0; r < shat.m; ++r) {
    for (const LaurentEntry& entry : shat.rows[r]) {
      for (const Monomial& t : entry.terms) {
        Term term;
        term.row = r;
        term.col = entry.col;
        term.c = dom_.to(rat_modp(t.coeff, mp.p));
        term.exp.resize(t.exp.dim());
        for (std::size_t i = 0; i < t.exp.dim(); ++i) {
          std::int64_t e = t.exp[i] % static_cast<std::int64_t>(N);
          if (e < 0) e += static_cast<std::int64_t>(N);
          term.exp[i] = static_cast<std::uint64_t>(e);
        }
        terms_.push_back(std::move(term));
      }
    }
  }
  zeta_pow_.resize(N);
  std::uint64_t z = dom_.to(1);
  std::uint64_t zeta_m = dom_.to(mp.zeta_p);
  for (std::uint64_t e = 0; e < N; ++e) {
    zeta_pow_[e] = z;
    z = dom_.mul(z, zeta_m);
  }
}

int ShatModP::rank_at(const std::vector<std::uint64_t>& k,
                      std::vector<std::uint64_t>& a) const {
  const MontgomeryDomain& D = dom_;
  const std::uint64_t N = mp_.N;
  a.assign(static_cast<std::size_t>(m_) * cols_, 0);
  for (const Term& t : terms_) {
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < t.exp.size(); ++i) e += k[i] * t.exp[i];
    std::uint64_t v = D.mul(t.c, zeta_pow_[e % N]);
    std::uint64_t& cell = a[static_cast<std::size_t>(t.row) * cols_ + t.col];
    cell = D.add(cell, v);
  }
  // Division-free elimination: row_j <- pivot * row_j - a_jc * row_pivot.
  int rank = 0;
  for (int c = 0; c < cols_ && rank < m_; ++c) {
    int pivot = -1;
    for (int r = rank; r < m_; ++r) {
      if (a[static_cast<std::size_t>(r) * cols_ + c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == -1) continue;
    if (pivot != rank)
      for (int x = c; x < cols_; ++x)
        std::swap(a[static_cast<std::size_t>(pivot) * cols_ + x],
                  a[static_cast<std::size_t>(rank) * cols_ + x]);
    const std::uint64_t pv = a[static_cast<std::size_t>(rank) * cols_ + c];
    const std::uint64_t* prow = &a[static_cast<std::size_t>(rank) * cols_];
    for (int r = rank + 1; r < m_; ++r) {
      std::uint64_t* row = &a[static_cast<std::size_t>(r) * cols_];
      std::uint64_t f = row[c];
      if (f == 0) continue;
      row[c] = 0;
      for (int x = c + 1; x < cols_; ++x)
        row[x] = D.sub(D.mul(row[x], pv), D.mul(f, prow[x]));
    }
    ++rank;
  }
  return rank;
}

int ShatModP::rank_at(const std::vector<std::uint64_t>& k) const {
  std::vector<std::uint64_t> scratch;
  return rank_at(k, scratch);
}

int rank_modp(const LaurentMatrix& shat, const TorsionPoint& omega,
              const ModPContext& mp) {
  if (mp.N != omega.N)
    throw std::invalid_argument("rank_modp: prime context order mismatch");
  return ShatModP(shat, mp).rank_at(omega.k);
}

std::vector<RatVec> apply_affine(const std::vector<RatVec>& dvecs,
                                 const RatMatrixData& A) {
  if (det_exact(A) == 0)
    throw std::invalid_argument("apply_affine: singular matrix");
  const int d = static_cast<int>(A.size());
  std::vector<RatVec> out;
  out.reserve(dvecs.size());
  for (const RatVec& v : dvecs) {
    RatVec w(d, Rat(0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[i] += A[i][j] * v[j];
    out.push_back(std::move(w));
  }
  return out;
}

Rat det_exact(const RatMatrixData& A) {
  const int n = static_cast<int>(A.size());
  RatMatrixData a = A;
  Rat det = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot == -1) return Rat(0);
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rat f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

RatMatrixData invert_matrix(const RatMatrixData& A) {
  const int n = static_cast<int>(A.size());
  RatMatrixData a = A;
  RatMatrixData inv(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot == -1)
      throw std::invalid_argument("invert_matrix: singular matrix");
    std::swap(a[pivot], a[c]);
    std::swap(inv[pivot], inv[c]);
    Rat pv = a[c][c];
    for (int k = 0; k < n; ++k) {
      a[c][k] /= pv;
      inv[c][k] /= pv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace ultra
