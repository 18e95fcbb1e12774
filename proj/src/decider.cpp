#include "ultra/decider.hpp"

#include <algorithm>
#include <omp.h>

#include "ultra/cyclotomic.hpp"

namespace ultra {

std::string model_name(Model m) {
  switch (m) {
    case Model::FlexibleLattice: return "flexible";
    case Model::FixedLattice: return "fixed-lattice";
    case Model::FixedVolume: return "fixed-volume";
  }
  return "?";
}

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Ultrarigid: return "ultrarigid";
    case VerdictKind::NotPeriodicallyRigid: return "not-periodically-rigid";
    case VerdictKind::TorsionFlexible: return "torsion-flexible";
  }
  return "?";
}

std::uint64_t count_torsion(std::uint64_t N, int d, bool galois_reduced) {
  std::uint64_t rest = 1;
  for (int i = 1; i < d; ++i) rest *= N;
  std::uint64_t first = galois_reduced
                            ? static_cast<std::uint64_t>(divisors(N).size())
                            : N;
  return first * rest - 1;  // omega = 1 is omitted
}

namespace {

// Decodes a flat index into the k-tuple of the order-N context.  The first
// coordinate runs over divisors (reduced) or [0, N) (unreduced), the rest
// over [0, N)^{d-1} in lexicographic order.
struct PointCodec {
  std::uint64_t N;
  int d;
  std::vector<std::uint64_t> firsts;  // values taken by k_1, in scan order
  std::uint64_t rest_span;            // N^{d-1}

  PointCodec(std::uint64_t N_, int d_, bool reduced) : N(N_), d(d_) {
    if (reduced) {
      for (std::uint64_t e : divisors(N)) firsts.push_back(e % N);
    } else {
      for (std::uint64_t v = 0; v < N; ++v) firsts.push_back(v);
    }
    rest_span = 1;
    for (int i = 1; i < d; ++i) rest_span *= N;
  }

  std::uint64_t span() const { return firsts.size() * rest_span; }

  // False when the index encodes omega = 1 (the single skipped slot).
  bool decode(std::uint64_t idx, std::vector<std::uint64_t>& k) const {
    k.assign(d, 0);
    k[0] = firsts[idx / rest_span];
    std::uint64_t rest = idx % rest_span;
    for (int i = d - 1; i >= 1; --i) {
      k[i] = rest % N;
      rest /= N;
    }
    for (int i = 0; i < d; ++i)
      if (k[i] % N != 0) return true;
    return false;
  }
};

}  // namespace

std::vector<TorsionPoint> enumerate_torsion(std::uint64_t N, int d,
                                            bool galois_reduced) {
  PointCodec codec(N, d, galois_reduced);
  std::vector<TorsionPoint> out;
  std::vector<std::uint64_t> k;
  for (std::uint64_t idx = 0; idx < codec.span(); ++idx) {
    if (!codec.decode(idx, k)) continue;
    out.push_back(TorsionPoint{N, k});
  }
  return out;
}

namespace {

struct BaseTest {
  BaseRankReport report;
  RationalMatrix S;
};

BaseRankReport base_rank_test(const Framework& fw, Model model,
                              const std::vector<RatVec>& dvecs,
                              const LaurentMatrix& shat) {
  const ColoredGraph& g = fw.graph;
  const int dn = g.d * g.n_vertices;
  const int flex_required = dn + g.d * (g.d - 1) / 2;
  BaseRankReport rep;
  RationalMatrix S = build_S(g, dvecs);
  rep.rank_S = rank_exact(S);
  rep.rank_Shat_at_one = rank_exact(evaluate_at_one(shat));
  bool lattice_ok = det_exact(fw.lattice) != 0;
  if (lattice_ok)
    rep.rank_S_fixed_volume = rank_exact(augment_fixed_volume(S, fw.lattice));
  switch (model) {
    case Model::FlexibleLattice:
      rep.required = flex_required;
      rep.passed = rep.rank_S == rep.required;
      break;
    case Model::FixedVolume:
      if (!lattice_ok)
        throw std::invalid_argument(
            "fixed-volume model requires a nonsingular lattice");
      rep.required = flex_required;
      rep.passed = *rep.rank_S_fixed_volume == rep.required;
      break;
    case Model::FixedLattice:
      rep.required = dn - g.d;
      rep.passed = rep.rank_Shat_at_one == rep.required;
      break;
  }
  return rep;
}

struct Candidate {
  std::vector<std::uint64_t> k;
  bool operator<(const Candidate& o) const { return k < o.k; }
};

// Mod-p sweep of one order-N context; returns the (possibly false-alarm)
// deficient points.  Shared by the serial reference and the OpenMP path.
std::vector<Candidate> sweep_modp_serial(const ShatModP& modp,
                                         const PointCodec& codec, int dn) {
  std::vector<Candidate> out;
  std::vector<std::uint64_t> k, scratch;
  for (std::uint64_t idx = 0; idx < codec.span(); ++idx) {
    if (!codec.decode(idx, k)) continue;
    if (modp.rank_at(k, scratch) < dn) out.push_back({k});
  }
  return out;
}

std::vector<Candidate> sweep_modp_parallel(const ShatModP& modp,
                                           const PointCodec& codec, int dn,
                                           int threads) {
  std::vector<Candidate> out;
#pragma omp parallel num_threads(threads)
  {
    std::vector<Candidate> local;
    std::vector<std::uint64_t> k, scratch;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t idx = 0;
         idx < static_cast<std::int64_t>(codec.span()); ++idx) {
      if (!codec.decode(static_cast<std::uint64_t>(idx), k)) continue;
      if (modp.rank_at(k, scratch) < dn) local.push_back({k});
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  return out;
}

// Exact sweep used when the mod-p fast path is disabled.
std::vector<Candidate> sweep_exact(const LaurentMatrix& shat,
                                   const PointCodec& codec, int dn) {
  CycloContext ctx(codec.N);
  std::vector<Candidate> out;
  std::vector<std::uint64_t> k;
  for (std::uint64_t idx = 0; idx < codec.span(); ++idx) {
    if (!codec.decode(idx, k)) continue;
    if (rank_exact(evaluate_at(shat, TorsionPoint{codec.N, k}, ctx)) < dn)
      out.push_back({k});
  }
  return out;
}

ShatModP make_modp(const LaurentMatrix& shat, std::uint64_t N,
                   std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    try {
      return ShatModP(shat, find_modp_context(N, 62, seed, attempt));
    } catch (const BadPrimeError&) {
      // a coefficient denominator collided with p: take the next prime
    }
  }
  throw std::runtime_error("no usable prime found for mod-p scan");
}

}  // namespace

Verdict decide(const Framework& fw, Model model, const DecideOptions& opts) {
  auto errors = validate(fw.graph);
  if (!errors.empty())
    throw std::invalid_argument("invalid graph: " + errors.front());

  const ColoredGraph& g = fw.graph;
  const int dn = g.d * g.n_vertices;
  std::vector<RatVec> dvecs = edge_vectors(fw);
  LaurentMatrix shat = build_Shat(g, dvecs);

  Verdict verdict;
  verdict.base = base_rank_test(fw, model, dvecs, shat);
  verdict.bound_used = bound_N0(g.d, Int(g.color_weight()));
  if (!verdict.base.passed) {
    verdict.kind = VerdictKind::NotPeriodicallyRigid;
    return verdict;
  }

  Int scan_max = verdict.bound_used.N0;
  if (opts.scan_limit) {
    scan_max = std::min(scan_max, *opts.scan_limit);
  } else if (scan_max > opts.bound_ceiling) {
    throw BoundTooLargeError(
        "N0 = " + verdict.bound_used.N0.get_str() +
        " exceeds the scan ceiling; the bound is too large for exact scan");
  }

  const std::uint64_t n_max = scan_max.get_ui();
  for (std::uint64_t N = 1; N <= n_max; ++N) {
    std::uint64_t n_points = count_torsion(N, g.d, opts.galois_reduced);
    if (phi_filter(N, verdict.bound_used) == FilterResult::Skip) {
      verdict.n_skipped += 1;
      verdict.points_skipped += n_points;
      continue;
    }
    verdict.n_checked += 1;
    verdict.points_checked += n_points;
    if (n_points == 0) continue;

    PointCodec codec(N, g.d, opts.galois_reduced);
    std::vector<Candidate> candidates;
    if (!opts.use_modp) {
      candidates = sweep_exact(shat, codec, dn);
    } else {
      ShatModP modp = make_modp(shat, N, opts.seed);
      candidates = opts.threads > 1
                       ? sweep_modp_parallel(modp, codec, dn, opts.threads)
                       : sweep_modp_serial(modp, codec, dn);
    }
    if (candidates.empty()) continue;

    // Confirm candidates exactly, smallest k first; mod-p deficiency alone
    // is never trusted.
    std::sort(candidates.begin(), candidates.end());
    CycloContext ctx(N);
    for (const Candidate& cand : candidates) {
      TorsionPoint omega{N, cand.k};
      int rank = rank_exact(evaluate_at(shat, omega, ctx));
      if (rank < dn) {
        verdict.kind = VerdictKind::TorsionFlexible;
        verdict.witness = omega;
        verdict.witness_nullity = dn - rank;
        return verdict;
      }
    }
  }
  verdict.kind = VerdictKind::Ultrarigid;
  return verdict;
}

std::vector<RumPoint> rum_rational_spectrum(const Framework& fw,
                                            std::uint64_t max_order,
                                            const DecideOptions& opts) {
  if (max_order < 1)
    throw std::invalid_argument("rum_rational_spectrum: max_order >= 1");
  auto errors = validate(fw.graph);
  if (!errors.empty())
    throw std::invalid_argument("invalid graph: " + errors.front());

  const ColoredGraph& g = fw.graph;
  const int dn = g.d * g.n_vertices;
  std::vector<RatVec> dvecs = edge_vectors(fw);
  LaurentMatrix shat = build_Shat(g, dvecs);

  std::vector<RumPoint> out;
  std::vector<std::uint64_t> k(g.d, 0);
  for (std::uint64_t N = 1; N <= max_order; ++N) {
    // Points of order exactly N: gcd(k_1, ..., k_d, N) = 1.
    CycloContext ctx(N);
    std::optional<ShatModP> modp;
    if (opts.use_modp && N > 1) modp.emplace(make_modp(shat, N, opts.seed));
    std::vector<std::vector<std::uint64_t>> prims;
    std::fill(k.begin(), k.end(), 0);
    while (true) {
      std::uint64_t gg = N;
      for (auto v : k) gg = std::gcd(gg, v);
      if (gg == 1 || N == 1) prims.push_back(k);
      int i = g.d - 1;
      while (i >= 0 && ++k[i] == N) k[i--] = 0;
      if (i < 0) break;
    }
    std::vector<char> deficient(prims.size(), 1);
    if (modp) {
      std::vector<std::uint64_t> scratch;
      for (std::size_t i = 0; i < prims.size(); ++i)
        deficient[i] = modp->rank_at(prims[i], scratch) < dn;
    }
    for (std::size_t i = 0; i < prims.size(); ++i) {
      if (!deficient[i]) continue;
      TorsionPoint omega{N, prims[i]};
      int nullity = dn - rank_exact(evaluate_at(shat, omega, ctx));
      if (nullity > 0) out.push_back({omega, nullity});
    }
  }
  return out;
}

}  // namespace ultra
