#include "cyclomahler/constterms.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <unordered_map>

#include "cyclomahler/numtheory.hpp"

namespace cm::constterms {

namespace nt = cm::numtheory;
using cyclogeom::ExponentVector;

// ---------------------------------------------------------------------------
// canonical-under-symmetry sparse walk engine
// ---------------------------------------------------------------------------
namespace {

constexpr int kMaxDim = 6;

struct Key {
  std::array<std::int16_t, kMaxDim> v{};
  bool operator==(const Key& o) const { return v == o.v; }
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int i = 0; i < kMaxDim; ++i) {
      h ^= (std::uint16_t)k.v[i];
      h *= 1099511628211ULL;
    }
    return (size_t)h;
  }
};

// signed permutation: e -> (sign[i] * e[perm[i]])_i
struct SignedPerm {
  std::array<std::int8_t, kMaxDim> perm{};
  std::array<std::int8_t, kMaxDim> sign{};
};

Key apply(const SignedPerm& g, const Key& e, int d) {
  Key r;
  for (int i = 0; i < d; ++i)
    r.v[i] = (std::int16_t)(g.sign[i] * e.v[g.perm[i]]);
  return r;
}

// all signed permutations preserving the step set
std::vector<SignedPerm> step_symmetries(const std::vector<Key>& steps, int d) {
  std::vector<SignedPerm> out;
  std::vector<Key> sorted_steps = steps;
  std::sort(sorted_steps.begin(), sorted_steps.end(),
            [](const Key& a, const Key& b) { return a.v < b.v; });
  std::array<std::int8_t, kMaxDim> perm{};
  for (int i = 0; i < d; ++i) perm[i] = (std::int8_t)i;
  do {
    for (unsigned smask = 0; smask < (1u << d); ++smask) {
      SignedPerm g;
      g.perm = perm;
      for (int i = 0; i < d; ++i)
        g.sign[i] = (smask >> i) & 1 ? -1 : 1;
      std::vector<Key> img;
      img.reserve(steps.size());
      for (const auto& s : steps) img.push_back(apply(g, s, d));
      std::sort(img.begin(), img.end(),
                [](const Key& a, const Key& b) { return a.v < b.v; });
      if (img == sorted_steps) out.push_back(g);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + d));
  return out;
}

struct WalkEngine {
  int d = 0;
  std::vector<Key> steps;
  std::vector<SignedPerm> group;
  // facet description of conv(steps) for the reachability test
  std::vector<std::array<long long, kMaxDim>> facet_a;
  std::vector<long long> facet_b;

  Key canon(const Key& e) const {
    Key best = apply(group[0], e, d);
    for (size_t gi = 1; gi < group.size(); ++gi) {
      Key c = apply(group[gi], e, d);
      if (c.v < best.v) best = c;
    }
    return best;
  }

  // -e reachable to zero in at most s steps: -e in s*conv(steps)
  bool reachable(const Key& e, int s) const {
    for (size_t f = 0; f < facet_a.size(); ++f) {
      long long lhs = 0;
      for (int i = 0; i < d; ++i) lhs -= facet_a[f][i] * e.v[i];
      if (lhs > facet_b[f] * s) return false;
    }
    return true;
  }
};

WalkEngine make_engine(const std::vector<ExponentVector>& steps_in) {
  WalkEngine eng;
  if (steps_in.empty()) throw DomainError("walk_series: empty step set");
  eng.d = (int)steps_in[0].size();
  if (eng.d > kMaxDim)
    throw ResourceGuardError("walk_series: phi(k) <= 6 supported");
  for (const auto& s : steps_in) {
    Key k;
    for (int i = 0; i < eng.d; ++i) k.v[i] = (std::int16_t)s[i];
    eng.steps.push_back(k);
  }
  eng.group = step_symmetries(eng.steps, eng.d);

  if (eng.d >= 1 && steps_in.size() >= 2) {
    std::vector<std::vector<Rat>> pts;
    for (const auto& s : steps_in) {
      std::vector<Rat> p(eng.d);
      for (int i = 0; i < eng.d; ++i) p[i] = Rat(s[i]);
      pts.push_back(std::move(p));
    }
    cyclogeom::LatticePolytope P = cyclogeom::hull(pts);
    for (const auto& f : P.facets) {
      std::array<long long, kMaxDim> a{};
      for (int i = 0; i < eng.d; ++i)
        a[i] = f.normal[i].convert_to<long long>();
      eng.facet_a.push_back(a);
      eng.facet_b.push_back(f.b.convert_to<long long>());
    }
  }
  return eng;
}

}  // namespace

std::vector<Int> walk_series(const std::vector<ExponentVector>& steps, int M) {
  if (M < 0) throw DomainError("walk_series: M >= 0 required");
  if (M > 200) throw ResourceGuardError("walk_series: M <= 200 supported");
  WalkEngine eng = make_engine(steps);

  using Map = std::unordered_map<Key, Int, KeyHash>;
  Map cur;
  Key zero{};
  cur.emplace(zero, Int(1));
  std::vector<Int> out;
  out.push_back(Int(1));

  for (int m = 1; m <= M; ++m) {
    // support of step m, canonical representatives, pruned
    Map next;
    next.reserve(cur.size() * 2);
    int remaining = M - m;
    for (const auto& [o, c] : cur) {
      (void)c;
      for (const auto& a : eng.steps) {
        Key e;
        for (int i = 0; i < eng.d; ++i)
          e.v[i] = (std::int16_t)(o.v[i] + a.v[i]);
        if (!eng.reachable(e, remaining)) continue;
        next.emplace(eng.canon(e), Int(0));
      }
    }
    if (next.size() > 30000000u)
      throw ResourceGuardError("walk_series: support too large");
    // gather: next(e) = sum_a cur(e - a)
    for (auto& [e, val] : next) {
      Int acc(0);
      for (const auto& a : eng.steps) {
        Key pre;
        for (int i = 0; i < eng.d; ++i)
          pre.v[i] = (std::int16_t)(e.v[i] - a.v[i]);
        auto it = cur.find(eng.canon(pre));
        if (it != cur.end()) acc += it->second;
      }
      val = std::move(acc);
    }
    cur = std::move(next);
    auto it = cur.find(zero);
    out.push_back(it == cur.end() ? Int(0) : it->second);
  }
  return out;
}

CTSeries constant_terms(std::uint64_t k, int M) {
  if (k == 0) throw DomainError("constant_terms: k >= 1 required");
  if (nt::euler_phi(k) > 6)
    throw ResourceGuardError("constant_terms: phi(k) <= 6 supported");
  CTSeries s;
  s.k = k;
  if (k == 1) {
    // F_1 = x_1: only the empty walk returns
    s.values.assign(M + 1, Int(0));
    s.values[0] = 1;
    return s;
  }
  s.values = walk_series(cyclogeom::root_vectors(k), M);
  return s;
}

namespace {

void walk_dfs(const std::vector<ExponentVector>& A, std::vector<int>& pos,
              int depth, long long& count) {
  if (depth == 0) {
    for (int c : pos)
      if (c) return;
    ++count;
    return;
  }
  for (const auto& a : A) {
    for (size_t i = 0; i < pos.size(); ++i) pos[i] += a[i];
    walk_dfs(A, pos, depth - 1, count);
    for (size_t i = 0; i < pos.size(); ++i) pos[i] -= a[i];
  }
}

}  // namespace

Int walk_count_oracle(std::uint64_t k, int m) {
  if (m < 0) throw DomainError("walk_count_oracle: m >= 0 required");
  if (std::pow((double)k, (double)m) > 1e8)
    throw ResourceGuardError("walk_count_oracle: k^m > 1e8");
  auto A = cyclogeom::root_vectors(k);
  std::vector<int> pos(nt::euler_phi(k), 0);
  long long count = 0;
  walk_dfs(A, pos, m, count);
  return Int(count);
}

// ---------------------------------------------------------------------------
// Bessel identities, exact rational series
// ---------------------------------------------------------------------------

std::vector<Rat> bessel_I_series(int j, int M) {
  // I_j(2t) = sum_m t^(2m+j) / (m! (m+j)!)
  std::vector<Rat> s(M + 1, Rat(0));
  Int mfac = 1, mjfac = 1;
  for (int i = 1; i <= j; ++i) mjfac *= i;
  for (int m = 0; 2 * m + j <= M; ++m) {
    if (m > 0) {
      mfac *= m;
      mjfac *= (m + j);
    }
    s[2 * m + j] = Rat(Int(1), mfac * mjfac);
  }
  return s;
}

namespace {

std::vector<Rat> series_mul(const std::vector<Rat>& a,
                            const std::vector<Rat>& b, int M) {
  std::vector<Rat> c(M + 1, Rat(0));
  for (int i = 0; i <= M && i < (int)a.size(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j + i <= M && j < (int)b.size(); ++j)
      c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<Rat> series_pow(const std::vector<Rat>& a, unsigned e, int M) {
  std::vector<Rat> acc(M + 1, Rat(0));
  acc[0] = 1;
  std::vector<Rat> base = a;
  base.resize(M + 1, Rat(0));
  while (e) {
    if (e & 1) acc = series_mul(acc, base, M);
    base = series_mul(base, base, M);
    e >>= 1;
  }
  return acc;
}

}  // namespace

BesselCheck bessel_egf_check(std::uint64_t k, int M) {
  if (k % 2 != 0) throw DomainError("bessel_egf_check: k = 2 q^r required");
  std::uint64_t m = k / 2;
  auto fac = nt::prime_factors(m);
  if (fac.size() != 1 || fac[0] == 2)
    throw DomainError("bessel_egf_check: k = 2 q^r with q an odd prime");
  std::uint64_t q = fac[0];
  std::uint64_t outer = m / q;  // q^(r-1)

  // inner = I_0(2t)^q + 2 sum_{j>=1} I_j(2t)^q, truncation exact at order M
  std::vector<Rat> inner = series_pow(bessel_I_series(0, M), (unsigned)q, M);
  for (int j = 1; (std::uint64_t)j * q <= (std::uint64_t)M; ++j) {
    auto term = series_pow(bessel_I_series(j, M), (unsigned)q, M);
    for (int i = 0; i <= M; ++i) inner[i] += 2 * term[i];
  }
  std::vector<Rat> egf = series_pow(inner, (unsigned)outer, M);

  CTSeries ct = constant_terms(k, M);
  Int fact = 1;
  for (int i = 0; i <= M; ++i) {
    if (i > 0) fact *= i;
    if (Rat(ct.values[i], fact) != egf[i]) return {false, i};
  }
  return {true, -1};
}

BesselCheck bessel_egf_check_Sd(int d, int M) {
  std::vector<Rat> egf = series_pow(bessel_I_series(0, M), (unsigned)d, M);
  std::vector<ExponentVector> steps;
  for (int i = 0; i < d; ++i) {
    ExponentVector e(d, 0), ne(d, 0);
    e[i] = 1;
    ne[i] = -1;
    steps.push_back(e);
    steps.push_back(ne);
  }
  auto ct = walk_series(steps, M);
  Int fact = 1;
  for (int i = 0; i <= M; ++i) {
    if (i > 0) fact *= i;
    if (Rat(ct[i], fact) != egf[i]) return {false, i};
  }
  return {true, -1};
}

bool zeta_even_moment_check(int d, int n) {
  if (d < 1 || d > 5 || n < 1 || n > 8)
    throw DomainError("zeta_even_moment_check: d <= 5, n <= 8");
  // CT[S_d^(2n)]
  std::vector<ExponentVector> sd;
  for (int i = 0; i < d; ++i) {
    ExponentVector e(d, 0), ne(d, 0);
    e[i] = 1;
    ne[i] = -1;
    sd.push_back(e);
    sd.push_back(ne);
  }
  Int lhs = walk_series(sd, 2 * n)[2 * n];
  // CT[(L_d Ltilde_d)^n]: steps e_i - e_j over all i, j
  std::vector<ExponentVector> ll;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ExponentVector e(d, 0);
      e[i] += 1;
      e[j] -= 1;
      ll.push_back(e);
    }
  // duplicate steps (i = j gives zero vector d times): fold multiplicity by
  // direct sparse convolution instead of the engine
  cyclogeom::LaurentPoly base;
  base.nvars = d;
  for (const auto& e : ll) base.add_term(e, Int(1));
  cyclogeom::LaurentPoly acc;
  acc.nvars = d;
  acc.add_term(ExponentVector(d, 0), Int(1));
  for (int i = 0; i < n; ++i) acc = laurent_mul(acc, base);
  Int rhs = constant_term(acc);

  Int binom = 1;
  for (int i = 1; i <= n; ++i) binom = binom * (n + i) / i;
  return lhs == binom * rhs;
}

std::vector<Rat> log_I0_taylor(int order) {
  // I_0(2iy) = sum (-1)^m y^(2m) / (m!)^2
  std::vector<Rat> s(order + 1, Rat(0));
  Int f = 1;
  for (int m = 0; 2 * m <= order; ++m) {
    if (m > 0) f *= m;
    s[2 * m] = Rat(Int(m % 2 ? -1 : 1), f * f);
  }
  // l = log s via n l_n = n s_n - sum_{k<n} k l_k s_{n-k}
  std::vector<Rat> l(order + 1, Rat(0));
  for (int n = 1; n <= order; ++n) {
    Rat acc = Rat(n) * s[n];
    for (int k = 1; k < n; ++k) acc -= Rat(k) * l[k] * s[n - k];
    l[n] = acc / Rat(n);
  }
  return l;
}

std::vector<RatPoly> asymptotic_aj(int j_max) {
  if (j_max < 0 || j_max > 12)
    throw DomainError("asymptotic_aj: j_max <= 12 supported");
  int order = 2 * (j_max + 2);
  std::vector<Rat> l = log_I0_taylor(order);
  // l = -y^2 + sum_{m>=2} c_{2m} y^(2m); substitute y = s/sqrt(v):
  // v*l + s^2 = sum_{m>=2} c_{2m} s^(2m) w^(m-1), w = 1/v
  // X[w-power] = polynomial in s
  std::vector<RatPoly> X(j_max + 1);
  for (int m = 2; 2 * m <= order; ++m) {
    int wpow = m - 1;
    if (wpow > j_max) break;
    std::vector<Rat> poly(2 * m + 1, Rat(0));
    poly[2 * m] = l[2 * m];
    X[wpow] = X[wpow] + RatPoly(std::move(poly));
  }
  // exp(X) in w, coefficients are polynomials in s
  std::vector<RatPoly> E(j_max + 1);
  E[0] = RatPoly(std::vector<Rat>{Rat(1)});
  std::vector<RatPoly> term(E);  // X^n / n!
  for (int n = 1; n <= j_max; ++n) {
    // term = term * X / n (w-graded product)
    std::vector<RatPoly> nt_(j_max + 1);
    for (int i = 0; i <= j_max; ++i) {
      if (term[i].is_zero()) continue;
      for (int j = 1; i + j <= j_max; ++j) {
        if (X[j].is_zero()) continue;
        nt_[i + j] = nt_[i + j] + term[i] * X[j];
      }
    }
    for (auto& p : nt_) p = Rat(1, n) * p;
    term = std::move(nt_);
    bool all_zero = true;
    for (int i = 0; i <= j_max; ++i) {
      if (!term[i].is_zero()) all_zero = false;
      E[i] = E[i] + term[i];
    }
    if (all_zero) break;
  }
  return E;
}

}  // namespace cm::constterms
