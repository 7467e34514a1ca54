#include "cyclomahler/cyclogeom.hpp"

#include <algorithm>
#include <set>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/numtheory.hpp"

namespace cm::cyclogeom {

namespace nt = cm::numtheory;

std::vector<ExponentVector> root_vectors(std::uint64_t k) {
  IntPoly phi = nt::cyclotomic_poly(k);
  int d = phi.degree();
  std::vector<ExponentVector> out;
  out.reserve(k);
  // iteratively reduce t^r mod Phi_k
  std::vector<Int> cur(d, Int(0));
  if (d > 0) cur[0] = 1;
  for (std::uint64_t r = 0; r < k; ++r) {
    ExponentVector v(d);
    for (int i = 0; i < d; ++i) v[i] = (int)cur[i].convert_to<long long>();
    out.push_back(v);
    // multiply by t, reduce by monic Phi_k
    Int top = d > 0 ? cur[d - 1] : Int(0);
    for (int i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
    if (d > 0) cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < d; ++i) cur[i] -= top * phi.coeffs[i];
  }
  return out;
}

void LaurentPoly::add_term(const ExponentVector& e, const Int& c) {
  if (c == 0) return;
  auto it = terms.find(e);
  if (it == terms.end()) {
    terms.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Int LaurentPoly::coeff(const ExponentVector& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? Int(0) : it->second;
}

bool LaurentPoly::is_reciprocal() const {
  for (const auto& [e, c] : terms) {
    ExponentVector ne(e);
    for (auto& x : ne) x = -x;
    if (coeff(ne) != c) return false;
  }
  return true;
}

LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  r.nvars = a.nvars;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      ExponentVector e(ea);
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Int constant_term(const LaurentPoly& a) {
  return a.coeff(ExponentVector(a.nvars, 0));
}

LaurentPoly laurent_Fk(std::uint64_t k) {
  LaurentPoly f;
  f.nvars = (int)nt::euler_phi(k);
  for (const auto& v : root_vectors(k)) f.add_term(v, Int(1));
  return f;
}

Int eval_at_signs(std::uint64_t k, int x0, const std::vector<int>& signs) {
  auto A = root_vectors(k);
  std::uint64_t d = nt::euler_phi(k);
  if (signs.size() != d) throw DomainError("eval_at_signs: need phi(k) signs");
  Int total(x0);
  for (const auto& a : A) {
    int parity = 0;
    for (size_t i = 0; i < a.size(); ++i)
      if (signs[i] < 0 && (a[i] % 2 != 0)) parity ^= 1;
    total += parity ? -1 : 1;
  }
  return total;
}

// ---------------------------------------------------------------------------
// exact convex hull by the double description method on the polar cone
// ---------------------------------------------------------------------------
namespace {

struct BigVec {
  std::vector<Int> x;
};

void make_primitive(std::vector<Int>& v) {
  Int g = 0;
  for (const auto& c : v) g = gcd(g, c);
  if (g == 0) return;
  if (g < 0) g = -g;
  for (auto& c : v) c /= g;
}

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int rank_of(std::vector<std::vector<Int>> m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Int a = m[r][c], b = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] = m[i][j] * a - m[r][j] * b;
    }
    ++r;
  }
  return (int)r;
}

struct Ray {
  std::vector<Int> x;           // primitive direction in Z^(d+1)
  std::vector<std::uint64_t> tight;  // bitset over inequality indices

  bool tight_at(size_t i) const { return (tight[i >> 6] >> (i & 63)) & 1; }
  void set_tight(size_t i) { tight[i >> 6] |= 1ULL << (i & 63); }
};

// rays of {x in R^D : <c_i, x> <= 0} assuming the final cone is pointed
std::vector<Ray> double_description(const std::vector<std::vector<Int>>& ineq,
                                    size_t D) {
  size_t words = (ineq.size() + 63) / 64;

  // initial independent subset of size D
  std::vector<size_t> base;
  {
    std::vector<std::vector<Int>> acc;
    for (size_t i = 0; i < ineq.size() && base.size() < D; ++i) {
      acc.push_back(ineq[i]);
      if (rank_of(acc) == (int)acc.size())
        base.push_back(i);
      else
        acc.pop_back();
    }
    if (base.size() < D)
      throw DomainError("hull: inequality system is not full rank");
  }

  // initial simplicial cone: ray_j solves C y = -e_j (up to positive scale)
  std::vector<Ray> rays;
  {
    size_t n = D;
    for (size_t j = 0; j < n; ++j) {
      // solve via fraction-free elimination of [C | -e_j]
      std::vector<std::vector<Int>> m(n, std::vector<Int>(n + 1, Int(0)));
      for (size_t i = 0; i < n; ++i) {
        for (size_t c = 0; c < n; ++c) m[i][c] = ineq[base[i]][c];
        m[i][n] = (i == j) ? Int(-1) : Int(0);
      }
      // Gauss-Jordan over Q using Int pairs: do rational elimination
      std::vector<std::vector<Rat>> q(n, std::vector<Rat>(n + 1));
      for (size_t i = 0; i < n; ++i)
        for (size_t c = 0; c <= n; ++c) q[i][c] = Rat(m[i][c]);
      for (size_t col = 0, row = 0; col < n && row < n; ++col) {
        size_t piv = row;
        while (piv < n && q[piv][col] == 0) ++piv;
        if (piv == n) throw DomainError("hull: singular base");
        std::swap(q[row], q[piv]);
        Rat pv = q[row][col];
        for (size_t c = col; c <= n; ++c) q[row][c] /= pv;
        for (size_t i = 0; i < n; ++i) {
          if (i == row || q[i][col] == 0) continue;
          Rat f = q[i][col];
          for (size_t c = col; c <= n; ++c) q[i][c] -= f * q[row][c];
        }
        ++row;
      }
      // solution y_i = q[i][n]; clear denominators
      Int lcm_den = 1;
      for (size_t i = 0; i < n; ++i)
        lcm_den = lcm(lcm_den, denominator(q[i][n]));
      Ray r;
      r.x.resize(n);
      for (size_t i = 0; i < n; ++i)
        r.x[i] = numerator(q[i][n]) * (lcm_den / denominator(q[i][n]));
      make_primitive(r.x);
      r.tight.assign(words, 0);
      for (size_t i = 0; i < n; ++i)
        if (i != j) r.set_tight(base[i]);
      rays.push_back(std::move(r));
    }
  }

  // insert remaining inequalities
  for (size_t idx = 0; idx < ineq.size(); ++idx) {
    if (std::find(base.begin(), base.end(), idx) != base.end()) continue;
    const auto& c = ineq[idx];
    std::vector<Int> val(rays.size());
    bool any_pos = false;
    for (size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(c, rays[i].x);
      if (val[i] > 0) any_pos = true;
    }
    if (!any_pos) {
      for (size_t i = 0; i < rays.size(); ++i)
        if (val[i] == 0) rays[i].set_tight(idx);
      continue;
    }
    std::vector<Ray> next;
    std::vector<size_t> neg, pos;
    for (size_t i = 0; i < rays.size(); ++i) {
      if (val[i] < 0) neg.push_back(i);
      else if (val[i] > 0) pos.push_back(i);
      if (val[i] <= 0) {
        Ray r = rays[i];
        if (val[i] == 0) r.set_tight(idx);
        next.push_back(std::move(r));
      }
    }
    size_t words_now = rays.empty() ? words : rays[0].tight.size();
    for (size_t a : neg)
      for (size_t b : pos) {
        // adjacency: common tight set has rank D-2
        std::vector<std::uint64_t> common(words_now);
        size_t cnt = 0;
        for (size_t w = 0; w < words_now; ++w) {
          common[w] = rays[a].tight[w] & rays[b].tight[w];
          cnt += (size_t)__builtin_popcountll(common[w]);
        }
        if (cnt + 2 < D) continue;  // cannot reach rank D-2
        std::vector<std::vector<Int>> rowsm;
        rowsm.reserve(cnt);
        for (size_t i = 0; i < ineq.size(); ++i)
          if ((common[i >> 6] >> (i & 63)) & 1) rowsm.push_back(ineq[i]);
        if (rank_of(rowsm) != (int)D - 2) continue;
        Ray nr;
        nr.x.resize(D);
        // val[a] < 0 < val[b]:  w = val[b]*ray_a - val[a]*ray_b
        for (size_t i = 0; i < D; ++i)
          nr.x[i] = val[b] * rays[a].x[i] - val[a] * rays[b].x[i];
        make_primitive(nr.x);
        nr.tight.assign(words_now, 0);
        for (size_t w = 0; w < words_now; ++w) nr.tight[w] = common[w];
        nr.set_tight(idx);
        next.push_back(std::move(nr));
      }
    rays = std::move(next);
    if (rays.empty()) throw DomainError("hull: empty cone");
  }
  return rays;
}

}  // namespace

bool LatticePolytope::integral() const {
  for (const auto& v : vertices)
    for (const auto& c : v)
      if (denominator(c) != 1) return false;
  return true;
}

LatticePolytope hull(const std::vector<std::vector<Rat>>& points_in) {
  if (points_in.empty()) throw DomainError("hull: no points");
  size_t d = points_in[0].size();
  if (d > 16) throw ResourceGuardError("hull: dimension > 16 unsupported");

  // dedupe
  std::vector<std::vector<Rat>> points;
  {
    std::set<std::vector<Rat>> seen;
    for (const auto& p : points_in) {
      if (p.size() != d) throw DomainError("hull: inconsistent dimension");
      if (seen.insert(p).second) points.push_back(p);
    }
  }

  // polar cone inequalities: (num(v), -den(v)) . (w, t) <= 0
  std::vector<std::vector<Int>> ineq;
  for (const auto& p : points) {
    Int den = 1;
    for (const auto& c : p) den = lcm(den, denominator(c));
    std::vector<Int> row(d + 1);
    for (size_t i = 0; i < d; ++i)
      row[i] = numerator(p[i]) * (den / denominator(p[i]));
    row[d] = -den;
    make_primitive(row);
    ineq.push_back(std::move(row));
  }
  // t >= 0
  {
    std::vector<Int> row(d + 1, Int(0));
    row[d] = -1;
    ineq.push_back(std::move(row));
  }

  auto rays = double_description(ineq, d + 1);

  LatticePolytope P;
  P.dim = (int)d;
  std::set<std::vector<Rat>> facet_seen;
  for (const auto& r : rays) {
    if (r.x[d] == 0)
      throw DomainError("hull: origin is not strictly interior");
    if (r.x[d] < 0) throw DomainError("hull: inconsistent cone ray");
    Facet f;
    f.normal.assign(r.x.begin(), r.x.begin() + d);
    f.b = r.x[d];
    // primitive by construction
    std::vector<Rat> key(d);
    for (size_t i = 0; i < d; ++i) key[i] = Rat(f.normal[i], f.b);
    if (facet_seen.insert(key).second) P.facets.push_back(std::move(f));
  }

  // vertices: points whose tight facet normals span R^d
  for (const auto& p : points) {
    std::vector<std::vector<Int>> tight;
    for (const auto& f : P.facets) {
      Rat lhs = 0;
      for (size_t i = 0; i < d; ++i) lhs += Rat(f.normal[i]) * p[i];
      if (lhs == Rat(f.b)) tight.push_back(f.normal);
      else if (lhs > Rat(f.b))
        throw DomainError("hull: point violates computed facet");
    }
    if (rank_of(tight) == (int)d) P.vertices.push_back(p);
  }
  std::sort(P.vertices.begin(), P.vertices.end());
  return P;
}

LatticePolytope cyclopolytope(std::uint64_t k) {
  if (k < 2) throw DomainError("cyclopolytope: k >= 2 required");
  auto A = root_vectors(k);
  std::vector<std::vector<Rat>> pts;
  for (const auto& v : A) {
    std::vector<Rat> p(v.size());
    for (size_t i = 0; i < v.size(); ++i) p[i] = Rat(v[i]);
    pts.push_back(std::move(p));
  }
  return hull(pts);
}

LatticePolytope polar_dual(const LatticePolytope& P) {
  if (P.facets.empty()) throw DomainError("polar_dual: no facet description");
  LatticePolytope D;
  D.dim = P.dim;
  for (const auto& f : P.facets) {
    std::vector<Rat> w(P.dim);
    for (int i = 0; i < P.dim; ++i) w[i] = Rat(f.normal[i], f.b);
    D.vertices.push_back(std::move(w));
  }
  std::sort(D.vertices.begin(), D.vertices.end());
  // facets of the dual come from the vertices of P
  for (const auto& v : P.vertices) {
    Int den = 1;
    for (const auto& c : v) den = lcm(den, denominator(c));
    Facet f;
    f.normal.resize(P.dim);
    for (int i = 0; i < P.dim; ++i)
      f.normal[i] = numerator(v[i]) * (den / denominator(v[i]));
    f.b = den;
    std::vector<Int> all = f.normal;
    all.push_back(f.b);
    make_primitive(all);
    f.normal.assign(all.begin(), all.end() - 1);
    f.b = all.back();
    D.facets.push_back(std::move(f));
  }
  return D;
}

bool is_reflexive(const LatticePolytope& P) {
  for (const auto& f : P.facets)
    if (f.b != 1) return false;
  return true;
}

bool is_centrally_symmetric(const LatticePolytope& P) {
  std::set<std::vector<Rat>> vs(P.vertices.begin(), P.vertices.end());
  for (const auto& v : P.vertices) {
    std::vector<Rat> n(v);
    for (auto& c : n) c = -c;
    if (!vs.count(n)) return false;
  }
  return true;
}

bool direct_sum_structure(std::uint64_t k) {
  // factor k = 2 q^r
  if (k % 2 != 0) throw DomainError("direct_sum_structure: k must be 2*q^r");
  std::uint64_t m = k / 2;
  auto fac = nt::prime_factors(m);
  if (fac.size() != 1 || fac[0] == 2)
    throw DomainError("direct_sum_structure: k must be 2*q^r, q odd prime");
  std::uint64_t q = fac[0];
  std::uint64_t stride = m / q;  // q^(r-1)
  std::uint64_t d = nt::euler_phi(k);

  std::set<ExponentVector> expected;
  for (std::uint64_t i = 0; i < d; ++i) {
    ExponentVector e(d, 0), ne(d, 0);
    e[i] = 1;
    ne[i] = -1;
    expected.insert(e);
    expected.insert(ne);
  }
  for (std::uint64_t j = 0; j < stride; ++j) {
    ExponentVector v(d, 0);
    for (std::uint64_t i = 0; i + 1 < q; ++i)
      v[j + i * stride] = (i % 2 == 0) ? 1 : -1;
    ExponentVector nv(v);
    for (auto& c : nv) c = -c;
    expected.insert(v);
    expected.insert(nv);
  }

  auto A = root_vectors(k);
  std::set<ExponentVector> actual(A.begin(), A.end());
  return actual == expected;
}

// ---------------------------------------------------------------------------
// torus points; exact arithmetic in Q(sqrt(-15)) for the eta points
// ---------------------------------------------------------------------------
namespace {

struct Quad {  // a + b*sqrt(-15)
  Rat a, b;
  Quad operator*(const Quad& o) const {
    return {a * o.a - Rat(15) * b * o.b, a * o.b + b * o.a};
  }
  Quad operator+(const Quad& o) const { return {a + o.a, b + o.b}; }
  Quad conj() const { return {a, -b}; }
  Quad inv() const {
    Rat n = a * a + Rat(15) * b * b;  // norm of a + b sqrt(-15)
    return {a / n, -b / n};
  }
  bool is_zero() const { return a == 0 && b == 0; }
};

Quad quad_pow(Quad base, int e) {
  Quad acc{Rat(1), Rat(0)};
  bool invert = e < 0;
  unsigned n = invert ? (unsigned)(-e) : (unsigned)e;
  while (n) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return invert ? acc.inv() : acc;
}

}  // namespace

TorusPointResult torus_point_check(std::uint64_t k) {
  if (k < 2) throw DomainError("torus_point_check: k >= 2 required");
  std::uint64_t d = nt::euler_phi(k);

  // eta-point route for k = 2l, l an odd prime
  if (k % 2 == 0 && nt::is_prime(k / 2) && k / 2 > 2) {
    std::uint64_t l = k / 2;
    // eta = (1 + i sqrt 15)/4, |eta| = 1, 1/eta = conj(eta)
    Quad eta{Rat(1, 4), Rat(1, 4)};
    std::vector<Quad> x(d + 1);  // x[0] = x0
    if (l % 4 == 3) {
      x[0] = Quad{Rat(-1), Rat(0)};
      x[1] = Quad{Rat(-1), Rat(0)} * eta;
      for (std::uint64_t i = 2; i <= d; ++i)
        x[i] = Quad{Rat(i % 2 == 0 ? 1 : -1), Rat(0)};
    } else {
      x[0] = Quad{Rat(1), Rat(0)};
      x[1] = eta;
      x[2] = eta;
      for (std::uint64_t i = 3; i <= d; ++i)
        x[i] = Quad{Rat(i % 2 == 1 ? 1 : -1), Rat(0)};
    }
    Quad total = x[0];
    for (const auto& a : root_vectors(k)) {
      Quad m{Rat(1), Rat(0)};
      for (std::uint64_t i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        m = m * quad_pow(x[i + 1], a[i]);
      }
      total = total + m;
    }
    if (total.is_zero())
      return {TorusCheck::CertifiedNonempty,
              "explicit eta-point vanishes exactly in Q(sqrt(-15))"};
  }

  // sign route: P_k(1) = k+1 > 0 and P_k(-1) < 0 force a torus zero
  Int m1 = eval_at_signs(k, -1, std::vector<int>(d, -1));
  if (m1 < 0)
    return {TorusCheck::CertifiedNonempty, "P_k(-1) = " + m1.str() + " < 0"};
  return {TorusCheck::Undecided, "P_k(-1) = " + m1.str() + " >= 0"};
}

}  // namespace cm::cyclogeom
