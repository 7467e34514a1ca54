#include "cyclomahler/polyalg.hpp"

#include <algorithm>
#include <numeric>

#include "cyclomahler/numtheory.hpp"

namespace cm::polyalg {

namespace nt = cm::numtheory;

// ---------------------------------------------------------------------------
// polynomials over F_p, coefficients in uint64 (ascending, trimmed)
// ---------------------------------------------------------------------------
namespace {

using FpPoly = std::vector<std::uint64_t>;

void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_from(const IntPoly& f, std::uint64_t p) {
  FpPoly r(f.coeffs.size());
  for (size_t i = 0; i < f.coeffs.size(); ++i) {
    Int c = f.coeffs[i] % Int(p);
    if (c < 0) c += p;
    r[i] = c.convert_to<std::uint64_t>();
  }
  fp_trim(r);
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + nt::mul_mod(a[i], b[j], p)) % p;
  }
  fp_trim(c);
  return c;
}

// quotient and remainder of a by b over F_p
std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b,
                                    std::uint64_t p) {
  fp_trim(a);
  if (b.empty()) throw DomainError("fp_divmod: zero divisor");
  if (a.size() < b.size()) return {{}, a};
  std::uint64_t inv = nt::inv_mod(b.back(), p);
  FpPoly q(a.size() - b.size() + 1, 0);
  for (size_t top = a.size(); top >= b.size(); --top) {
    std::uint64_t c = nt::mul_mod(a[top - 1], inv, p);
    if (c) {
      size_t off = top - b.size();
      q[off] = c;
      for (size_t j = 0; j < b.size(); ++j)
        a[off + j] = (a[off + j] + p - nt::mul_mod(c, b[j], p)) % p;
    }
    if (top == b.size()) break;
  }
  fp_trim(a);
  fp_trim(q);
  return {q, a};
}

FpPoly fp_rem(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  return fp_divmod(a, b, p).second;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::uint64_t inv = nt::inv_mod(a.back(), p);
    for (auto& c : a) c = nt::mul_mod(c, inv, p);
  }
  return a;
}

FpPoly fp_deriv(const FpPoly& a, std::uint64_t p) {
  if (a.size() <= 1) return {};
  FpPoly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = nt::mul_mod(a[i], i % p, p);
  fp_trim(d);
  return d;
}

FpPoly fp_pow_x_p(const FpPoly& f, std::uint64_t p) {
  FpPoly base = fp_rem({0, 1}, f, p);
  FpPoly acc = {1};
  std::uint64_t e = p;
  while (e) {
    if (e & 1) acc = fp_rem(fp_mul(acc, base, p), f, p);
    base = fp_rem(fp_mul(base, base, p), f, p);
    e >>= 1;
  }
  return acc;
}

FpPoly fp_compose_mod(const FpPoly& a, const FpPoly& b, const FpPoly& f,
                      std::uint64_t p) {
  FpPoly acc;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    acc = fp_rem(fp_mul(acc, b, p), f, p);
    if (*it) {
      if (acc.empty()) acc.push_back(*it);
      else acc[0] = (acc[0] + *it) % p;
      fp_trim(acc);
    }
  }
  return acc;
}

FpPoly fp_sub_x(FpPoly a, std::uint64_t p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = (a[1] + p - 1) % p;
  fp_trim(a);
  return a;
}

bool fp_squarefree(const FpPoly& f, std::uint64_t p) {
  return fp_gcd(f, fp_deriv(f, p), p).size() <= 1;
}

bool fp_irreducible(const FpPoly& f, std::uint64_t p) {
  int d = (int)f.size() - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  if (!fp_squarefree(f, p)) return false;
  FpPoly xp = fp_pow_x_p(f, p);
  FpPoly frob = xp;  // x^(p^j) mod f
  for (int j = 1; j <= d / 2; ++j) {
    if (fp_gcd(f, fp_sub_x(frob, p), p).size() > 1) return false;
    if (j < d / 2) frob = fp_compose_mod(frob, xp, f, p);
  }
  return true;
}

int fp_root_count(const FpPoly& f, std::uint64_t p) {
  FpPoly g = fp_gcd(f, fp_sub_x(fp_pow_x_p(f, p), p), p);
  return g.empty() ? 0 : (int)g.size() - 1;
}

std::uint64_t fp_resultant(FpPoly a, FpPoly b, std::uint64_t p) {
  fp_trim(a);
  fp_trim(b);
  if (a.empty() || b.empty()) return 0;
  std::uint64_t res = 1;
  while (b.size() > 1) {
    FpPoly r = fp_rem(a, b, p);
    int da = (int)a.size() - 1, db = (int)b.size() - 1;
    if (r.empty()) return 0;
    int dr = (int)r.size() - 1;
    res = nt::mul_mod(res, nt::pow_mod(b.back(), da - dr, p), p);
    if ((da & 1) && (db & 1)) res = (p - res) % p;
    a = std::move(b);
    b = std::move(r);
  }
  res = nt::mul_mod(res, nt::pow_mod(b[0], (int)a.size() - 1, p), p);
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// resultant / discriminant
// ---------------------------------------------------------------------------

Int resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  int m = f.degree(), n = g.degree();
  if (m == 0) return pow(f.coeffs[0], n);
  if (n == 0) return pow(g.coeffs[0], m);
  // Sylvester matrix, fraction-free Bareiss elimination
  int N = m + n;
  std::vector<std::vector<Int>> a(N, std::vector<Int>(N, Int(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) a[i][i + j] = f.coeffs[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) a[n + i][i + j] = g.coeffs[n - j];
  Int denom = 1;
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (a[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / denom;
      a[i][k] = 0;
    }
    denom = a[k][k];
  }
  return sign > 0 ? a[N - 1][N - 1] : Int(-a[N - 1][N - 1]);
}

Int discriminant(const IntPoly& f) {
  if (f.degree() < 1) throw DomainError("discriminant: degree must be >= 1");
  int n = f.degree();
  Int r = resultant(f, f.derivative());
  r /= f.lead();
  return (n * (n - 1) / 2) % 2 ? Int(-r) : r;
}

std::uint64_t discriminant_mod_p(const IntPoly& f, std::uint64_t p) {
  int n = f.degree();
  FpPoly fp = fp_from(f, p);
  if ((int)fp.size() - 1 != n) throw DomainError("discriminant_mod_p: p | lc");
  FpPoly fd = fp_deriv(fp, p);
  if (fd.empty()) return 0;
  std::uint64_t res = fp_resultant(fp, fd, p);
  res = nt::mul_mod(res, nt::inv_mod(fp.back(), p), p);
  if ((n * (n - 1) / 2) % 2) res = (p - res) % p;
  return res;
}

bool is_square(const Int& n) {
  if (n < 0) return false;
  Int s = sqrt(n);
  return s * s == n;
}

// ---------------------------------------------------------------------------
// Sturm chains
// ---------------------------------------------------------------------------
namespace {

// divide by positive content only: Sturm sign sequences must be preserved
IntPoly positive_primitive(const IntPoly& a) {
  if (a.is_zero()) return {};
  Int g = content(a);
  std::vector<Int> c = a.coeffs;
  for (auto& x : c) x /= g;
  return IntPoly(std::move(c));
}

// -rem(a, b) computed fraction-free with positive scaling
IntPoly sturm_neg_rem(const IntPoly& a, const IntPoly& b) {
  IntPoly r = a;
  Int lb = b.lead();
  Int lb2 = lb * lb;
  int db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    int dr = r.degree();
    std::vector<Int> rs = r.coeffs;
    for (auto& c : rs) c *= lb2;  // positive scalar
    Int q = rs[dr] / lb;          // exact
    for (int j = 0; j <= db; ++j) rs[dr - db + j] -= q * b.coeffs[j];
    r = IntPoly(std::move(rs));
    if (!r.is_zero() && r.degree() == dr)
      throw DomainError("sturm: reduction stalled");
  }
  std::vector<Int> neg = r.coeffs;
  for (auto& c : neg) c = -c;
  return positive_primitive(IntPoly(std::move(neg)));
}

int sign_at_inf(const IntPoly& p, bool plus) {
  if (p.is_zero()) return 0;
  int s = p.lead() > 0 ? 1 : -1;
  if (!plus && p.degree() % 2 == 1) s = -s;
  return s;
}

}  // namespace

int count_real_roots(const IntPoly& f_in) {
  if (f_in.degree() < 1) return 0;
  IntPoly f = positive_primitive(f_in);
  IntPoly g = gcd(f, f.derivative());
  if (g.degree() > 0) f = div_exact(f, g);
  std::vector<IntPoly> chain{f, f.derivative()};
  while (chain.back().degree() > 0)
    chain.push_back(sturm_neg_rem(chain[chain.size() - 2], chain.back()));
  auto variations = [&](bool plus) {
    int v = 0, prev = 0;
    for (const auto& p : chain) {
      int s = sign_at_inf(p, plus);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  };
  return variations(false) - variations(true);
}

bool real_rooted(const IntPoly& f) {
  if (f.degree() < 1) return true;
  return count_real_roots(f) == f.degree();
}

// ---------------------------------------------------------------------------
// complex roots (Aberth-Ehrlich with certified radii)
// ---------------------------------------------------------------------------
namespace {

// Yun: f = prod parts[i]^(i+1) up to content
std::vector<IntPoly> squarefree_decomposition(const IntPoly& f) {
  std::vector<IntPoly> parts;
  IntPoly a = primitive_part(f);
  IntPoly d = a.derivative();
  IntPoly g = gcd(a, d);
  if (g.degree() == 0) {
    parts.push_back(a);
    return parts;
  }
  IntPoly b = div_exact(a, g);
  IntPoly c = div_exact(d, g);
  IntPoly z = c - b.derivative();
  while (true) {
    IntPoly p = gcd(b, z);
    parts.push_back(p);
    if (p.degree() > 0) b = div_exact(b, p);
    if (b.degree() == 0) break;
    c = p.degree() > 0 ? div_exact(z, p) : z;
    z = c - b.derivative();
  }
  return parts;
}

struct AberthResult {
  std::vector<Cplx> roots;
  std::vector<Real> radii;
  bool ok = false;
};

AberthResult aberth(const IntPoly& f, unsigned wp_bits) {
  PrecisionGuard guard(digits_for_bits(wp_bits));
  int n = f.degree();
  IntPoly fd = f.derivative();

  Real R = 0;
  for (int i = 0; i < n; ++i) {
    Real t = abs(Real(f.coeffs[i])) / abs(Real(f.lead()));
    if (t > R) R = t;
  }
  R += 1;

  std::vector<Cplx> z(n);
  for (int j = 0; j < n; ++j) {
    Real ang = 2 * pi_real() * Real(j) / Real(n) + Real(4) / Real(10);
    Real rad = R * (Real(5) + Real(j % 3)) / Real(10);
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), ang.backend().data(),
                 MPFR_RNDN);
    z[j] = Cplx(rad * c, rad * s);
  }

  Real eps = ldexp(Real(1), -(long)wp_bits + 6);
  int iters = 100 + 8 * n + (int)(wp_bits / 8);
  for (int it = 0; it < iters; ++it) {
    Real worst = 0;
    for (int j = 0; j < n; ++j) {
      Cplx fz = f.eval(z[j]);
      Cplx fpz = fd.eval(z[j]);
      if (abs2(fpz) == 0) {
        z[j] += Cplx(eps, eps);
        continue;
      }
      Cplx w = fz / fpz;
      Cplx s;
      for (int i = 0; i < n; ++i)
        if (i != j) s += Cplx(Real(1)) / (z[j] - z[i]);
      Cplx corr = w / (Cplx(Real(1)) - w * s);
      z[j] -= corr;
      Real c = abs(corr);
      if (c > worst) worst = c;
    }
    if (worst < eps) break;
  }

  AberthResult res;
  res.roots = z;
  res.radii.resize(n);
  res.ok = true;
  Real lc = abs(Real(f.lead()));
  for (int j = 0; j < n; ++j) {
    Real prod = lc;
    for (int i = 0; i < n; ++i)
      if (i != j) prod *= abs(z[j] - z[i]);
    if (prod == 0) {
      res.ok = false;
      return res;
    }
    res.radii[j] = Real(n) * abs(f.eval(z[j])) / prod;
  }
  for (int i = 0; i < n && res.ok; ++i)
    for (int j = i + 1; j < n && res.ok; ++j)
      if (abs(z[i] - z[j]) <= res.radii[i] + res.radii[j]) res.ok = false;
  return res;
}

}  // namespace

RootSet complex_roots(const IntPoly& f, unsigned precision_bits) {
  if (f.is_zero()) throw DomainError("complex_roots: zero polynomial");
  if (f.degree() == 0) return {};
  auto parts = squarefree_decomposition(f);
  RootSet out;
  for (unsigned wp = precision_bits + 64;; wp *= 2) {
    if (wp > 32 * (precision_bits + 64))
      throw VerificationError("complex_roots: certification failed");
    PrecisionGuard guard(digits_for_bits(wp));
    Real target = ldexp(Real(1), 8 - (long)precision_bits);
    out = RootSet{};
    bool good = true;
    for (size_t mi = 0; mi < parts.size() && good; ++mi) {
      if (parts[mi].degree() < 1) continue;
      auto r = aberth(parts[mi], wp);
      if (!r.ok) {
        good = false;
        break;
      }
      for (int j = 0; j < parts[mi].degree(); ++j) {
        if (r.radii[j] > target) {
          good = false;
          break;
        }
        out.roots.push_back(r.roots[j]);
        out.radii.push_back(r.radii[j]);
        out.multiplicity.push_back((int)mi + 1);
      }
    }
    if (good) break;
  }
  std::vector<size_t> idx(out.roots.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (out.roots[a].re != out.roots[b].re)
      return out.roots[a].re < out.roots[b].re;
    return out.roots[a].im < out.roots[b].im;
  });
  RootSet sorted;
  for (size_t i : idx) {
    sorted.roots.push_back(out.roots[i]);
    sorted.radii.push_back(out.radii[i]);
    sorted.multiplicity.push_back(out.multiplicity[i]);
  }
  return sorted;
}

MeasuredValue mahler_measure_poly(const IntPoly& f, unsigned precision_bits) {
  if (f.is_zero()) throw DomainError("mahler_measure_poly: zero polynomial");
  PrecisionGuard guard(digits_for_bits(precision_bits + 64));
  MeasuredValue mv{log(abs(Real(f.lead()))), Real(0)};
  if (f.degree() == 0) return mv;
  RootSet rs = complex_roots(f, precision_bits + 32);
  for (size_t i = 0; i < rs.roots.size(); ++i) {
    mv.value += Real(rs.multiplicity[i]) * log_plus(abs(rs.roots[i]));
    mv.error += Real(rs.multiplicity[i]) * rs.radii[i];  // log+ is 1-Lipschitz
  }
  return mv;
}

// ---------------------------------------------------------------------------
// irreducibility
// ---------------------------------------------------------------------------

bool is_irreducible(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("is_irreducible: zero polynomial");
  if (f.lead() != 1) throw DomainError("is_irreducible: monic input required");
  int d = f.degree();
  if (d == 0) return false;
  if (d == 1) return true;
  if (gcd(f, f.derivative()).degree() > 0) return false;

  for (std::uint64_t p = 2; p <= 200; ++p) {
    if (!nt::is_prime(p)) continue;
    FpPoly fp = fp_from(f, p);
    if ((int)fp.size() - 1 != d) continue;
    if (!fp_squarefree(fp, p)) continue;  // p divides the discriminant
    if (fp_irreducible(fp, p)) return true;
  }

  if (d > 12)
    throw ResourceGuardError(
        "is_irreducible: subset fallback limited to degree <= 12");

  for (unsigned prec = 256; prec <= 16384; prec *= 2) {
    RootSet rs = complex_roots(f, prec);
    PrecisionGuard guard(digits_for_bits(prec + 64));
    std::vector<Cplx> roots;
    Real radius_sum = 0;
    for (size_t i = 0; i < rs.roots.size(); ++i) {
      for (int m = 0; m < rs.multiplicity[i]; ++m) roots.push_back(rs.roots[i]);
      radius_sum += Real(rs.multiplicity[i]) * rs.radii[i];
    }
    Real R = 0;
    for (const auto& z : roots) {
      Real a = abs(z);
      if (a > R) R = a;
    }
    Real coeff_err = radius_sum;
    for (int i = 0; i < d; ++i) coeff_err *= (R + 1);
    if (coeff_err > Real(1) / Real(5)) continue;  // retry at higher precision

    for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
      if (__builtin_popcount(mask) > d / 2) continue;
      std::vector<Cplx> c{Cplx(Real(1))};
      for (int i = 0; i < d; ++i) {
        if (!(mask & (1u << i))) continue;
        std::vector<Cplx> nc(c.size() + 1);
        for (size_t j = 0; j < c.size(); ++j) {
          nc[j + 1] += c[j];
          nc[j] += c[j] * (-roots[i]);
        }
        c = std::move(nc);
      }
      bool integral = true;
      std::vector<Int> ic(c.size());
      for (size_t j = 0; j < c.size() && integral; ++j) {
        if (abs(c[j].im) > Real(1) / Real(4)) {
          integral = false;
          break;
        }
        Real rr;
        mpfr_round(rr.backend().data(), c[j].re.backend().data());
        if (abs(c[j].re - rr) > Real(1) / Real(4)) {
          integral = false;
          break;
        }
        ic[j] = rr.convert_to<Int>();
      }
      if (!integral) continue;
      IntPoly cand{std::move(ic)};
      if (cand.degree() < 1 || cand.degree() >= d) continue;
      try {
        (void)div_exact(f, cand);
        return false;
      } catch (const DomainError&) {
      }
    }
    return true;
  }
  throw VerificationError("is_irreducible: precision exhausted");
}

// ---------------------------------------------------------------------------
// splitting types mod p
// ---------------------------------------------------------------------------

Splitting splitting_type_mod_p(const IntPoly& f, std::uint64_t p) {
  if (f.lead() != 1) throw DomainError("splitting_type_mod_p: monic required");
  int q = f.degree();
  FpPoly fp = fp_from(f, p);

  {
    std::uint64_t a;
    if (p == (std::uint64_t)q) {
      a = fp.empty() ? 0 : fp[0] % p;  // (x+a)^q = x^q + a over F_q
    } else {
      std::uint64_t cq1 = fp.size() > (size_t)(q - 1) ? fp[q - 1] : 0;
      a = nt::mul_mod(cq1, nt::inv_mod(q % p, p), p);
    }
    FpPoly pw = {1};
    for (int i = 0; i < q; ++i) pw = fp_mul(pw, {a, 1}, p);
    if (pw == fp) return {SplitType::TotallyRamified, a};
  }

  bool squarefree = fp_squarefree(fp, p);
  if (squarefree && fp_irreducible(fp, p)) return {SplitType::Irreducible, 0};
  if (squarefree && fp_root_count(fp, p) == q)
    return {SplitType::TotallySplit, 0};
  if (!squarefree) {
    FpPoly g = fp_gcd(fp, fp_deriv(fp, p), p);
    FpPoly sf = fp_divmod(fp, g, p).first;
    if (!sf.empty() && (int)sf.size() - 1 == fp_root_count(sf, p))
      return {SplitType::RepeatedSplit, 0};
  }
  return {SplitType::Other, 0};
}

// ---------------------------------------------------------------------------
// cyclic Galois certificate
// ---------------------------------------------------------------------------
namespace {

Int int_mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

Int inv_mod_big(const Int& a, const Int& m) {
  Int x0 = 1, x1 = 0, a0 = int_mod(a, m), b0 = m;
  while (b0 != 0) {
    Int q = a0 / b0;
    Int tmp = a0 - q * b0;
    a0 = b0;
    b0 = tmp;
    tmp = x0 - q * x1;
    x0 = x1;
    x1 = tmp;
  }
  if (a0 != 1) throw VerificationError("inv_mod_big: non-unit");
  return int_mod(x0, m);
}

// c = n/d mod m with |n|, d <= sqrt(m/2); verified before returning
bool rat_reconstruct(const Int& c, const Int& m, Rat& out) {
  Int bound = sqrt(Int(m / 2));
  Int r0 = m, r1 = int_mod(c, m);
  Int t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return false;
  Int den = t1 < 0 ? Int(-t1) : t1;
  Int num = t1 < 0 ? Int(-r1) : r1;
  if (den == 0 || den > bound) return false;
  if (int_mod(c * den - num, m) != 0) return false;
  Int g = gcd(num, den);
  if (g < 0) g = -g;
  if (g != 1) {
    num /= g;
    den /= g;
  }
  out = Rat(num, den);
  return true;
}

std::vector<std::uint64_t> roots_mod_p(const IntPoly& f, std::uint64_t p) {
  FpPoly fp = fp_from(f, p);
  std::vector<std::uint64_t> roots;
  for (std::uint64_t a = 0; a < p; ++a) {
    std::uint64_t acc = 0;
    for (auto it = fp.rbegin(); it != fp.rend(); ++it)
      acc = (nt::mul_mod(acc, a, p) + *it) % p;
    if (acc == 0) roots.push_back(a);
  }
  return roots;
}

Int hensel_lift(const IntPoly& f, const IntPoly& fd, std::uint64_t r,
                std::uint64_t p, const Int& pe) {
  Int x(r);
  Int mod(p);
  while (mod < pe) {
    mod = mod * mod;
    if (mod > pe) mod = pe;
    Int fx = int_mod(f.eval(x), mod);
    Int inv = inv_mod_big(fd.eval(x), mod);
    x = int_mod(x - fx * inv, mod);
  }
  return int_mod(x, pe);
}

// interpolation: coefficients of the degree < n polynomial with g(r_i) = y_i
std::vector<Int> interpolate_mod(const std::vector<Int>& r,
                                 const std::vector<Int>& y, const Int& pe) {
  size_t n = r.size();
  std::vector<Int> dd = y;  // divided differences
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      Int den = int_mod(r[i] - r[i - j], pe);
      dd[i] = int_mod((dd[i] - dd[i - 1]) * inv_mod_big(den, pe), pe);
      if (i == j) break;
    }
  std::vector<Int> c(n, Int(0));
  for (size_t i = n; i-- > 0;) {
    // c = c*(x - r_i) + dd[i]
    std::vector<Int> nc(n, Int(0));
    for (size_t j = 0; j + 1 < n; ++j) {
      nc[j + 1] = int_mod(nc[j + 1] + c[j], pe);
      nc[j] = int_mod(nc[j] - c[j] * r[i], pe);
    }
    nc[0] = int_mod(nc[0] + dd[i], pe);
    c = std::move(nc);
  }
  return c;
}

RatPoly try_certificate(const IntPoly& f, unsigned q) {
  if ((int)q != f.degree() || f.lead() != 1)
    throw DomainError("cyclic_galois_certificate: monic degree-q required");
  if (q > 7)
    throw ResourceGuardError(
        "cyclic_galois_certificate: q <= 7 supported (cycle enumeration)");
  Int disc = discriminant(f);
  if (disc == 0) return RatPoly{};

  std::uint64_t p = 0;
  std::vector<std::uint64_t> roots;
  for (std::uint64_t cand = 3; cand < 100000; ++cand) {
    if (!nt::is_prime(cand)) continue;
    if (disc % Int(cand) == 0) continue;
    FpPoly fp = fp_from(f, cand);
    if (fp_root_count(fp, cand) == (int)q) {
      p = cand;
      roots = roots_mod_p(f, cand);
      break;
    }
  }
  if (p == 0)
    throw DomainError("cyclic_galois_certificate: no split prime < 1e5");

  Int bc = 1;
  for (const auto& c : f.coeffs) {
    Int a = c < 0 ? Int(-c) : c;
    if (a > bc) bc = a;
  }
  Int target = 2 * pow(Int(q) * bc * 16, q);  // crude symmetric-lift bound
  Int pe(p);
  while (pe <= target) pe *= p;

  IntPoly fd = f.derivative();
  for (int attempt = 0; attempt <= 10; ++attempt) {
    std::vector<Int> lifted(q);
    for (unsigned i = 0; i < q; ++i)
      lifted[i] = hensel_lift(f, fd, roots[i], p, pe);

    // all q-cycles (0 a1 a2 ... a_{q-1})
    std::vector<unsigned> arr(q - 1);
    for (unsigned i = 0; i < q - 1; ++i) arr[i] = i + 1;
    do {
      std::vector<unsigned> psi(q);
      unsigned cur = 0;
      for (unsigned i = 0; i < q - 1; ++i) {
        psi[cur] = arr[i];
        cur = arr[i];
      }
      psi[cur] = 0;

      std::vector<Int> y(q);
      for (unsigned i = 0; i < q; ++i) y[i] = lifted[psi[i]];
      std::vector<Int> c = interpolate_mod(lifted, y, pe);

      std::vector<Rat> gc(q);
      bool ok = true;
      for (unsigned i = 0; i < q && ok; ++i)
        ok = rat_reconstruct(c[i], pe, gc[i]);
      if (!ok) continue;
      RatPoly g{std::vector<Rat>(gc)};
      if (g.degree() == 1 && g.coeff(1) == 1 && g.coeff(0) == 0) continue;
      if (compose_mod(RatPoly(f), g, f).is_zero()) return g;
    } while (std::next_permutation(arr.begin(), arr.end()));

    pe = pe * pe;
  }
  return RatPoly{};
}

}  // namespace

RatPoly compose_mod(const RatPoly& a, const RatPoly& b, const IntPoly& f) {
  RatPoly fm(f);
  auto reduce = [&](RatPoly v) {
    while (v.degree() >= f.degree() && f.degree() >= 0) {
      Rat c = v.coeffs.back() / fm.coeffs.back();
      int off = v.degree() - f.degree();
      for (int j = 0; j <= f.degree(); ++j)
        v.coeffs[off + j] -= c * fm.coeffs[j];
      v.normalize();
    }
    return v;
  };
  RatPoly acc;
  for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) {
    acc = reduce(acc * b);
    if (acc.coeffs.empty()) acc.coeffs.push_back(Rat(0));
    acc.coeffs[0] += *it;
    acc.normalize();
  }
  return acc;
}

bool cyclic_galois_certificate(const IntPoly& f, unsigned q) {
  return !try_certificate(f, q).is_zero();
}

RatPoly cyclic_galois_map(const IntPoly& f, unsigned q) {
  return try_certificate(f, q);
}

}  // namespace cm::polyalg
