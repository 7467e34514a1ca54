#include "cyclomahler/holonomic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "cyclomahler/polyalg.hpp"

#ifndef CYCLOMAHLER_DATA_DIR
#define CYCLOMAHLER_DATA_DIR "data/operators"
#endif

namespace cm::holonomic {

// ---------------------------------------------------------------------------
// registry and file format
// ---------------------------------------------------------------------------
namespace {
std::string g_registry_dir = CYCLOMAHLER_DATA_DIR;
std::mutex g_registry_mutex;
}  // namespace

std::string registry_dir() {
  const char* env = std::getenv("CYCLOMAHLER_OPERATOR_DIR");
  if (env && *env) return env;
  return g_registry_dir;
}

void set_registry_dir(const std::string& dir) { g_registry_dir = dir; }

OdeOperator load_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("load_operator_file: cannot open " + path);
  nlohmann::json j;
  in >> j;
  OdeOperator op;
  int order = j.at("order").get<int>();
  for (const auto& row : j.at("coeffs")) {
    std::vector<Rat> c;
    for (const auto& entry : row) c.emplace_back(Int(entry.get<std::string>()));
    op.coeffs.emplace_back(std::move(c));
  }
  if (op.order() != order || op.coeffs.back().is_zero())
    throw VerificationError("load_operator_file: inconsistent order in " +
                            path);
  return op;
}

OdeOperator operator_registry(std::uint64_t k) {
  if (k != 2 && k != 6 && k != 8 && k != 10)
    throw DomainError("operator_registry: supported k are 2, 6, 8, 10");
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  return load_operator_file(registry_dir() + "/l" + std::to_string(k) +
                            ".json");
}

// ---------------------------------------------------------------------------
// algebra on operators
// ---------------------------------------------------------------------------

OdeOperator compose(const OdeOperator& L, const OdeOperator& M) {
  // D^i (m(t) D^j) = sum_l binom(i,l) m^(l) D^(i+j-l)
  int rl = L.order(), rm = M.order();
  std::vector<RatPoly> out(rl + rm + 1);
  for (int i = 0; i <= rl; ++i) {
    if (L.coeffs[i].is_zero()) continue;
    for (int j = 0; j <= rm; ++j) {
      if (M.coeffs[j].is_zero()) continue;
      RatPoly deriv = M.coeffs[j];
      Int binom = 1;
      for (int l = 0; l <= i; ++l) {
        if (l > 0) {
          binom = binom * (i - l + 1) / l;
          deriv = deriv.derivative();
        }
        if (!deriv.is_zero())
          out[i + j - l] = out[i + j - l] +
                           Rat(binom) * (L.coeffs[i] * deriv);
      }
    }
  }
  OdeOperator R;
  R.coeffs = std::move(out);
  while (R.coeffs.size() > 1 && R.coeffs.back().is_zero()) R.coeffs.pop_back();
  return R;
}

OdeOperator theta_squared() {
  OdeOperator t2;
  t2.coeffs.resize(3);
  t2.coeffs[0] = RatPoly{};
  t2.coeffs[1] = RatPoly(std::vector<Rat>{Rat(0), Rat(1)});          // t
  t2.coeffs[2] = RatPoly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)});  // t^2
  return t2;
}

OdeOperator compose_theta2(const OdeOperator& L) {
  return compose(L, theta_squared());
}

// ---------------------------------------------------------------------------
// singularities
// ---------------------------------------------------------------------------
namespace {

IntPoly integerize(const RatPoly& p, Int* scale_out = nullptr) {
  Int den = 1;
  for (const auto& c : p.coeffs) den = lcm(den, denominator(c));
  std::vector<Int> ic(p.coeffs.size());
  for (size_t i = 0; i < p.coeffs.size(); ++i)
    ic[i] = numerator(p.coeffs[i]) * (den / denominator(p.coeffs[i]));
  if (scale_out) *scale_out = den;
  return IntPoly(std::move(ic));
}

// deflate all rational roots out of f; returns (roots with multiplicity)
std::vector<Rat> extract_rational_roots(IntPoly& f) {
  std::vector<Rat> zeros;
  // t = 0 roots first
  while (!f.is_zero() && f.coeffs[0] == 0) {
    zeros.emplace_back(0);
    f.coeffs.erase(f.coeffs.begin());
  }
  std::vector<Rat> roots;
  if (f.degree() < 1) return zeros;
  // numeric roots, rational reconstruction by continued fractions, exact check
  auto rs = cm::polyalg::complex_roots(f, 128);
  PrecisionGuard guard(48);
  for (size_t i = 0; i < rs.roots.size(); ++i) {
    if (abs(rs.roots[i].im) > Real(1) / Real(1000000)) continue;
    // continued fraction of the real part with denominator <= |lead|
    Real x = rs.roots[i].re;
    Int p0 = 0, p1 = 1, q0 = 1, q1 = 0;
    Real cur = x;
    Int den_bound = f.lead() < 0 ? Int(-f.lead()) : f.lead();
    for (int it = 0; it < 64; ++it) {
      Real fl = floor(cur);
      Int a = fl.convert_to<Int>();
      Int p2 = a * p1 + p0, q2 = a * q1 + q0;
      if (q2 > den_bound * 2) break;
      p0 = p1;
      p1 = p2;
      q0 = q1;
      q1 = q2;
      Rat cand(p1, q1);
      if (abs(rat_to_real(cand) - x) < Real(1) / Real(1000000)) {
        // exact verification
        Rat val = RatPoly(f).eval(cand);
        if (val == 0) {
          roots.push_back(cand);
          break;
        }
      }
      Real frac = cur - fl;
      if (frac == 0) break;
      cur = 1 / frac;
    }
  }
  // deflate found roots with multiplicity
  std::vector<Rat> all = zeros;
  for (const auto& r : roots) {
    while (true) {
      RatPoly ff(f);
      if (ff.eval(r) != 0) break;
      // synthetic division by (t - r)
      std::vector<Rat> q(ff.coeffs.size() - 1);
      Rat carry = 0;
      for (int i = (int)ff.coeffs.size() - 1; i >= 1; --i) {
        carry = ff.coeffs[i] + carry * r;
        q[i - 1] = carry;
        carry = q[i - 1];
      }
      // rebuild integer polynomial
      RatPoly qq{std::move(q)};
      f = integerize(qq);
      all.push_back(r);
      if (f.degree() < 1) break;
    }
  }
  // include multiplicity-0 corner: roots found are already in `all`
  return all;
}

}  // namespace

std::vector<Rat> rational_singularities(const OdeOperator& op) {
  IntPoly lead = integerize(op.coeffs.back());
  auto roots = extract_rational_roots(lead);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<Cplx> singularities(const OdeOperator& op, unsigned digits) {
  PrecisionGuard guard(digits + 8);
  IntPoly lead = integerize(op.coeffs.back());
  std::vector<Cplx> out;
  auto rat = extract_rational_roots(lead);  // deflates `lead`
  std::sort(rat.begin(), rat.end());
  rat.erase(std::unique(rat.begin(), rat.end()), rat.end());
  for (const auto& r : rat) out.emplace_back(rat_to_real(r), Real(0));
  if (lead.degree() >= 1) {
    auto rs = cm::polyalg::complex_roots(lead, bits_for_digits(digits));
    for (const auto& z : rs.roots) out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact annihilation check
// ---------------------------------------------------------------------------

bool annihilation_check(const OdeOperator& op, const std::vector<Int>& ct,
                        int M) {
  if ((int)ct.size() < M + 1)
    throw DomainError("annihilation_check: series shorter than M");
  int r = op.order();
  int maxdeg = 0;
  for (const auto& p : op.coeffs) maxdeg = std::max(maxdeg, p.degree());
  if (M < r + maxdeg + 10)
    throw DomainError("annihilation_check: M too small");

  std::vector<Rat> res(M + 1, Rat(0));
  for (int i = 0; i <= r; ++i) {
    const RatPoly& p = op.coeffs[i];
    if (p.is_zero()) continue;
    for (int j = 0; j <= p.degree(); ++j) {
      if (p.coeffs[j] == 0) continue;
      // p_ij t^j * S^(i) contributes at t^(m-i+j) for m >= i
      for (int m = i; m <= M; ++m) {
        int pw = m - i + j;
        if (pw > M) break;
        Int fall = 1;
        for (int l = 0; l < i; ++l) fall *= (m - l);
        res[pw] += p.coeffs[j] * Rat(ct[m] * fall);
      }
    }
  }
  for (int pw = 0; pw <= M - maxdeg - r; ++pw)
    if (res[pw] != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// local expansions
// ---------------------------------------------------------------------------

LocalExpansion h_expansion(const std::vector<Int>& ct, const Rat& radius) {
  LocalExpansion e;
  e.radius = radius;
  e.coeffs.assign(ct.size(), Rat(0));
  for (size_t m = 0; m < ct.size(); ++m) e.coeffs[m] = Rat(ct[m]);
  return e;
}

LocalExpansion b_expansion(const std::vector<Int>& ct, const Rat& radius) {
  LocalExpansion e;
  e.radius = radius;
  e.chalf = Rat(1, 2);
  e.coeffs.assign(ct.size(), Rat(0));
  for (size_t m = 1; m < ct.size(); ++m)
    e.coeffs[m] = Rat(ct[m], Int(m) * Int(m));
  return e;
}

PathPlan standard_path(std::uint64_t k, int orientation, const Rat& x) {
  PathPlan p;
  p.orientation = orientation;
  Rat i0(orientation, (long)(8 * k));
  p.waypoints = {{Rat(0), i0}, {Rat(0), Rat(orientation)}, {x, Rat(0)}};
  return p;
}

// ---------------------------------------------------------------------------
// Frobenius basis at a regular singular point (exact rationals)
// ---------------------------------------------------------------------------
namespace {

using EpsPoly = std::vector<Rat>;  // truncated power series in eps

EpsPoly eps_mul(const EpsPoly& a, const EpsPoly& b, size_t E) {
  EpsPoly c(E, Rat(0));
  for (size_t i = 0; i < E && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < E && j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  }
  return c;
}

// invert a unit series to length E
EpsPoly eps_inv_unit(const EpsPoly& a, size_t E) {
  EpsPoly inv(E, Rat(0));
  inv[0] = Rat(1) / a[0];
  for (size_t n = 1; n < E; ++n) {
    Rat acc = 0;
    for (size_t j = 1; j <= n && j < a.size(); ++j) acc += a[j] * inv[n - j];
    inv[n] = -acc / a[0];
  }
  return inv;
}

// first E Taylor coefficients of P at x0: P(x0 + eps)
EpsPoly taylor_at(const RatPoly& P, const Rat& x0, size_t E) {
  RatPoly sh = P.shifted(x0);
  EpsPoly out(E, Rat(0));
  for (size_t i = 0; i < E && (int)i <= sh.degree(); ++i) out[i] = sh.coeff((int)i);
  return out;
}

struct ThetaForm {
  std::vector<RatPoly> P;  // P_n(theta), n = 0..N
};

ThetaForm theta_form(const OdeOperator& op, const Rat& s) {
  int r = op.order();
  // A_i(tau) = p_i(tau + s) * tau^(r-i); tau^r L = sum_n tau^n P_n(theta)
  // with P_n = sum_i [tau^n] A_i * theta(theta-1)...(theta-i+1)
  std::vector<RatPoly> fall(r + 1);
  fall[0] = RatPoly(std::vector<Rat>{Rat(1)});
  for (int i = 1; i <= r; ++i) {
    // fall[i] = fall[i-1] * (theta - (i-1))
    RatPoly lin(std::vector<Rat>{Rat(-(i - 1)), Rat(1)});
    fall[i] = fall[i - 1] * lin;
  }
  int maxn = 0;
  std::vector<RatPoly> A(r + 1);
  for (int i = 0; i <= r; ++i) {
    RatPoly sh = op.coeffs[i].shifted(s);
    // multiply by tau^(r-i)
    std::vector<Rat> c(sh.coeffs.size() + (r - i), Rat(0));
    for (size_t j = 0; j < sh.coeffs.size(); ++j) c[j + (r - i)] = sh.coeffs[j];
    A[i] = RatPoly(std::move(c));
    maxn = std::max(maxn, A[i].degree());
  }
  ThetaForm tf;
  tf.P.assign(maxn + 1, RatPoly{});
  for (int i = 0; i <= r; ++i)
    for (int n = 0; n <= A[i].degree(); ++n)
      if (A[i].coeff(n) != 0) tf.P[n] = tf.P[n] + A[i].coeff(n) * fall[i];
  // strip the common tau-power so that P_0 is the indicial polynomial
  size_t c0 = 0;
  while (c0 < tf.P.size() && tf.P[c0].is_zero()) ++c0;
  tf.P.erase(tf.P.begin(), tf.P.begin() + c0);
  if (tf.P.empty()) throw DomainError("theta_form: zero operator");
  return tf;
}

struct IndicialRoot {
  Rat value;
  int mult;
};

std::vector<IndicialRoot> indicial_roots(const RatPoly& P0, int order) {
  if (P0.degree() != order)
    throw DomainError("frobenius: point is not regular singular");
  IntPoly ip = integerize(P0);
  auto roots = extract_rational_roots(ip);
  if ((int)roots.size() != order)
    throw DomainError("frobenius: irrational local exponents unsupported");
  std::sort(roots.begin(), roots.end());
  std::vector<IndicialRoot> out;
  for (const auto& r : roots) {
    if (!out.empty() && out.back().value == r)
      out.back().mult++;
    else
      out.push_back({r, 1});
  }
  return out;
}

}  // namespace

std::vector<FrobeniusSolution> frobenius_basis(const OdeOperator& op,
                                               const Rat& s, int nterms) {
  ThetaForm tf = theta_form(op, s);
  int r = op.order();
  auto roots = indicial_roots(tf.P[0], r);
  int Nmax = (int)tf.P.size() - 1;

  // congruence classes mod 1
  std::vector<std::vector<IndicialRoot>> classes;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<IndicialRoot> cls{roots[i]};
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      Rat diff = roots[j].value - roots[i].value;
      if (denominator(diff) == 1) {
        cls.push_back(roots[j]);
        used[j] = true;
      }
    }
    classes.push_back(std::move(cls));
  }

  std::vector<FrobeniusSolution> basis;
  for (const auto& cls : classes) {
    for (size_t ri = 0; ri < cls.size(); ++ri) {
      const Rat& lambda = cls[ri].value;
      int mu = cls[ri].mult;
      size_t E = (size_t)mu;
      for (size_t rj = ri + 1; rj < cls.size(); ++rj) E += cls[rj].mult;

      // c_0(eps) = prod over larger roots (eps - (lambda_j - lambda))^mult_j
      EpsPoly c0(E, Rat(0));
      c0[0] = 1;
      for (size_t rj = ri + 1; rj < cls.size(); ++rj) {
        Rat off = cls[rj].value - lambda;  // positive integer
        for (int t = 0; t < cls[rj].mult; ++t) {
          EpsPoly lin(E, Rat(0));
          lin[0] = -off;
          if (E > 1) lin[1] = 1;
          c0 = eps_mul(c0, lin, E);
        }
      }

      std::vector<EpsPoly> c(nterms + 1, EpsPoly(E, Rat(0)));
      c[0] = c0;
      for (int m = 1; m <= nterms; ++m) {
        EpsPoly rhs(E, Rat(0));
        for (int n = 1; n <= std::min(m, Nmax); ++n) {
          if (tf.P[n].is_zero()) continue;
          EpsPoly pv = taylor_at(tf.P[n], lambda + Rat(m - n), E);
          EpsPoly prod = eps_mul(pv, c[m - n], E);
          for (size_t l = 0; l < E; ++l) rhs[l] -= prod[l];
        }
        EpsPoly p0 = taylor_at(tf.P[0], lambda + Rat(m), E);
        size_t v = 0;
        while (v < E && p0[v] == 0) ++v;
        if (v == E) throw VerificationError("frobenius: degenerate division");
        if (v > 0) {
          for (size_t l = 0; l < v; ++l)
            if (rhs[l] != 0)
              throw VerificationError("frobenius: resonance mismatch");
          // shift down by v; top v entries become unknown (consumed budget)
          EpsPoly sh(E, Rat(0));
          for (size_t l = v; l < E; ++l) sh[l - v] = rhs[l];
          EpsPoly unit(E - v > 0 ? E : 1, Rat(0));
          unit.assign(E, Rat(0));
          for (size_t l = 0; l + v < E; ++l) unit[l] = p0[l + v];
          for (size_t l = E - v; l < E; ++l) unit[l] = 0;
          if (unit[0] == 0)
            throw VerificationError("frobenius: zero unit part");
          c[m] = eps_mul(sh, eps_inv_unit(unit, E), E);
        } else {
          c[m] = eps_mul(rhs, eps_inv_unit(p0, E), E);
        }
      }

      for (int l = 0; l < mu; ++l) {
        FrobeniusSolution sol;
        sol.exponent = lambda;
        sol.coeffs.assign(nterms + 1, std::vector<Rat>(l + 1, Rat(0)));
        for (int m = 0; m <= nterms; ++m)
          for (int b = 0; b <= l; ++b) sol.coeffs[m][b] = c[m][l - b];
        basis.push_back(std::move(sol));
      }
    }
  }
  if ((int)basis.size() != r)
    throw VerificationError("frobenius: basis dimension mismatch");
  return basis;
}

// ---------------------------------------------------------------------------
// Taylor-method continuation
// ---------------------------------------------------------------------------
namespace {

struct CPoly {
  std::vector<Cplx> c;  // ascending
};

CPoly to_cpoly(const RatPoly& p) {
  CPoly out;
  out.c.resize(p.coeffs.size());
  for (size_t i = 0; i < p.coeffs.size(); ++i) out.c[i] = Cplx(rat_to_real(p.coeffs[i]));
  return out;
}

// Taylor shift: coefficients of p(z + u) in u
CPoly shift_cpoly(const CPoly& p, const Cplx& z) {
  CPoly out = p;
  int n = (int)out.c.size();
  for (int i = 0; i < n - 1; ++i)
    for (int j = n - 2; j >= i; --j) out.c[j] += z * out.c[j + 1];
  return out;
}

struct StepResult {
  std::vector<Cplx> Y;
  Real tail;
  bool converged;
};

// one Taylor step of size h from z with data Y = (y, y', .., y^(r-1))
StepResult taylor_step(const std::vector<CPoly>& ops, int r, const Cplx& z,
                       const std::vector<Cplx>& Y, const Cplx& h,
                       const Real& tol, int max_order) {
  std::vector<CPoly> sh(ops.size());
  for (size_t i = 0; i < ops.size(); ++i) sh[i] = shift_cpoly(ops[i], z);

  std::vector<Cplx> c(r);
  Real fact = 1;
  for (int l = 0; l < r; ++l) {
    if (l > 0) fact *= l;
    c[l] = Y[l];
    c[l].re /= fact;
    c[l].im /= fact;
  }

  Real habs = abs(h);
  Real hpow = 1;
  Real scale = 0;
  for (int l = 0; l < r; ++l) {
    Real t = abs(c[l]) * hpow;
    if (t > scale) scale = t;
    hpow *= habs;
  }
  if (scale == 0) scale = 1;

  const Cplx& top = sh[r].c[0];  // p_r(z) != 0 away from singularities
  int consecutive_small = 0;
  int N = r - 1;
  std::vector<Real> habs_pow{Real(1)};
  for (int i = 1; i <= max_order + r + 2; ++i)
    habs_pow.push_back(habs_pow.back() * habs);

  while (N + 1 <= max_order) {
    int n = N + 1 - r;  // generate c[N+1] from relation at u^n; need n >= 0
    if (n < 0) {
      ++N;
      c.resize(N + 1);
      continue;
    }
    Cplx acc;
    for (int i = 0; i <= r; ++i) {
      const auto& pc = sh[i].c;
      for (int j = 0; j < (int)pc.size(); ++j) {
        if (n - j < 0) break;
        int idx = n - j + i;
        if (i == r && j == 0) continue;  // the unknown
        if (idx > N) continue;           // not yet generated => zero? no:
        // indices above N other than the unknown cannot occur: idx <= n+i
        // and i <= r, j >= 0 gives idx <= n + r = N + 1 with equality only
        // for (i = r, j = 0)
        Real fall = 1;
        for (int l = 0; l < i; ++l) fall *= Real(n - j + i - l);
        acc += Real(fall) * (pc[j] * c[idx]);
      }
    }
    Real ffall = 1;
    for (int l = 0; l < r; ++l) ffall *= Real(n + r - l);
    Cplx cnew = Cplx(Real(0)) - acc / (Cplx(ffall) * top);
    c.push_back(cnew);
    ++N;

    Real term = abs(cnew) * habs_pow[N];
    if (term < tol * scale) {
      if (++consecutive_small >= 4 && N >= 2 * r + 4) break;
    } else {
      consecutive_small = 0;
    }
  }

  StepResult res;
  res.converged = consecutive_small >= 4;
  // y^(l)(z+h) = sum_{m>=l} m!/(m-l)! c_m h^(m-l), Horner from the top
  res.Y.assign(r, Cplx());
  for (int l = 0; l < r; ++l) {
    Cplx acc;
    for (int m = N; m >= l; --m) {
      acc = acc * h;
      Real fall = 1;
      for (int i = 0; i < l; ++i) fall *= Real(m - i);
      acc += Real(fall) * c[m];
    }
    res.Y[l] = acc;
  }
  // crude tail estimate: the last few generated terms
  Real tail = 0;
  for (int m = std::max(r, N - 3); m <= N; ++m)
    tail += abs(c[m]) * habs_pow[m];
  res.tail = tail;
  return res;
}

Real min_distance(const Cplx& z, const std::vector<Cplx>& sings) {
  Real best = -1;
  for (const auto& s : sings) {
    Real d = abs(z - s);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

struct BasisCacheKey {
  std::string op_id;
  Rat s;
  bool operator<(const BasisCacheKey& o) const {
    if (op_id != o.op_id) return op_id < o.op_id;
    return s < o.s;
  }
};

std::string operator_id(const OdeOperator& op) {
  std::ostringstream os;
  for (const auto& p : op.coeffs) {
    for (const auto& c : p.coeffs) os << c.str() << ",";
    os << ";";
  }
  return os.str();
}

std::map<BasisCacheKey, std::pair<int, std::vector<FrobeniusSolution>>>
    g_basis_cache;
std::mutex g_basis_mutex;

std::vector<FrobeniusSolution> cached_basis(const OdeOperator& op, const Rat& s,
                                            int nterms) {
  BasisCacheKey key{operator_id(op), s};
  {
    std::lock_guard<std::mutex> lock(g_basis_mutex);
    auto it = g_basis_cache.find(key);
    if (it != g_basis_cache.end() && it->second.first >= nterms)
      return it->second.second;
  }
  auto basis = frobenius_basis(op, s, nterms);
  std::lock_guard<std::mutex> lock(g_basis_mutex);
  g_basis_cache[key] = {nterms, basis};
  return basis;
}

// value and first r-1 derivatives of a Frobenius solution at tau (principal
// branch of log)
std::vector<Cplx> eval_frobenius(const FrobeniusSolution& sol, int r,
                                 const Cplx& tau) {
  // symbolic derivatives stay in the same format with exponent shifted by -1:
  // d/dtau [tau^(l+m) log^b/b!] = (l+m) tau^(l+m-1) log^b/b!
  //                               + tau^(l+m-1) log^(b-1)/(b-1)!
  struct Series {
    Rat expo;
    std::vector<std::vector<Rat>> co;
  };
  std::vector<Series> der(r);
  der[0] = {sol.exponent, sol.coeffs};
  for (int l = 1; l < r; ++l) {
    const Series& prev = der[l - 1];
    Series cur;
    cur.expo = prev.expo - 1;
    cur.co.assign(prev.co.size(), {});
    for (size_t m = 0; m < prev.co.size(); ++m) {
      size_t B = prev.co[m].size();
      cur.co[m].assign(B, Rat(0));
      for (size_t b = 0; b < B; ++b) {
        cur.co[m][b] += (prev.expo + Rat((long)m)) * prev.co[m][b];
        if (b + 1 < B) cur.co[m][b] += prev.co[m][b + 1];
      }
    }
    der[l] = std::move(cur);
  }

  Cplx lg = log(tau);
  std::vector<Cplx> out(r);
  for (int l = 0; l < r; ++l) {
    const Series& sr = der[l];
    // log powers
    size_t Bmax = 0;
    for (const auto& row : sr.co) Bmax = std::max(Bmax, row.size());
    std::vector<Cplx> lgp(Bmax, Cplx(Real(1)));
    Real bf = 1;
    for (size_t b = 1; b < Bmax; ++b) {
      bf *= (long)b;
      lgp[b] = pow_int(lg, (long long)b);
      lgp[b].re /= bf;
      lgp[b].im /= bf;
    }
    // tau^expo: exponent rational
    Cplx texp = exp(Cplx(rat_to_real(sr.expo)) * lg);
    Cplx tacc = texp;
    Cplx sum;
    for (size_t m = 0; m < sr.co.size(); ++m) {
      Cplx inner;
      for (size_t b = 0; b < sr.co[m].size(); ++b) {
        if (sr.co[m][b] == 0) continue;
        inner += Cplx(rat_to_real(sr.co[m][b])) * lgp[b];
      }
      sum += tacc * inner;
      tacc *= tau;
    }
    out[l] = sum;
  }
  return out;
}

// limit of the solution at tau -> 0 for a gamma-combination; returns the
// finite part and accumulates the magnitude of divergent/nonvanishing terms
Cplx frobenius_limit(const std::vector<FrobeniusSolution>& basis,
                     const std::vector<Cplx>& gamma, Real& err) {
  Cplx finite;
  for (size_t i = 0; i < basis.size(); ++i) {
    const auto& sol = basis[i];
    for (size_t m = 0; m < sol.coeffs.size(); ++m) {
      Rat e = sol.exponent + Rat((long)m);
      if (e > 0) break;
      for (size_t b = 0; b < sol.coeffs[m].size(); ++b) {
        if (sol.coeffs[m][b] == 0) continue;
        Cplx contrib = gamma[i] * Cplx(rat_to_real(sol.coeffs[m][b]));
        if (e == 0 && b == 0)
          finite += contrib;
        else
          err += abs(contrib);  // must cancel across the combination
      }
    }
  }
  return finite;
}

std::vector<Cplx> solve_linear(std::vector<std::vector<Cplx>> A,
                               std::vector<Cplx> rhs) {
  size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    Real best = abs(A[col][col]);
    for (size_t i = col + 1; i < n; ++i) {
      Real v = abs(A[i][col]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0) throw VerificationError("solve_linear: singular system");
    std::swap(A[col], A[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (size_t i = col + 1; i < n; ++i) {
      Cplx f = A[i][col] / A[col][col];
      for (size_t j = col; j < n; ++j) A[i][j] -= f * A[col][j];
      rhs[i] -= f * rhs[col];
    }
  }
  std::vector<Cplx> x(n);
  for (size_t i = n; i-- > 0;) {
    Cplx acc = rhs[i];
    for (size_t j = i + 1; j < n; ++j) acc -= A[i][j] * x[j];
    x[i] = acc / A[i][i];
  }
  return x;
}

}  // namespace

FlowState prepare_initial_state(const OdeOperator& op,
                                const LocalExpansion& init,
                                const std::pair<Rat, Rat>& w0,
                                unsigned digits) {
  int r = op.order();
  unsigned wp_digits = digits + 16 + 15;
  PrecisionGuard guard(wp_digits);
  Real tol = pow(Real(10), -(long)(digits + 10));

  Cplx t0(rat_to_real(w0.first), rat_to_real(w0.second));
  {
    Real t0a = abs(t0);
    Real rad = rat_to_real(init.radius);
    if (!(t0a < rad))
      throw DomainError("continue_solution: base point outside init radius");
    // geometric tail bound with coefficient growth radius^-m
    Real ratio = t0a / rad;
    Real tail = pow(ratio, (long)init.coeffs.size()) / (1 - ratio);
    if (tail > tol)
      throw DomainError("continue_solution: local expansion too short");
  }

  std::vector<Cplx> Y(r);
  {
    // y^(l) = (P_l(log t))/t^l + S^(l)(t),  P_{l+1} = P_l' - l P_l
    Cplx lg = log(t0);
    std::vector<Cplx> P{Cplx(rat_to_real(init.c0)), Cplx(rat_to_real(init.c1)),
                        Cplx(rat_to_real(init.chalf))};
    Cplx tpow(Real(1));
    for (int l = 0; l < r; ++l) {
      if (l > 0) {
        // P <- P' - (l-1) P
        std::vector<Cplx> np(P.size(), Cplx());
        for (size_t j = 1; j < P.size(); ++j) np[j - 1] += Real((long)j) * P[j];
        for (size_t j = 0; j < P.size(); ++j) np[j] -= Real(l - 1) * P[j];
        P = std::move(np);
        tpow *= t0;
      }
      Cplx logpart;
      for (size_t j = P.size(); j-- > 0;) logpart = logpart * lg + P[j];
      if (l > 0) logpart /= tpow;
      // l-th derivative of the power series part at t0
      Cplx ser;
      Cplx tp(Real(1));
      for (size_t m = l; m < init.coeffs.size(); ++m) {
        Real fall = 1;
        for (int i = 0; i < l; ++i) fall *= Real((long)(m - i));
        ser += Real(fall) * Cplx(rat_to_real(init.coeffs[m])) * tp;
        tp *= t0;
      }
      Y[l] = logpart + ser;
    }
  }
  return FlowState{w0, std::move(Y), Real(0)};
}

ContinuationResult continue_from(const OdeOperator& op, const FlowState& state,
                                 const std::vector<std::pair<Rat, Rat>>& wps,
                                 unsigned digits) {
  if (wps.empty()) throw DomainError("continue_from: no waypoints");
  int r = op.order();
  unsigned wp_digits = digits + 16 + 5 * (unsigned)(wps.size() + 1);
  PrecisionGuard guard(wp_digits);
  Real tol = pow(Real(10), -(long)(digits + 10));

  const auto& end_wp = wps.back();
  bool endpoint_singular = false;
  Rat end_sing(0);
  if (end_wp.second == 0) {
    for (const auto& s : rational_singularities(op))
      if (s == end_wp.first) {
        endpoint_singular = true;
        end_sing = s;
        break;
      }
  }

  std::vector<Cplx> sings = singularities(op, wp_digits);

  std::vector<CPoly> ops(op.coeffs.size());
  for (size_t i = 0; i < op.coeffs.size(); ++i) ops[i] = to_cpoly(op.coeffs[i]);

  Cplx z(rat_to_real(state.at.first), rat_to_real(state.at.second));
  std::vector<Cplx> Y = state.Y;
  Real err_acc = state.err;

  for (size_t seg = 0; seg < wps.size(); ++seg) {
    Cplx target(rat_to_real(wps[seg].first), rat_to_real(wps[seg].second));
    bool last = seg + 1 == wps.size();
    Real stop_radius = 0;
    Cplx sing_pt;
    if (last && endpoint_singular) {
      sing_pt = Cplx(rat_to_real(end_sing), Real(0));
      // connect radius: quarter of the distance to the nearest other
      // singularity
      Real rho = -1;
      for (const auto& s : sings) {
        Real d = abs(s - sing_pt);
        if (d > Real(1) / Real(1000000) && (rho < 0 || d < rho)) rho = d;
      }
      if (rho < 0) rho = 1;
      stop_radius = rho / 4;
    }

    while (true) {
      Cplx to_go = target - z;
      Real dist_left = abs(to_go);
      if (stop_radius > 0 && dist_left <= stop_radius * Real(101) / Real(100))
        break;
      if (dist_left == 0) break;
      Real dmin = min_distance(z, sings);
      Real hmax = dmin * Real(2) / Real(5);
      Real hlen = dist_left < hmax ? dist_left : hmax;
      if (stop_radius > 0 && dist_left - hlen < stop_radius)
        hlen = dist_left - stop_radius;
      Cplx h = (Real(hlen) / dist_left) * to_go;

      StepResult st = taylor_step(ops, r, z, Y, h, tol, 512);
      int halvings = 0;
      while (!st.converged && halvings < 8) {
        h.re /= 2;
        h.im /= 2;
        hlen /= 2;
        st = taylor_step(ops, r, z, Y, h, tol, 512);
        ++halvings;
      }
      if (!st.converged)
        throw VerificationError("continue_solution: Taylor order cap reached");
      Y = st.Y;
      err_acc += st.tail;
      z += h;
    }
  }

  ContinuationResult out;
  out.error_estimate = err_acc;
  if (!endpoint_singular) {
    out.values = Y;
    return out;
  }

  // Frobenius connection at the endpoint
  Cplx send(rat_to_real(end_sing), Real(0));
  Cplx tau = z - send;
  int nterms = (int)(2.0 * (digits + 14)) + 16;
  auto basis = cached_basis(op, end_sing, nterms);

  std::vector<std::vector<Cplx>> M(r, std::vector<Cplx>(r));
  for (int i = 0; i < r; ++i) {
    auto vals = eval_frobenius(basis[i], r, tau);
    for (int l = 0; l < r; ++l) M[l][i] = vals[l];
  }
  auto gamma = solve_linear(M, Y);
  Real lim_err = 0;
  Cplx limit = frobenius_limit(basis, gamma, lim_err);
  out.values.assign(r, Cplx());
  out.values[0] = limit;
  out.error_estimate = err_acc + lim_err;
  out.singular_endpoint = true;
  return out;
}

ContinuationResult continue_solution(const OdeOperator& op,
                                     const LocalExpansion& init,
                                     const PathPlan& path, unsigned digits) {
  if (path.waypoints.size() < 2)
    throw DomainError("continue_solution: need at least two waypoints");
  FlowState st = prepare_initial_state(op, init, path.waypoints[0], digits);
  std::vector<std::pair<Rat, Rat>> rest(path.waypoints.begin() + 1,
                                        path.waypoints.end());
  return continue_from(op, st, rest, digits);
}

}  // namespace cm::holonomic
