#include "cyclomahler/gaussperiod.hpp"

#include "cyclomahler/polyalg.hpp"

namespace cm::gaussperiod {

namespace nt = cm::numtheory;

GaussPeriodData gauss_period(std::uint64_t n, unsigned digits) {
  if (n == 0) throw DomainError("gauss_period: n must be positive");
  auto rec = nt::smallest_k(n);
  GaussPeriodData gp;
  gp.n = n;
  gp.k = rec.k;
  gp.p = rec.p;
  PrecisionGuard guard(digits + 12);
  if (rec.p == 2) {
    // n = 1, k = 1: alpha_1 = zeta_2 = -1
    gp.lambda = 1;
    gp.nu = 1;
    gp.conjugates = {Cplx(Real(-1))};
    return gp;
  }
  gp.lambda = nt::primitive_root(rec.p);
  gp.nu = nt::pow_mod(gp.lambda, n, rec.p);

  // exponent tables mod p
  std::vector<std::uint64_t> nupow(rec.k);
  nupow[0] = 1;
  for (std::uint64_t r = 1; r < rec.k; ++r)
    nupow[r] = nt::mul_mod(nupow[r - 1], gp.nu, rec.p);

  gp.conjugates.reserve(n);
  std::uint64_t lj = 1;
  for (std::uint64_t j = 1; j <= n; ++j) {
    lj = nt::mul_mod(lj, gp.lambda, rec.p);
    Cplx sum;
    for (std::uint64_t r = 0; r < rec.k; ++r) {
      std::uint64_t e = nt::mul_mod(lj, nupow[r], rec.p);
      sum += unit_root((long long)e, (long long)rec.p);
    }
    gp.conjugates.push_back(sum);
  }
  return gp;
}

IntPoly minimal_polynomial_gauss(std::uint64_t n, unsigned digits) {
  if (n < 2) throw DomainError("minimal_polynomial_gauss: n >= 2 required");
  auto rec = nt::smallest_k(n);
  if (rec.k < 2)
    throw DomainError("minimal_polynomial_gauss: alpha_n is a root of unity");

  for (unsigned dg = digits;; dg *= 2) {
    if (dg > 64 * digits + 4096)
      throw VerificationError("minimal_polynomial_gauss: precision exhausted");
    // working precision grows with the degree: n coefficient convolutions
    PrecisionGuard guard(dg + n);
    GaussPeriodData gp = gauss_period(n, dg + n);
    std::vector<Cplx> c{Cplx(Real(1))};
    for (const auto& a : gp.conjugates) {
      std::vector<Cplx> nc(c.size() + 1);
      for (size_t j = 0; j < c.size(); ++j) {
        nc[j + 1] += c[j];
        nc[j] += c[j] * (-a);
      }
      c = std::move(nc);
    }
    std::vector<Int> ic(c.size());
    Real worst = 0;
    for (size_t j = 0; j < c.size(); ++j) {
      Real rr;
      mpfr_round(rr.backend().data(), c[j].re.backend().data());
      Real d1 = abs(c[j].re - rr);
      Real d2 = abs(c[j].im);
      if (d1 > worst) worst = d1;
      if (d2 > worst) worst = d2;
      ic[j] = rr.convert_to<Int>();
    }
    if (worst >= Real(1) / Real(4)) continue;  // retry at doubled precision
    IntPoly f{std::move(ic)};
    if (f.degree() != (int)n || f.lead() != 1) continue;

    // verification is mandatory: roots and irreducibility
    bool roots_ok = true;
    Real tol = pow(Real(10), -(long)(dg / 4));
    for (const auto& a : gp.conjugates)
      if (abs(f.eval(a)) > tol * Real(1000)) {
        roots_ok = false;
        break;
      }
    if (!roots_ok) continue;
    if (!cm::polyalg::is_irreducible(f))
      throw VerificationError("minimal_polynomial_gauss: reducible output");
    return f;
  }
}

MahlerAlpha mahler_alpha(std::uint64_t n, unsigned digits) {
  PrecisionGuard guard(digits + 12);
  GaussPeriodData gp = gauss_period(n, digits + 12);
  MahlerAlpha out{Real(0), Real(0)};
  // conjugate evaluation error: k unit roots each correct to ~full precision
  Real ulp = pow(Real(10), -(long)(digits + 8));
  for (const auto& a : gp.conjugates) {
    out.value += log_plus(abs(a));
    out.error += Real((long)gp.k) * ulp;  // log+ is 1-Lipschitz
  }
  return out;
}

SamplePointSet sample_points(std::uint64_t n) {
  auto rec = nt::smallest_k(n);
  if (rec.k < 2) throw DomainError("sample_points: requires k(n) >= 2");
  SamplePointSet sp;
  sp.p = rec.p;
  sp.d = nt::euler_phi(rec.k);
  std::uint64_t lambda = nt::primitive_root(rec.p);
  std::uint64_t nu = nt::pow_mod(lambda, n, rec.p);
  sp.numerators.reserve(rec.p - 1);
  std::uint64_t lj = 1;
  for (std::uint64_t j = 1; j < rec.p; ++j) {
    lj = nt::mul_mod(lj, lambda, rec.p);
    std::vector<std::uint64_t> pt(sp.d);
    std::uint64_t cur = lj;
    for (std::uint64_t s = 0; s < sp.d; ++s) {
      pt[s] = cur;
      cur = nt::mul_mod(cur, nu, rec.p);
    }
    sp.numerators.push_back(std::move(pt));
  }
  return sp;
}

long long weyl_sum(std::uint64_t n, const std::vector<long long>& h) {
  bool allzero = true;
  for (auto x : h)
    if (x) allzero = false;
  if (allzero) throw DomainError("weyl_sum: h must be nonzero");
  auto rec = nt::smallest_k(n);
  std::uint64_t d = nt::euler_phi(rec.k);
  if (h.size() > d) throw DomainError("weyl_sum: h longer than phi(k)");
  std::uint64_t lambda = nt::primitive_root(rec.p);
  std::uint64_t nu = nt::pow_mod(lambda, n, rec.p);
  // P(nu) mod p
  std::uint64_t acc = 0;
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    long long c = *it % (long long)rec.p;
    if (c < 0) c += rec.p;
    acc = (nt::mul_mod(acc, nu, rec.p) + (std::uint64_t)c) % rec.p;
  }
  return acc == 0 ? (long long)(rec.p - 1) : -1;
}

Cplx weyl_sum_complex(std::uint64_t n, const std::vector<long long>& h,
                      unsigned digits) {
  PrecisionGuard guard(digits);
  auto sp = sample_points(n);
  Cplx sum;
  for (const auto& pt : sp.numerators) {
    long long e = 0;
    for (size_t s = 0; s < h.size(); ++s)
      e = (e + (long long)((__int128)h[s] * (long long)pt[s] %
                           (long long)sp.p)) %
          (long long)sp.p;
    sum += unit_root(e, (long long)sp.p);
  }
  return sum;
}

Real wasserstein_bound(std::uint64_t n, unsigned digits) {
  PrecisionGuard guard(digits);
  auto rec = nt::smallest_k(n);
  Real k((long)rec.k), p((long)rec.p);
  Real d((long)nt::euler_phi(rec.k));
  return 4 * sqrt(Real(3)) * k * (k + 1) / pow(p, 1 / d) + 2 * log(k) / p;
}

Real lot_residual(std::uint64_t n, const Real& m_c2, unsigned digits) {
  auto rec = nt::smallest_k(n);
  if (rec.k != 2) throw DomainError("lot_residual: requires k(n) = 2");
  PrecisionGuard guard(digits);
  auto ma = mahler_alpha(n, digits);
  return ma.value - Real((long)n) * m_c2;
}

}  // namespace cm::gaussperiod
