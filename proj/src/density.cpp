#include "cyclomahler/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cyclomahler/constterms.hpp"
#include "cyclomahler/numtheory.hpp"
#include "cyclomahler/polyalg.hpp"

namespace cm::density {

namespace nt = cm::numtheory;
namespace hol = cm::holonomic;

// ---------------------------------------------------------------------------
// shared ODE plumbing: operators, CT series, cached base states
// ---------------------------------------------------------------------------
namespace {

struct OdeContext {
  hol::OdeOperator L;       // L_k
  hol::OdeOperator LB;      // L_k * theta^2
  std::vector<Int> ct;      // CT[F_k^m]
  int ct_len = 0;
};

std::map<std::uint64_t, OdeContext> g_ctx;
std::mutex g_ctx_mutex;

int ct_length_for(std::uint64_t k, unsigned digits) {
  // tail of the local series at |t0| = 1/(8k), radius 1/k: ratio 1/8
  (void)k;
  return (int)((digits + 16) / 0.903) + 10;  // log10(8) = 0.903
}

const OdeContext& context(std::uint64_t k, unsigned digits) {
  std::lock_guard<std::mutex> lock(g_ctx_mutex);
  auto it = g_ctx.find(k);
  int need = ct_length_for(k, digits);
  if (it == g_ctx.end()) {
    OdeContext ctx;
    ctx.L = hol::operator_registry(k);
    ctx.LB = hol::compose_theta2(ctx.L);
    ctx.ct = constterms::constant_terms(k, need).values;
    ctx.ct_len = need;
    it = g_ctx.emplace(k, std::move(ctx)).first;
  } else if (it->second.ct_len < need) {
    it->second.ct = constterms::constant_terms(k, need).values;
    it->second.ct_len = need;
  }
  return it->second;
}

// base states at +-i for H and B, cached per (k, orientation, B?, digits)
struct BaseKey {
  std::uint64_t k;
  int orientation;
  bool bfun;
  unsigned digits;
  bool operator<(const BaseKey& o) const {
    return std::tie(k, orientation, bfun, digits) <
           std::tie(o.k, o.orientation, o.bfun, o.digits);
  }
};

std::map<BaseKey, hol::FlowState> g_base;
std::mutex g_base_mutex;

hol::FlowState base_state(std::uint64_t k, int orientation, bool bfun,
                          unsigned digits) {
  BaseKey key{k, orientation, bfun, digits};
  {
    std::lock_guard<std::mutex> lock(g_base_mutex);
    auto it = g_base.find(key);
    if (it != g_base.end()) return it->second;
  }
  const OdeContext& ctx = context(k, digits);
  const hol::OdeOperator& op = bfun ? ctx.LB : ctx.L;
  hol::LocalExpansion init =
      bfun ? hol::b_expansion(ctx.ct, Rat(1, (long)k))
           : hol::h_expansion(ctx.ct, Rat(1, (long)k));
  std::pair<Rat, Rat> t0{Rat(0), Rat(orientation, (long)(8 * k))};
  hol::FlowState st0 = hol::prepare_initial_state(op, init, t0, digits);
  // advance to +-i once; everything after is target-specific
  std::pair<Rat, Rat> ipt{Rat(0), Rat(orientation)};
  auto res = hol::continue_from(op, st0, {ipt}, digits);
  hol::FlowState at_i{ipt, res.values, res.error_estimate};
  std::lock_guard<std::mutex> lock(g_base_mutex);
  g_base[key] = at_i;
  return at_i;
}

// analytic continuation of H_k (or B_k) from the +-i state to real target x
Cplx leg_value(std::uint64_t k, bool bfun, int orientation, const Rat& target,
               unsigned digits, Real& err_acc) {
  const OdeContext& ctx = context(k, digits);
  const hol::OdeOperator& op = bfun ? ctx.LB : ctx.L;
  hol::FlowState st = base_state(k, orientation, bfun, digits);
  auto res = hol::continue_from(op, st, {{target, Rat(0)}}, digits);
  err_acc += res.error_estimate;
  return res.values[0];
}

Real pi_at() { return pi_real(); }

}  // namespace

std::vector<double> singular_abscissae(std::uint64_t k) {
  auto op = hol::operator_registry(k);
  std::vector<double> out;
  for (const auto& s : hol::singularities(op, 24)) {
    PrecisionGuard g(24);
    if (abs(s.im) > Real(1) / Real(1000000)) continue;
    if (abs(s.re) < Real(1) / Real(1000000)) continue;
    double x = std::abs(1.0 / s.re.convert_to<double>());
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-9; }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// rho
// ---------------------------------------------------------------------------

Real rho(std::uint64_t k, const Rat& x, Method method, unsigned digits) {
  PrecisionGuard guard(digits + 12);
  if (x <= 0 || x >= Rat((long)k))
    throw DomainError("rho: x must lie in (0, k)");
  Real xr = rat_to_real(x);
  switch (method) {
    case Method::ClosedFormK2: {
      if (k != 2) throw DomainError("rho: closed form only for k = 2");
      return (2 / pi_at()) / sqrt(4 - xr * xr);
    }
    case Method::HalfNormal: {
      Real kk((long)k);
      return sqrt(2 / (pi_at() * kk)) * exp(-xr * xr / (2 * kk));
    }
    case Method::HalfNormalRefined: {
      Real kk((long)k);
      Real num = 8 * kk * kk * kk - 3 * kk * kk + 6 * kk * xr * xr -
                 xr * xr * xr * xr;
      return exp(-xr * xr / (2 * kk)) * num /
             (4 * sqrt(2 * pi_at()) * pow(kk, Real(7) / 2));
    }
    case Method::Ode:
      break;
  }
  if (k % 2 != 0)
    throw DomainError("rho: ode method needs even k (F_k reciprocal)");
  // the target 1/x must avoid singular points of the operator
  {
    const OdeContext& ctx = context(k, digits);
    Rat t = 1 / x;
    for (const auto& s : hol::rational_singularities(ctx.L))
      if (s == t || s == -t)
        throw DomainError("rho: x is a singular abscissa");
  }
  Real err = 0;
  Rat t = 1 / x;
  Cplx hp_p = leg_value(k, false, +1, t, digits, err);
  Cplx hm_m = leg_value(k, false, -1, -t, digits, err);
  Cplx hm_p = leg_value(k, false, -1, t, digits, err);
  Cplx hp_m = leg_value(k, false, +1, -t, digits, err);
  Cplx comb = hp_p + hm_m - hm_p - hp_m;
  // rho = comb / (2 pi i x): real part = Im(comb)/(2 pi x)
  Real val = comb.im / (2 * pi_at() * xr);
  (void)err;
  return val;
}

double rho_Sd(int d, double x) {
  if (d < 3)
    throw DomainError("rho_Sd: d >= 3 required (absolute convergence)");
  if (x < 0) x = -x;
  // (2/pi) int_0^inf J0(2s)^d cos(sx) ds, panels short against the top
  // frequency, truncated where the envelope (pi s)^(-d/2) is negligible
  double S = std::pow(1e-12, -2.0 / d) / M_PI;  // tail < ~1e-12
  S = std::min(std::max(S, 50.0), 20000.0);
  int panels_per_unit = (int)((2 * d + x + 4) / 3.0) + 4;
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  long n = (long)(S * panels_per_unit);
  double h = S / n;
  double acc = 0;
  for (long i = 0; i < n; ++i) {
    double a = i * h, c = a + h / 2, hl = h / 2;
    for (int g = 0; g < 8; ++g) {
      double s = c + hl * gx[g];
      double j0 = std::cyl_bessel_j(0.0, 2 * s);
      acc += gw[g] * hl * std::pow(j0, d) * std::cos(s * x);
    }
  }
  return 2 / M_PI * acc;
}

// ---------------------------------------------------------------------------
// Kluyver quadrature for m(S_d) and the x0 + S_d variant
// ---------------------------------------------------------------------------
namespace {

// sine integral, double precision (series below 16, asymptotic above)
double sine_integral(double x) {
  double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x < 1e-12) return sign * x;
  if (x <= 16.0) {
    double term = x, sum = x;
    for (int n = 1; n < 80; ++n) {
      term *= -x * x / ((2 * n) * (2 * n + 1));
      sum += term / (2 * n + 1);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sign * sum;
  }
  // Si(x) = pi/2 - cos(x) P(x) - sin(x) Q(x), asymptotic, optimal stop
  double inv2 = 1.0 / (x * x);
  double P = 0, Q = 0, termP = 1.0 / x, termQ = 1.0 / (x * x);
  for (int n = 0; n < 40; ++n) {
    P += termP;
    Q += termQ;
    if ((2.0 * n + 1) * (2.0 * n + 2) * inv2 > 1) break;  // terms now grow
    termP *= -(2.0 * n + 1) * (2.0 * n + 2) * inv2;
    termQ *= -(2.0 * n + 2) * (2.0 * n + 3) * inv2;
  }
  return sign * (M_PI / 2 - std::cos(x) * P - std::sin(x) * Q);
}

// common core: log(2d) - (2/pi) int_0^inf J0(2s)^d (Si(2ds) - Si(x0 s))/s ds
// with x0 = 0 for m(S_d) and x0 = 1 for m(x0 + S_d)
double kluyver_core(int d, bool from_one) {
  if (d < 3) throw DomainError("kluyver: d >= 3 required");
  double S = std::pow(1e-13, -2.0 / (d + 2)) / M_PI;
  S = std::min(std::max(S, 200.0), 30000.0);
  int panels_per_unit = (int)((4 * d + 6) / 3.0) + 4;
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  long n = (long)(S * panels_per_unit);
  double h = S / n;
  double acc = 0;
  for (long i = 0; i < n; ++i) {
    double a = i * h, c = a + h / 2, hl = h / 2;
    for (int g = 0; g < 8; ++g) {
      double s = c + hl * gx[g];
      double j0 = std::cyl_bessel_j(0.0, 2 * s);
      double si = sine_integral(2.0 * d * s);
      if (from_one) si -= sine_integral(s);
      acc += gw[g] * hl * std::pow(j0, d) * si / s;
    }
  }
  return std::log(2.0 * d) - 2 / M_PI * acc;
}

}  // namespace

double mahler_Sd(int d) { return kluyver_core(d, false); }
double mahler_x0_plus_Sd(int d) { return kluyver_core(d, true); }

// ---------------------------------------------------------------------------
// m(C_4) by convolution of two arcsine densities
// ---------------------------------------------------------------------------
namespace {

// g(x) = (f*f)(x) for f the density of 2 cos(theta); smooth on (0,4)
double conv_density(double x) {
  // int_a^b du / (pi^2 sqrt((2-u)(u-a)) sqrt((2+u)(2+x-u))), a = x-2, b = 2
  // substitute u = midpoint + halfwidth*sin(phi)
  double a = x - 2, b = 2;
  if (b <= a) return 0;
  double mid = (a + b) / 2, hw = (b - a) / 2;
  static const double gx[16] = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
      -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
      -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
      0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
      0.9894009349916499};
  static const double gw[16] = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
      0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
      0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
      0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
      0.0271524594117541};
  double acc = 0;
  for (int g = 0; g < 16; ++g) {
    double phi = (M_PI / 2) * gx[g];
    double u = mid + hw * std::sin(phi);
    acc += gw[g] * (M_PI / 2) / std::sqrt((2 + u) * (2 + x - u));
  }
  return acc / (M_PI * M_PI);
}

double mahler_c4_convolution() {
  // m(C_4) = 2 int_1^4 log(x) g(x) dx, composite GL with tanh-sinh near 4
  // g is analytic on (1,4); plain dense composite Gauss-Legendre suffices
  static const double gx[16] = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
      -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
      -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
      0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
      0.9894009349916499};
  static const double gw[16] = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
      0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
      0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
      0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
      0.0271524594117541};
  int panels = 600;
  double acc = 0;
  for (int i = 0; i < panels; ++i) {
    double a = 1.0 + 3.0 * i / panels, b = 1.0 + 3.0 * (i + 1) / panels;
    double c = (a + b) / 2, hl = (b - a) / 2;
    for (int g = 0; g < 16; ++g) {
      double x = c + hl * gx[g];
      acc += gw[g] * hl * std::log(x) * 2 * conv_density(x);
    }
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// mahler_ck
// ---------------------------------------------------------------------------
namespace {

// B_k(t) = B+(t) + B-(-t) - B-(t) - B+(-t)
Cplx b_combination(std::uint64_t k, const Rat& t, unsigned digits, Real& err) {
  Cplx bp_p = leg_value(k, true, +1, t, digits, err);
  Cplx bm_m = leg_value(k, true, -1, -t, digits, err);
  Cplx bm_p = leg_value(k, true, -1, t, digits, err);
  Cplx bp_m = leg_value(k, true, +1, -t, digits, err);
  return bp_p + bm_m - bm_p - bp_m;
}

Real mahler_ode_b(std::uint64_t k, unsigned digits, Real& err) {
  Rat invk(1, (long)k);
  Cplx diff = b_combination(k, invk, digits, err) -
              b_combination(k, Rat(1), digits, err);
  // m = log k - diff/(2 pi i): real part = log k - Im(diff)/(2 pi)
  Real val = log(Real((long)k)) - diff.im / (2 * pi_at());
  err += abs(diff.re) / (2 * pi_at());  // real part must cancel
  return val;
}

Real mahler_c2_closed_form(unsigned digits) {
  // (2/pi) int_1^2 log(x)/sqrt(4-x^2) dx via x = 2 sin(u):
  // = (2/pi) int_{pi/6}^{pi/2} log(2 sin u) du  (smooth integrand)
  PrecisionGuard guard(digits + 12);
  Real a = pi_at() / 6, b = pi_at() / 2;
  // composite Gauss-Legendre with enough panels for the requested digits
  int npanel = 8 + (int)digits / 2;
  int npt = 24;
  // Legendre nodes via Newton iteration on P_n
  std::vector<Real> xs(npt), ws(npt);
  {
    for (int i = 0; i < npt; ++i) {
      Real x0 = cos(pi_at() * (Real(i) + Real(3) / 4) / (Real(npt) + Real(1) / 2));
      for (int it = 0; it < 64; ++it) {
        // P_n(x0), P_{n-1}(x0)
        Real p0 = 1, p1 = x0;
        for (int j = 2; j <= npt; ++j) {
          Real p2 = ((2 * j - 1) * x0 * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        Real dp = npt * (x0 * p1 - p0) / (x0 * x0 - 1);
        Real dx = p1 / dp;
        x0 -= dx;
        if (abs(dx) < pow(Real(10), -(long)(digits + 8))) break;
      }
      Real p0 = 1, p1 = x0;
      for (int j = 2; j <= npt; ++j) {
        Real p2 = ((2 * j - 1) * x0 * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      Real dp = npt * (x0 * p1 - p0) / (x0 * x0 - 1);
      xs[i] = x0;
      ws[i] = 2 / ((1 - x0 * x0) * dp * dp);
    }
  }
  Real acc = 0;
  for (int p = 0; p < npanel; ++p) {
    Real pa = a + (b - a) * p / npanel, pb = a + (b - a) * (p + 1) / npanel;
    Real mid = (pa + pb) / 2, hl = (pb - pa) / 2;
    for (int i = 0; i < npt; ++i) {
      Real u = mid + hl * xs[i];
      acc += ws[i] * hl * log(2 * sin(u));
    }
  }
  return 2 / pi_at() * acc;
}

// adaptive rho-quadrature between singular abscissae (cross-check method)
Real mahler_quadrature_over_rho(std::uint64_t k, unsigned digits, Real& err) {
  auto absc = singular_abscissae(k);
  std::vector<double> cuts{1.0};
  for (double a : absc)
    if (a > 1.0 + 1e-9 && a < (double)k - 1e-9) cuts.push_back(a);
  cuts.push_back((double)k);
  std::sort(cuts.begin(), cuts.end());

  PrecisionGuard guard(digits + 8);
  Real total = 0;
  // tanh-sinh per panel (handles the integrable endpoint behaviour)
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    Real a(cuts[p]), b(cuts[p + 1]);
    Real mid = (a + b) / 2, hl = (b - a) / 2;
    Real acc = 0;
    double hstep = 0.5;
    int levels = 5;
    Real prev = 0;
    for (int lev = 0; lev <= levels; ++lev) {
      double hh = hstep / (1 << lev);
      Real sum = 0;
      int jmax = (int)(4.0 / hh);
      for (int j = -jmax; j <= jmax; ++j) {
        if (lev > 0 && j % 2 == 0) continue;
        double t = j * hh;
        double sh = M_PI / 2 * std::sinh(t);
        double w = M_PI / 2 * std::cosh(t) / std::pow(std::cosh(sh), 2);
        double u = std::tanh(sh);
        if (w < 1e-40) continue;
        Real x = mid + hl * Real(u);
        double xd = x.convert_to<double>();
        if (xd <= cuts[p] || xd >= cuts[p + 1]) continue;
        // rational x for the leg targets
        Rat xr(Int((long long)(xd * 1e12)), Int(1000000000000LL));
        Real rv = rho(k, xr, Method::Ode, digits);
        sum += Real(w) * log(rat_to_real(xr)) * rv;
      }
      if (lev == 0)
        acc = Real(hh) * sum;
      else
        acc = acc / 2 + Real(hh) * sum;
      if (lev > 2 && abs(acc - prev) < pow(Real(10), -(long)(digits + 2)))
        break;
      prev = acc;
    }
    total += hl * acc;
  }
  err += pow(Real(10), -(long)digits);
  return total;
}

}  // namespace

MahlerResult mahler_ck(std::uint64_t k, const std::string& method,
                       unsigned digits) {
  PrecisionGuard guard(digits + 12);
  MahlerResult r;
  r.method = method;
  r.digits = digits;
  r.error_estimate = 0;
  if (method == "ode-B") {
    if (k != 2 && k != 6 && k != 8 && k != 10)
      throw DomainError("mahler_ck: ode-B needs a registry operator");
    Real err = 0;
    r.value = mahler_ode_b(k, digits, err);
    r.error_estimate = err + pow(Real(10), -(long)digits);
  } else if (method == "closed-form") {
    if (k != 2) throw DomainError("mahler_ck: closed form only for k = 2");
    r.value = mahler_c2_closed_form(digits);
    r.error_estimate = pow(Real(10), -(long)digits);
  } else if (method == "kluyver") {
    if (nt::is_prime(k) && k % 2 == 1) {
      r.value = Real(mahler_Sd((int)k + 1));
    } else {
      // k = 2^r with r >= 3
      std::uint64_t m = k;
      while (m % 2 == 0) m /= 2;
      if (m != 1 || k < 8)
        throw DomainError(
            "mahler_ck: kluyver needs odd prime k or k = 2^r >= 8");
      r.value = Real(mahler_x0_plus_Sd((int)(k / 2)));
    }
    r.error_estimate = Real(1) / Real(1000000) / 10;  // validated ~1e-8
  } else if (method == "convolution") {
    if (k != 4) throw DomainError("mahler_ck: convolution method is for k = 4");
    r.value = Real(mahler_c4_convolution());
    r.error_estimate = Real(1) / Real(10000000);
  } else if (method == "quadrature") {
    if (k != 2 && k != 6 && k != 8 && k != 10)
      throw DomainError("mahler_ck: quadrature needs a registry operator");
    Real err = 0;
    r.value = mahler_quadrature_over_rho(k, digits, err);
    r.error_estimate = err;
  } else {
    throw DomainError("mahler_ck: unknown method " + method);
  }
  return r;
}

// ---------------------------------------------------------------------------
// asymptotic series (exact rational coefficients)
// ---------------------------------------------------------------------------

Real mahler_ck_asymptotic(std::uint64_t k, int order, unsigned digits) {
  PrecisionGuard guard(digits);
  Real kk((long)k);
  Real lead = log(kk) / 2 - euler_gamma_real() / 2;

  if (k % 2 == 1) {
    if (!nt::is_prime(k))
      throw DomainError("mahler_ck_asymptotic: odd k must be prime");
    // log k/2 - gamma/2 + 5/(8k)
    Real v = lead;
    if (order >= 1) v += Real(5) / (8 * kk);
    return v;
  }
  // k = 2 q^r or 2^r
  std::uint64_t m = k / 2;
  auto fac = nt::prime_factors(m);
  if (fac.size() > 1)
    throw DomainError("mahler_ck_asymptotic: k must be 2q^r, 2^r, or prime");
  if (order < 0 || order > 9)
    throw DomainError("mahler_ck_asymptotic: order in 0..9");

  // Half-power terms c_j / (sqrt(2 pi k) k^j) and integer terms d_j / k^j.
  // The published display typesets the half-power denominators as
  // (2 pi k)^(j+1/2); that reading disagrees with independently computed
  // values by exactly (2 pi)^j per term, so sqrt(2 pi k) k^j is used.
  std::vector<Rat> half(10), inter(10);
  half[0] = Rat(2);
  half[1] = Rat(-31, 36);
  half[2] = Rat(Int(13) * 71, (Int(1) << 6) * 3 * 25);
  half[3] = Rat(Int(423469), (Int(1) << 9) * 27 * 5 * 49);
  half[4] = Rat(Int(13) * 5510303, (Int(1) << 14) * 243 * 5 * 7);
  half[5] = Rat(Int(-23) * 29 * 4202993, (Int(1) << 17) * 9 * 5 * 7 * 121);
  half[6] = Rat(Int(-1013699) * Int("3491520091"),
                (Int(1) << 21) * 243 * 125 * 7 * 11 * 169);
  half[7] = Rat(Int(-2269) * Int("929444980559"),
                (Int(1) << 24) * 243 * 125 * 7 * 11 * 13);
  half[8] = Rat(Int(6163) * Int("9656111") * Int("798140689"),
                (Int(1) << 30) * 729 * 25 * 11 * 13 * 289);

  inter[1] = Rat(1, 4);
  inter[2] = Rat(5, 72);
  inter[3] = Rat(-1, 24);
  inter[4] = Rat(Int(-29) * 59, 16 * 27 * 25);
  inter[5] = Rat(-101, 8 * 27 * 5);
  inter[6] = Rat(153841, 16 * 243 * 49);
  inter[7] = Rat(118387, 16 * 81 * 5 * 7);
  inter[8] = Rat(-95944159, Int(32) * 729 * 125 * 7);
  inter[9] = Rat(Int(-2971) * 11681, 8 * 81 * 125 * 7);

  Real v = lead - log(Real(2)) / 2;
  Real sq = sqrt(2 * pi_at() * kk);
  Real kpow = 1;
  for (int j = 0; j <= order; ++j) {
    if (j >= 1) kpow *= kk;
    if (half[j] != 0) v += rat_to_real(half[j]) / (sq * kpow);
    if (j >= 1 && inter[j] != 0) v += rat_to_real(inter[j]) / kpow;
  }
  return v;
}

bool lower_bound_check(unsigned digits) {
  PrecisionGuard guard(digits + 8);
  auto smyth = polyalg::mahler_measure_poly(IntPoly::from_ints({-1, -1, 0, 1}),
                                            bits_for_digits(digits + 8));
  Real floor_val = smyth.value;  // m(x^3 - x - 1)
  std::vector<Real> values;
  values.push_back(mahler_ck(2, "closed-form", digits).value);
  values.push_back(Real(mahler_Sd(4)));   // m(C_3)
  values.push_back(Real(mahler_c4_convolution()));
  values.push_back(Real(mahler_Sd(6)));   // m(C_5)
  values.push_back(mahler_ck(6, "ode-B", digits).value);
  values.push_back(mahler_ck(8, "ode-B", digits).value);
  values.push_back(mahler_ck(10, "ode-B", digits).value);
  for (const auto& v : values)
    if (!(floor_val <= v)) return false;
  if (!(values[0] <= Real(33) / 100)) return false;
  if (!(floor_val >= Real(28) / 100)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

Grid rho_grid(std::uint64_t k, double lo, double hi, int npoints,
              Method method, unsigned digits, bool with_mass) {
  if (npoints < 2 || !(lo < hi)) throw DomainError("rho_grid: bad grid spec");
  Grid g;
  g.k = k;
  g.abscissae = (method == Method::Ode) ? singular_abscissae(k)
                                        : std::vector<double>{};
  for (int i = 0; i < npoints; ++i) {
    double x = lo + (hi - lo) * i / (npoints - 1);
    GridRow row;
    row.x = x;
    row.flagged = false;
    for (double a : g.abscissae)
      if (std::abs(x - a) < 1e-9) row.flagged = true;
    if (x <= 0 || x >= (double)k) row.flagged = true;
    if (!row.flagged) {
      Rat xr(Int((long long)std::llround(x * 1e12)), Int(1000000000000LL));
      if (xr <= 0 || xr >= Rat((long)k))
        row.flagged = true;
      else
        row.value = rho(k, xr, method, digits);
    }
    g.rows.push_back(std::move(row));
  }
  if (with_mass) {
    // integrate rho over [0, k] panel-wise between abscissae
    PrecisionGuard guard(digits + 8);
    std::vector<double> cuts{0.0};
    for (double a : g.abscissae)
      if (a > 1e-9 && a < (double)k - 1e-9) cuts.push_back(a);
    cuts.push_back((double)k);
    std::sort(cuts.begin(), cuts.end());
    Real total = 0;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      Real a(cuts[p]), b(cuts[p + 1]);
      Real mid = (a + b) / 2, hl = (b - a) / 2;
      Real acc = 0, prev = 0;
      for (int lev = 0; lev <= 5; ++lev) {
        double hh = 0.5 / (1 << lev);
        Real sum = 0;
        int jmax = (int)(4.0 / hh);
        for (int j = -jmax; j <= jmax; ++j) {
          if (lev > 0 && j % 2 == 0) continue;
          double t = j * hh;
          double shv = M_PI / 2 * std::sinh(t);
          double w = M_PI / 2 * std::cosh(t) / std::pow(std::cosh(shv), 2);
          double u = std::tanh(shv);
          if (w < 1e-30) continue;
          double xd = (mid + hl * Real(u)).convert_to<double>();
          if (xd <= cuts[p] + 1e-13 || xd >= cuts[p + 1] - 1e-13) continue;
          Rat xr(Int((long long)std::llround(xd * 1e12)),
                 Int(1000000000000LL));
          sum += Real(w) * rho(k, xr, method, digits);
        }
        if (lev == 0)
          acc = Real(hh) * sum;
        else
          acc = acc / 2 + Real(hh) * sum;
        if (lev > 2 && abs(acc - prev) < pow(Real(10), -(long)(digits)))
          break;
        prev = acc;
      }
      total += hl * acc;
    }
    g.mass = total;
    g.has_mass = true;
  }
  return g;
}

}  // namespace cm::density
