#ifndef CYCLOMAHLER_MP_HPP
#define CYCLOMAHLER_MP_HPP

// Arbitrary-precision number types used across the library.
// Precision is always passed explicitly by callers and installed with a
// PrecisionGuard; nothing here reads ambient state besides the guard itself.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace cm {

namespace bmp = boost::multiprecision;

using Int  = bmp::mpz_int;
using Rat  = bmp::mpq_rational;
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

// Library error taxonomy; the CLI maps these onto exit codes.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(bits * 0.3010299956639812) + 2;
}
inline unsigned bits_for_digits(unsigned digits) {
  return static_cast<unsigned>(digits * 3.321928094887362) + 4;
}

// Sets the (thread-local) default precision in decimal digits, restoring the
// previous value on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits10 < 8 ? 8 : digits10);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

inline Real pi_real() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real euler_gamma_real() {
  Real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real rat_to_real(const Rat& q) {
  Real num(numerator(q));
  Real den(denominator(q));
  return num / den;
}

// Complex numbers over Real.  Only field operations and a handful of
// elementary functions are needed; everything else stays real-valued.
struct Cplx {
  Real re, im;

  Cplx() : re(0), im(0) {}
  Cplx(Real r) : re(std::move(r)), im(0) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(int r) : re(r), im(0) {}

  Cplx operator-() const { return {-re, -im}; }
  Cplx& operator+=(const Cplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cplx& operator-=(const Cplx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cplx& operator*=(const Cplx& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Cplx& operator/=(const Cplx& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
};

inline Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
inline Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
inline Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
inline Cplx operator/(Cplx a, const Cplx& b) { return a /= b; }
inline Cplx operator*(const Real& s, Cplx a) {
  a.re *= s;
  a.im *= s;
  return a;
}

inline Real abs2(const Cplx& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Cplx& z) {
  Real r;
  mpfr_hypot(r.backend().data(), z.re.backend().data(), z.im.backend().data(),
             MPFR_RNDN);
  return r;
}
inline Cplx conj(Cplx z) {
  z.im = -z.im;
  return z;
}

// Principal branch.
inline Cplx log(const Cplx& z) {
  Real a = abs(z);
  Real arg;
  mpfr_atan2(arg.backend().data(), z.im.backend().data(),
             z.re.backend().data(), MPFR_RNDN);
  return {log(a), arg};
}

inline Cplx exp(const Cplx& z) {
  Real m = exp(z.re);
  Real s, c;
  mpfr_sin_cos(s.backend().data(), c.backend().data(), z.im.backend().data(),
               MPFR_RNDN);
  return {m * c, m * s};
}

// exp(2*pi*i * a/b) for integers a, b; the angle is reduced mod b first.
inline Cplx unit_root(long long a, long long b) {
  long long r = a % b;
  if (r < 0) r += b;
  Real ang = 2 * pi_real() * Real(r) / Real(b);
  Real s, c;
  mpfr_sin_cos(s.backend().data(), c.backend().data(), ang.backend().data(),
               MPFR_RNDN);
  return {c, s};
}

inline Cplx pow_int(Cplx base, long long e) {
  Cplx acc(Real(1), Real(0));
  bool inv = e < 0;
  unsigned long long n = inv ? -(unsigned long long)e : (unsigned long long)e;
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  if (inv) acc = Cplx(Real(1), Real(0)) / acc;
  return acc;
}

// Fixed-notation decimal string with exactly `digits` significant digits.
// Deterministic for identical inputs; used by all CLI/JSON emission.
std::string to_decimal_string(const Real& x, unsigned digits);

inline Real log_plus(const Real& x) {
  if (x <= 1) return Real(0);
  return log(x);
}

}  // namespace cm

#endif
