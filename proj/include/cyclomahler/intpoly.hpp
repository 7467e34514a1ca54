#ifndef CYCLOMAHLER_INTPOLY_HPP
#define CYCLOMAHLER_INTPOLY_HPP

// Dense univariate polynomials with exact integer (IntPoly) and rational
// (RatPoly) coefficients.  coeffs[i] is the coefficient of x^i; the zero
// polynomial is the empty vector and every non-zero polynomial keeps a
// non-zero leading coefficient.

#include <string>
#include <vector>

#include "cyclomahler/mp.hpp"

namespace cm {

struct IntPoly {
  std::vector<Int> coeffs;

  IntPoly() = default;
  explicit IntPoly(std::vector<Int> c) : coeffs(std::move(c)) { normalize(); }
  static IntPoly from_ints(std::initializer_list<long long> ascending);
  static IntPoly monomial(int degree, Int c = Int(1));

  void normalize();
  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const Int& lead() const { return coeffs.back(); }
  Int coeff(int i) const {
    return (i >= 0 && i < (int)coeffs.size()) ? coeffs[i] : Int(0);
  }

  bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }

  Int eval(const Int& x) const;
  Cplx eval(const Cplx& z) const;
  Real eval_real(const Real& x) const;

  IntPoly derivative() const;
  // Reversal x^deg * f(1/x).
  IntPoly reversal() const;
  // -f(-x): monic-preserving sign normalization for odd degree.
  IntPoly negate_variable() const;

  std::string to_string(const std::string& var = "x") const;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const Int& c, const IntPoly& a);

// Quotient/remainder of a by monic b (exact integer arithmetic).
std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b);
// Exact division, throws if the division leaves a remainder.
IntPoly div_exact(const IntPoly& a, const IntPoly& b);

Int content(const IntPoly& a);
IntPoly primitive_part(const IntPoly& a);
// GCD over Z (primitive, positive leading coefficient).
IntPoly gcd(const IntPoly& a, const IntPoly& b);

struct RatPoly {
  std::vector<Rat> coeffs;

  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> c) : coeffs(std::move(c)) { normalize(); }
  explicit RatPoly(const IntPoly& p);

  void normalize();
  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Rat coeff(int i) const {
    return (i >= 0 && i < (int)coeffs.size()) ? coeffs[i] : Rat(0);
  }

  Rat eval(const Rat& x) const;
  Cplx eval(const Cplx& z) const;
  RatPoly derivative() const;
  // Taylor shift: p(x + a).
  RatPoly shifted(const Rat& a) const;

  bool operator==(const RatPoly& o) const { return coeffs == o.coeffs; }
  std::string to_string(const std::string& var = "t") const;
};

RatPoly operator+(const RatPoly& a, const RatPoly& b);
RatPoly operator-(const RatPoly& a, const RatPoly& b);
RatPoly operator*(const RatPoly& a, const RatPoly& b);
RatPoly operator*(const Rat& c, const RatPoly& a);

}  // namespace cm

#endif
