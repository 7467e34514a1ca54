#include "cyclomahler/intpoly.hpp"

#include <sstream>

namespace cm {

IntPoly IntPoly::from_ints(std::initializer_list<long long> ascending) {
  std::vector<Int> c;
  c.reserve(ascending.size());
  for (long long v : ascending) c.emplace_back(v);
  return IntPoly(std::move(c));
}

IntPoly IntPoly::monomial(int degree, Int c) {
  std::vector<Int> v(degree + 1, Int(0));
  v[degree] = std::move(c);
  return IntPoly(std::move(v));
}

void IntPoly::normalize() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Int IntPoly::eval(const Int& x) const {
  Int acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Cplx IntPoly::eval(const Cplx& z) const {
  Cplx acc;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= z;
    acc += Cplx(Real(*it), Real(0));
  }
  return acc;
}

Real IntPoly::eval_real(const Real& x) const {
  Real acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * x + Real(*it);
  return acc;
}

IntPoly IntPoly::derivative() const {
  if (coeffs.size() <= 1) return {};
  std::vector<Int> d(coeffs.size() - 1);
  for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = Int(i) * coeffs[i];
  return IntPoly(std::move(d));
}

IntPoly IntPoly::reversal() const {
  std::vector<Int> r(coeffs.rbegin(), coeffs.rend());
  return IntPoly(std::move(r));
}

IntPoly IntPoly::negate_variable() const {
  std::vector<Int> r = coeffs;
  for (size_t i = 0; i < r.size(); ++i)
    if (i % 2 == 0) r[i] = -r[i];
  return IntPoly(std::move(r));
}

std::string IntPoly::to_string(const std::string& var) const {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Int& c = coeffs[i];
    if (c == 0) continue;
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) os << a.str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
  return IntPoly(std::move(c));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> c(a.coeffs.size() + b.coeffs.size() - 1, Int(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      c[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return IntPoly(std::move(c));
}

IntPoly operator*(const Int& c, const IntPoly& a) {
  std::vector<Int> r = a.coeffs;
  for (auto& x : r) x *= c;
  return IntPoly(std::move(r));
}

std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero() || b.lead() != 1)
    throw DomainError("divmod_monic: divisor must be monic");
  std::vector<Int> rem = a.coeffs;
  int db = b.degree();
  if (a.degree() < db) return {IntPoly{}, a};
  std::vector<Int> q(a.degree() - db + 1, Int(0));
  for (int i = a.degree(); i >= db; --i) {
    Int c = rem[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= c * b.coeffs[j];
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(rem))};
}

IntPoly div_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw DomainError("div_exact: division by zero");
  // general long division over Q, then check integrality and exactness
  std::vector<Rat> rem(a.coeffs.begin(), a.coeffs.end());
  int db = b.degree();
  if (a.is_zero()) return {};
  if (a.degree() < db) throw DomainError("div_exact: not divisible");
  std::vector<Rat> q(a.degree() - db + 1, Rat(0));
  Rat lb(b.lead());
  for (int i = a.degree(); i >= db; --i) {
    Rat c = rem[i] / lb;
    if (c == 0) continue;
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= c * Rat(b.coeffs[j]);
  }
  for (const auto& r : rem)
    if (r != 0) throw DomainError("div_exact: not divisible");
  std::vector<Int> qi(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    if (denominator(q[i]) != 1) throw DomainError("div_exact: not integral");
    qi[i] = numerator(q[i]);
  }
  return IntPoly(std::move(qi));
}

Int content(const IntPoly& a) {
  Int g = 0;
  for (const auto& c : a.coeffs) g = gcd(g, c);
  return g < 0 ? Int(-g) : g;
}

IntPoly primitive_part(const IntPoly& a) {
  if (a.is_zero()) return {};
  Int g = content(a);
  if (a.lead() < 0) g = -g;
  std::vector<Int> c = a.coeffs;
  for (auto& x : c) x /= g;
  return IntPoly(std::move(c));
}

// Primitive PRS gcd.
IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  IntPoly f = primitive_part(a), g = primitive_part(b);
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (f.degree() < g.degree()) std::swap(f, g);
  while (!g.is_zero()) {
    // pseudo-remainder of f by g
    IntPoly r = f;
    Int lg = g.lead();
    int dg = g.degree();
    while (!r.is_zero() && r.degree() >= dg) {
      int dr = r.degree();
      Int lr = r.lead();
      std::vector<Int> nr((size_t)dr + 1, Int(0));
      for (int i = 0; i <= dr; ++i) nr[i] = r.coeffs[i] * lg;
      for (int j = 0; j <= dg; ++j) nr[dr - dg + j] -= lr * g.coeffs[j];
      r = IntPoly(std::move(nr));
      if (r.degree() == dr) throw DomainError("gcd: pseudo-division stalled");
    }
    f = g;
    g = primitive_part(r);
  }
  return f.lead() < 0 ? Int(-1) * f : f;
}

RatPoly::RatPoly(const IntPoly& p) {
  coeffs.assign(p.coeffs.begin(), p.coeffs.end());
}

void RatPoly::normalize() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Rat RatPoly::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Cplx RatPoly::eval(const Cplx& z) const {
  Cplx acc;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= z;
    acc += Cplx(rat_to_real(*it), Real(0));
  }
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (coeffs.size() <= 1) return {};
  std::vector<Rat> d(coeffs.size() - 1);
  for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = Rat(Int(i)) * coeffs[i];
  return RatPoly(std::move(d));
}

RatPoly RatPoly::shifted(const Rat& a) const {
  // Horner-style Taylor shift.
  std::vector<Rat> r;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    // r = r*(x+a) + c
    std::vector<Rat> nr(r.size() + 1, Rat(0));
    for (size_t i = 0; i < r.size(); ++i) {
      nr[i + 1] += r[i];
      nr[i] += r[i] * a;
    }
    if (nr.empty()) nr.push_back(Rat(0));
    nr[0] += *it;
    r = std::move(nr);
  }
  return RatPoly(std::move(r));
}

std::string RatPoly::to_string(const std::string& var) const {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Rat c = coeffs[i];
    if (c == 0) continue;
    Rat a = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) os << a.str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
  return RatPoly(std::move(c));
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rat> c(a.coeffs.size() + b.coeffs.size() - 1, Rat(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      c[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return RatPoly(std::move(c));
}

RatPoly operator*(const Rat& c, const RatPoly& a) {
  std::vector<Rat> r = a.coeffs;
  for (auto& x : r) x *= c;
  return RatPoly(std::move(r));
}

}  // namespace cm
