#ifndef CYCLOMAHLER_DENSITY_HPP
#define CYCLOMAHLER_DENSITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cyclomahler/holonomic.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::density {

enum class Method {
  ClosedFormK2,
  Ode,
  HalfNormal,
  HalfNormalRefined,
};

struct MahlerResult {
  Real value;
  Real error_estimate;
  std::string method;
  unsigned digits;
};

// |1/t| over the real singular points t != 0 of L_k; the abscissae where
// rho_k may be non-smooth.
std::vector<double> singular_abscissae(std::uint64_t k);

// density of |F_k| at x in (0, k)
Real rho(std::uint64_t k, const Rat& x, Method method, unsigned digits);

// density of |S_d| (Kluyver oscillatory integral); requires d >= 3
double rho_Sd(int d, double x);

struct GridRow {
  double x;
  bool flagged;  // singular abscissa: value not evaluated
  Real value;
};

struct Grid {
  std::uint64_t k;
  std::vector<GridRow> rows;
  std::vector<double> abscissae;
  bool has_mass = false;
  Real mass;  // adaptive integral of rho over [0, k]
};

Grid rho_grid(std::uint64_t k, double lo, double hi, int npoints,
              Method method, unsigned digits, bool with_mass = false);

// m(C_k).  Methods: "ode-B" (k in {2,6,8,10}), "closed-form" (k = 2),
// "kluyver" (k an odd prime or k = 2^r with r >= 3), "convolution" (k = 4),
// "quadrature" (integral of log * rho_ode, for cross-checks).
MahlerResult mahler_ck(std::uint64_t k, const std::string& method,
                       unsigned digits);

// Truncated asymptotic series for m(C_k), exact rational coefficients;
// `order` = highest power of 1/k kept (0..9).  Shapes: 2q^r and 2^r take the
// full series, odd primes take the two-term form.
Real mahler_ck_asymptotic(std::uint64_t k, int order, unsigned digits = 32);

// m(x^3-x-1) <= m(C_k) for all computable k, and m(C_2) <= 0.33
bool lower_bound_check(unsigned digits = 16);

// m(S_d) = m(L_d) by Kluyver quadrature (d >= 3)
double mahler_Sd(int d);
// int_1^{2d} log(x) rho_{S_d}(x) dx (the m(C_{2^r}) reduction, d = 2^(r-1))
double mahler_x0_plus_Sd(int d);

}  // namespace cm::density

#endif
