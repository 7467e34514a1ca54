#ifndef CYCLOMAHLER_GAUSSPERIOD_HPP
#define CYCLOMAHLER_GAUSSPERIOD_HPP

#include <cstdint>
#include <vector>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"
#include "cyclomahler/numtheory.hpp"

namespace cm::gaussperiod {

struct GaussPeriodData {
  std::uint64_t n, k, p;
  std::uint64_t lambda;  // least primitive root mod p
  std::uint64_t nu;      // lambda^n mod p, multiplicative order k
  std::vector<Cplx> conjugates;  // alpha_n^(j), j = 1..n
};

GaussPeriodData gauss_period(std::uint64_t n, unsigned digits);

// Exact monic minimal polynomial of alpha_n, verified before returning
// (coefficient rounding distance < 1/4, irreducibility, residual check).
IntPoly minimal_polynomial_gauss(std::uint64_t n, unsigned digits = 64);

struct MahlerAlpha {
  Real value;
  Real error;
};

// m(alpha_n) = sum_j log+ |alpha_n^(j)| straight from the conjugates.
MahlerAlpha mahler_alpha(std::uint64_t n, unsigned digits);

struct SamplePointSet {
  std::uint64_t p;
  std::uint64_t d;
  // point j (j = 1..p-1) has coordinates numerators[j-1][s] / p
  std::vector<std::vector<std::uint64_t>> numerators;
};

SamplePointSet sample_points(std::uint64_t n);

// Exact Weyl sum over S_p for frequency vector h: p-1 if P(nu) = 0 mod p
// (P(t) = h0 + h1 t + ...), else -1.
long long weyl_sum(std::uint64_t n, const std::vector<long long>& h);

// the same sum by direct complex summation (cross-check path)
Cplx weyl_sum_complex(std::uint64_t n, const std::vector<long long>& h,
                      unsigned digits);

// 4*sqrt(3)*k(k+1)/p^(1/d) + 2*log(k)/p with k = k(n), p = kn+1, d = phi(k)
Real wasserstein_bound(std::uint64_t n, unsigned digits = 24);

// m(alpha_n) - n*m(C_2); approaches (m(C_2) - log 2)/2 for n in N_2.
Real lot_residual(std::uint64_t n, const Real& m_c2, unsigned digits = 24);

}  // namespace cm::gaussperiod

#endif
