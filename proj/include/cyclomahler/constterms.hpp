#ifndef CYCLOMAHLER_CONSTTERMS_HPP
#define CYCLOMAHLER_CONSTTERMS_HPP

#include <cstdint>
#include <vector>

#include "cyclomahler/cyclogeom.hpp"
#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::constterms {

struct CTSeries {
  std::uint64_t k = 0;
  std::vector<Int> values;  // values[m] = CT[F_k^m], m = 0..M
};

// Exact CT[F_k^m] for m = 0..M by iterated sparse multiplication over the
// step set, pruning exponents that cannot walk back to zero in the remaining
// steps.  Guarded: phi(k) <= 6 and M <= 200.
CTSeries constant_terms(std::uint64_t k, int M);

// same engine over an arbitrary step set (used for S_d = sum x_i + 1/x_i)
std::vector<Int> walk_series(const std::vector<cyclogeom::ExponentVector>& steps,
                             int M);

// Count of closed m-step walks with steps in A_k by direct enumeration
// (independent oracle; guarded by k^m <= 1e8).
Int walk_count_oracle(std::uint64_t k, int m);

struct BesselCheck {
  bool equal;
  int first_mismatch;  // -1 when equal
};

// CT[F_k^m]/m! against the Taylor coefficients of
// (I_0(2t)^q + 2 sum_j I_j(2t)^q)^(q^(r-1)) for k = 2 q^r; exact rationals.
BesselCheck bessel_egf_check(std::uint64_t k, int M);

// E_{S_d}(t) = I_0(2t)^d variant.
BesselCheck bessel_egf_check_Sd(int d, int M);

// CT[S_d^(2n)] = binom(2n, n) * CT[(L_d Ltilde_d)^n], exactly.
bool zeta_even_moment_check(int d, int n);

// a_0 .. a_jmax from the Taylor series of log I_0(2iy); exact rationals.
std::vector<RatPoly> asymptotic_aj(int j_max);

// Taylor coefficients of log I_0(2iy) in y (exact; index = power of y).
std::vector<Rat> log_I0_taylor(int order);

// exact rational Taylor coefficients of I_j(2t) up to t^M
std::vector<Rat> bessel_I_series(int j, int M);

}  // namespace cm::constterms

#endif
