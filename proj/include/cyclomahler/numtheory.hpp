#ifndef CYCLOMAHLER_NUMTHEORY_HPP
#define CYCLOMAHLER_NUMTHEORY_HPP

#include <cstdint>
#include <vector>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::numtheory {

// Deterministic Miller-Rabin, proven witness set for inputs < 3.3e24.
bool is_prime(const Int& n);
bool is_prime(std::uint64_t n);

struct KnRecord {
  std::uint64_t n = 0;
  std::uint64_t k = 0;  // minimal multiplier with k*n+1 prime
  std::uint64_t p = 0;  // k*n + 1
};

// Minimal k with k*n+1 prime.  Throws ResourceGuardError past the cap.
KnRecord smallest_k(std::uint64_t n, std::uint64_t cap = 1000000);

// All n <= X with k(n) = k, sorted.
std::vector<std::uint64_t> enumerate_Nk(std::uint64_t k, std::uint64_t X);

struct NkCount {
  std::uint64_t count;
  double mainterm;  // k*X / (phi(k) log X)
};
NkCount count_Nk_vs_asymptotic(std::uint64_t k, std::uint64_t X);

// Least n in the CRT progression n = -1/i mod p_i (i = 1..k-1) that lands in
// N_k; verified through smallest_k.  Throws if none below the cap.
std::uint64_t construct_member_Nk(std::uint64_t k,
                                  const std::vector<std::uint64_t>& primes,
                                  std::uint64_t cap = 100000000ULL);

std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);  // distinct, sorted

// Least positive primitive root mod p (p an odd prime).
std::uint64_t primitive_root(std::uint64_t p);

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
std::uint64_t mult_order(std::uint64_t a, std::uint64_t p);  // p prime

// Exact k-th cyclotomic polynomial via iterated division of t^k - 1.
IntPoly cyclotomic_poly(std::uint64_t k);

}  // namespace cm::numtheory

#endif
