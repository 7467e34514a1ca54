#include "cyclomahler/numtheory.hpp"

#include <algorithm>
#include <cmath>

namespace cm::numtheory {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  long long t = 0, nt = 1;
  long long r = (long long)m, nr = (long long)(a % m);
  while (nr != 0) {
    long long q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw DomainError("inv_mod: not invertible");
  return (std::uint64_t)(t < 0 ? t + (long long)m : t);
}

namespace {
bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
  if (a % n == 0) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}
}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // smallest composite failing this witness set exceeds 3.3e24
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL})
    if (!miller_rabin_u64(n, a)) return false;
  return true;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (n <= Int(UINT64_MAX)) return is_prime(n.convert_to<std::uint64_t>());
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  Int d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Int x = powm(Int(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool ok = false;
    for (int i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

KnRecord smallest_k(std::uint64_t n, std::uint64_t cap) {
  if (n == 0) throw DomainError("smallest_k: n must be positive");
  for (std::uint64_t k = 1; k <= cap; ++k) {
    std::uint64_t p = k * n + 1;
    if (is_prime(p)) return {n, k, p};
  }
  throw ResourceGuardError("smallest_k: iteration cap exceeded");
}

std::vector<std::uint64_t> enumerate_Nk(std::uint64_t k, std::uint64_t X) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= X; ++n) {
    bool minimal = true;
    for (std::uint64_t j = 1; j < k && minimal; ++j)
      if (is_prime(j * n + 1)) minimal = false;
    if (minimal && is_prime(k * n + 1)) out.push_back(n);
  }
  return out;
}

NkCount count_Nk_vs_asymptotic(std::uint64_t k, std::uint64_t X) {
  std::uint64_t cnt = enumerate_Nk(k, X).size();
  double main = double(k) * double(X) /
                (double(euler_phi(k)) * std::log(double(X)));
  return {cnt, main};
}

std::uint64_t construct_member_Nk(std::uint64_t k,
                                  const std::vector<std::uint64_t>& primes,
                                  std::uint64_t cap) {
  if (k == 0) throw DomainError("construct_member_Nk: k must be positive");
  if (primes.size() != k - 1)
    throw DomainError("construct_member_Nk: need k-1 primes");
  std::uint64_t prev = k;
  for (auto p : primes) {
    if (!is_prime(p) || p <= prev)
      throw DomainError("construct_member_Nk: need primes k < p_1 < ... ");
    prev = p;
  }
  // CRT: n = -1/i mod p_i
  std::uint64_t mod = 1, r = 0;
  for (std::uint64_t i = 1; i < k; ++i) {
    std::uint64_t p = primes[i - 1];
    std::uint64_t ri = p - inv_mod(i % p, p);  // -1/i mod p
    // combine r mod mod with ri mod p
    std::uint64_t t =
        mul_mod((ri + p - r % p) % p, inv_mod(mod % p, p), p);
    r = r + mod * t;
    mod *= p;
  }
  if (r == 0) r = mod;
  for (std::uint64_t n = r; n <= cap; n += mod) {
    if (!is_prime(k * n + 1)) continue;
    bool minimal = true;
    for (std::uint64_t j = 1; j < k && minimal; ++j)
      if (is_prime(j * n + 1)) minimal = false;
    if (minimal && smallest_k(n).k == k) return n;
  }
  throw ResourceGuardError("construct_member_Nk: no member below cap");
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      f.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (auto p : prime_factors(n)) r -= r / p;
  return r;
}

std::uint64_t mult_order(std::uint64_t a, std::uint64_t p) {
  std::uint64_t ord = p - 1;
  for (auto q : prime_factors(p - 1)) {
    while (ord % q == 0 && pow_mod(a, ord / q, p) == 1) ord /= q;
  }
  return ord;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  if (!is_prime(p)) throw DomainError("primitive_root: p must be prime");
  auto fac = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : fac)
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw DomainError("primitive_root: none found");
}

IntPoly cyclotomic_poly(std::uint64_t k) {
  if (k == 0) throw DomainError("cyclotomic_poly: k must be positive");
  // t^k - 1 divided by all Phi_d, d | k, d < k
  std::vector<Int> tk(k + 1, Int(0));
  tk[0] = -1;
  tk[k] = 1;
  IntPoly num{std::vector<Int>(tk)};
  for (std::uint64_t d = 1; d < k; ++d) {
    if (k % d == 0) num = div_exact(num, cyclotomic_poly(d));
  }
  return num;
}

}  // namespace cm::numtheory
