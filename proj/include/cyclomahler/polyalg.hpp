#ifndef CYCLOMAHLER_POLYALG_HPP
#define CYCLOMAHLER_POLYALG_HPP

#include <cstdint>
#include <vector>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::polyalg {

struct RootSet {
  std::vector<Cplx> roots;        // one entry per root of the squarefree part
  std::vector<Real> radii;        // certified disk radius around each entry
  std::vector<int> multiplicity;  // sum of multiplicities equals deg f
};

// All complex roots with certified error radii (simultaneous iteration plus
// Newton polishing; radii from the Weierstrass correction bound).  Throws
// VerificationError if disks cannot be certified disjoint at this precision.
RootSet complex_roots(const IntPoly& f, unsigned precision_bits);

struct MeasuredValue {
  Real value;
  Real error;
};

// log|lead| + sum log+ |root|, with a rigorous error bound from root radii.
MeasuredValue mahler_measure_poly(const IntPoly& f, unsigned precision_bits);

Int resultant(const IntPoly& f, const IntPoly& g);
Int discriminant(const IntPoly& f);

// Number of distinct real roots by Sturm chains (exact).
int count_real_roots(const IntPoly& f);
// Exact: every root real.  Pre: f squarefree.
bool real_rooted(const IntPoly& f);

// Exact irreducibility over Q for monic f of degree <= 12 (mod-p certificate
// first, subset-product fallback at high precision otherwise).
bool is_irreducible(const IntPoly& f);

enum class SplitType {
  Irreducible,
  TotallySplit,
  TotallyRamified,
  RepeatedSplit,
  Other,
};

struct Splitting {
  SplitType type;
  std::uint64_t shift = 0;  // the a of (x+a)^q in the totally ramified case
};

Splitting splitting_type_mod_p(const IntPoly& f, std::uint64_t p);

// Certifies Gal(f) = Z/q for monic irreducible f of odd prime degree q with
// square discriminant and all roots real (callers pre-filter).  Finds a
// totally split prime, Hensel-lifts its roots, reconstructs a candidate
// conjugation polynomial g with rational coefficients and verifies exactly
// over Q that f divides f(g(x)).
bool cyclic_galois_certificate(const IntPoly& f, unsigned q);

// The certified conjugation polynomial itself (empty coefficients if the
// certificate fails); exposed for the order-q iteration check.
RatPoly cyclic_galois_map(const IntPoly& f, unsigned q);

// Composition a(b(x)) reduced modulo monic f, over Q.
RatPoly compose_mod(const RatPoly& a, const RatPoly& b, const IntPoly& f);

// Discriminant of f modulo p (subresultant chain over F_p); fast pre-filter.
std::uint64_t discriminant_mod_p(const IntPoly& f, std::uint64_t p);

bool is_square(const Int& n);

}  // namespace cm::polyalg

#endif
