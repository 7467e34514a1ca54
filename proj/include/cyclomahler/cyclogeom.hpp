#ifndef CYCLOMAHLER_CYCLOGEOM_HPP
#define CYCLOMAHLER_CYCLOGEOM_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "cyclomahler/mp.hpp"

namespace cm::cyclogeom {

using ExponentVector = std::vector<int>;

// Coefficient vectors of t^r mod Phi_k(t), r = 0..k-1; the exponent vectors
// of the k-th roots of unity in the power basis of Q(zeta_k).
std::vector<ExponentVector> root_vectors(std::uint64_t k);

struct LaurentPoly {
  int nvars = 0;
  std::map<ExponentVector, Int> terms;  // no zero coefficients stored

  void add_term(const ExponentVector& e, const Int& c);
  Int coeff(const ExponentVector& e) const;
  bool is_reciprocal() const;  // invariant under negating all exponents
};

LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b);
Int constant_term(const LaurentPoly& a);

// F_k = sum of monomials over A_k.
LaurentPoly laurent_Fk(std::uint64_t k);

// Exact value of P_k = x0 + F_k at a +-1 assignment.
Int eval_at_signs(std::uint64_t k, int x0, const std::vector<int>& signs);

struct Facet {
  std::vector<Int> normal;  // primitive integer normal a
  Int b;                    // <a, x> <= b, b > 0 (origin strictly interior)
};

struct LatticePolytope {
  int dim = 0;
  std::vector<std::vector<Rat>> vertices;  // extreme points only
  std::vector<Facet> facets;
  bool integral() const;  // all vertices integral
};

// Convex hull with exact rational facet description.  Requires the points to
// span R^d with the origin strictly interior; dimension capped at 16.
LatticePolytope hull(const std::vector<std::vector<Rat>>& points);

LatticePolytope cyclopolytope(std::uint64_t k);

// Vertices of {w : <v,w> <= 1 for all v in P}; exact rationals.
LatticePolytope polar_dual(const LatticePolytope& P);

bool is_reflexive(const LatticePolytope& P);
bool is_centrally_symmetric(const LatticePolytope& P);

// For k = 2 q^r: N_k equals q^(r-1) del Pezzo blocks in the explicit
// coordinate pattern (exact vertex-set comparison; no hull needed).
bool direct_sum_structure(std::uint64_t k);

enum class TorusCheck { CertifiedNonempty, Undecided };

struct TorusPointResult {
  TorusCheck status;
  std::string reason;
};

// Torus points on the cyclovariety: sign test P_k(-1) < 0, and for k = 2l
// (l an odd prime) an exact eta-point verification in Q(sqrt(-15)).
TorusPointResult torus_point_check(std::uint64_t k);

}  // namespace cm::cyclogeom

#endif
