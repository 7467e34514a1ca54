#ifndef CYCLOMAHLER_HOLONOMIC_HPP
#define CYCLOMAHLER_HOLONOMIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::holonomic {

// sum_i p_i(t) (d/dt)^i with exact rational polynomial coefficients
struct OdeOperator {
  std::vector<RatPoly> coeffs;  // p_0 .. p_r, p_r nonzero
  int order() const { return (int)coeffs.size() - 1; }
};

// JSON file format: {"k": int, "order": r, "coeffs": [[c of t^0, ...], ...]}
// with big integers as decimal strings.
OdeOperator load_operator_file(const std::string& path);

// Paper operators L_2, L_6, L_8, L_10 from the versioned data files.
OdeOperator operator_registry(std::uint64_t k);
std::string registry_dir();
void set_registry_dir(const std::string& dir);

// L acting after M (operator product L * M).
OdeOperator compose(const OdeOperator& L, const OdeOperator& M);
// t^2 D^2 + t D  (theta^2 with theta = t d/dt)
OdeOperator theta_squared();
OdeOperator compose_theta2(const OdeOperator& L);

// exact rational roots of the leading coefficient
std::vector<Rat> rational_singularities(const OdeOperator& op);
// all roots of the leading coefficient (certified numeric)
std::vector<Cplx> singularities(const OdeOperator& op, unsigned digits = 24);

// Applies op to the truncated series sum ct[m] t^m over exact rationals;
// true iff every coefficient up to order M - maxdeg - order vanishes.
bool annihilation_check(const OdeOperator& op, const std::vector<Int>& ct,
                        int M);

// c0 + c1 log t + chalf log^2 t + sum coeffs[m] t^m, valid for |t| < radius
struct LocalExpansion {
  Rat c0 = 0, c1 = 0, chalf = 0;
  std::vector<Rat> coeffs;
  Rat radius = 0;
};

// plain power-series initial data (H_k): coefficients ct[m]
LocalExpansion h_expansion(const std::vector<Int>& ct, const Rat& radius);
// B-function initial data: (1/2) log^2 t + sum_{m>=1} ct[m]/m^2 t^m
LocalExpansion b_expansion(const std::vector<Int>& ct, const Rat& radius);

struct PathPlan {
  std::vector<std::pair<Rat, Rat>> waypoints;  // exact complex rationals
  int orientation = +1;                        // +1 upper, -1 lower
};

// [i*orientation/(8k), i*orientation, x]
PathPlan standard_path(std::uint64_t k, int orientation, const Rat& x);

struct ContinuationResult {
  std::vector<Cplx> values;  // y, y', ..., y^(r-1) at the endpoint
  Real error_estimate;
  bool singular_endpoint = false;  // only values[0] (the limit) is meaningful
};

// solution data in flight: point, value vector, accumulated error estimate
struct FlowState {
  std::pair<Rat, Rat> at;  // exact current waypoint
  std::vector<Cplx> Y;
  Real err;
};

// evaluate the local expansion (principal log branch) at the first waypoint
FlowState prepare_initial_state(const OdeOperator& op,
                                const LocalExpansion& init,
                                const std::pair<Rat, Rat>& w0, unsigned digits);

// continue from a prepared state through the listed waypoints; if the final
// one is a regular singular point of op, the limit value is obtained by
// connecting to the exact Frobenius basis there.
ContinuationResult continue_from(const OdeOperator& op, const FlowState& state,
                                 const std::vector<std::pair<Rat, Rat>>& wps,
                                 unsigned digits);

// Adaptive-order Taylor continuation along the polygonal path (the first
// waypoint is the expansion base point).
ContinuationResult continue_solution(const OdeOperator& op,
                                     const LocalExpansion& init,
                                     const PathPlan& path, unsigned digits);

// generalized series solution at a regular singular point
struct FrobeniusSolution {
  Rat exponent;  // lambda
  // coeffs[m][j] multiplies tau^(lambda+m) log(tau)^j / j!
  std::vector<std::vector<Rat>> coeffs;
};

std::vector<FrobeniusSolution> frobenius_basis(const OdeOperator& op,
                                               const Rat& s, int nterms);

}  // namespace cm::holonomic

#endif
