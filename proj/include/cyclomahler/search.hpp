#ifndef CYCLOMAHLER_SEARCH_HPP
#define CYCLOMAHLER_SEARCH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclomahler/intpoly.hpp"
#include "cyclomahler/mp.hpp"

namespace cm::search {

enum class ConductorFilter { All, TameOnly, Explicit };

struct SearchConfig {
  unsigned q = 3;            // odd prime degree
  double B = 0;              // exponential Mahler bound; 0 selects M(alpha_q)
  ConductorFilter filter = ConductorFilter::All;
  std::vector<std::uint64_t> conductors;  // for Explicit
  int threads = 1;
  std::string checkpoint_path;  // empty disables checkpointing
  bool force = false;           // overrides the resource guard
};

// All admissible conductors f = q^j f0 (j in {0,2}, f0 squarefree with prime
// factors = 1 mod q), 1 < f < B^(2q/(q-1)), sorted.
std::vector<std::uint64_t> conductor_set(unsigned q, double B);

struct CongruenceClass {
  std::uint64_t modulus;                // f1: product of distinct primes of f
  std::vector<std::uint64_t> residues;  // h_0..h_{q-1} mod f1 (h monic deg q)
};

// Residues (x+a)^q mod p CRT-combined over p | f, constant-term window
// enforced, reversal-deduplicated.
std::vector<CongruenceClass> congruence_classes(unsigned q,
                                                std::uint64_t conductor,
                                                double B);

// Number of monic lifts of h with the coefficient windows |a_j| <= C(q,j) B
// and 0 < a_0 < B.
std::uint64_t lift_count(const CongruenceClass& h, unsigned q, double B);

// The lift with the given lexicographic rank (coefficients enumerated from
// the leading window down, each ascending).
IntPoly lift_by_rank(const CongruenceClass& h, unsigned q, double B,
                     std::uint64_t rank);

enum class Stage {
  Congruence,
  Lift,
  Discriminant,
  Divisibility,
  Irreducible,
  RealRooted,
  Mahler,
  Galois,
  Accepted,
};

const char* stage_name(Stage s);

struct CandidateVerdict {
  std::uint64_t conductor = 0;
  Stage stage = Stage::Lift;
  double measure = 0;  // exponential Mahler measure when computed
};

// Stages in measured cost order: exact discriminant conditions, conductor
// divisibility, irreducibility, Sturm, Mahler window, Galois certificate.
CandidateVerdict filter_candidate(const IntPoly& f, unsigned q,
                                  std::uint64_t conductor, double B);

struct Witness {
  IntPoly poly;
  double measure;
  std::uint64_t conductor;
};

struct SearchReport {
  unsigned q;
  double B;
  std::vector<std::uint64_t> conductors;
  double minimum = 0;  // minimal exponential Mahler measure found
  std::vector<Witness> witnesses;
  std::map<std::string, std::uint64_t> stage_counts;
  std::uint64_t candidates_tested = 0;
  std::uint64_t runtime_ms = 0;
  std::string to_json(bool with_runtime) const;
};

SearchReport search_min(const SearchConfig& config);

}  // namespace cm::search

#endif
