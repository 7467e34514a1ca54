#include "cyclomahler/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cyclomahler/gaussperiod.hpp"
#include "cyclomahler/numtheory.hpp"
#include "cyclomahler/polyalg.hpp"

namespace cm::search {

namespace nt = cm::numtheory;

// ---------------------------------------------------------------------------
// conductors
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> conductor_set(unsigned q, double B) {
  if (q < 3 || q % 2 == 0 || !nt::is_prime((std::uint64_t)q))
    throw DomainError("conductor_set: q must be an odd prime");
  if (!(B > 1)) throw DomainError("conductor_set: B > 1 required");
  PrecisionGuard guard(30);
  Real bound = pow(Real(B), Real(2 * (long)q) / Real((long)q - 1));
  std::uint64_t cap = bound.convert_to<std::uint64_t>() + 1;

  std::vector<std::uint64_t> primes;  // p = 1 mod q below the bound
  for (std::uint64_t p = q + 1; p < cap; p += q) {
    if (Real((long long)p) >= bound) break;
    if (p % q == 1 && nt::is_prime(p)) primes.push_back(p);
  }

  std::vector<std::uint64_t> out;
  std::uint64_t q2 = (std::uint64_t)q * q;
  // squarefree products of the primes, optionally times q^2
  std::vector<std::uint64_t> products{1};
  for (size_t i = 0; i < primes.size(); ++i) {
    size_t n = products.size();
    for (size_t j = 0; j < n; ++j) {
      unsigned __int128 v = (unsigned __int128)products[j] * primes[i];
      if (v < (unsigned __int128)cap &&
          Real((long long)(std::uint64_t)v) < bound)
        products.push_back((std::uint64_t)v);
    }
  }
  for (auto v : products) {
    if (v > 1 && Real((long long)v) < bound) out.push_back(v);
    unsigned __int128 w = (unsigned __int128)v * q2;
    if (w < (unsigned __int128)cap && Real((long long)(std::uint64_t)w) < bound)
      out.push_back((std::uint64_t)w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// congruence classes
// ---------------------------------------------------------------------------
namespace {

std::vector<std::uint64_t> poly_pow_linear_mod(std::uint64_t a, unsigned q,
                                               std::uint64_t p) {
  // (x + a)^q mod p, ascending coefficients
  std::vector<std::uint64_t> c{1};
  for (unsigned i = 0; i < q; ++i) {
    std::vector<std::uint64_t> n(c.size() + 1, 0);
    for (size_t j = 0; j < c.size(); ++j) {
      n[j + 1] = (n[j + 1] + c[j]) % p;
      n[j] = (n[j] + nt::mul_mod(c[j], a % p, p)) % p;
    }
    c = std::move(n);
  }
  return c;
}

}  // namespace

std::vector<CongruenceClass> congruence_classes(unsigned q,
                                                std::uint64_t conductor,
                                                double B) {
  auto primes = nt::prime_factors(conductor);
  std::uint64_t f1 = 1;
  for (auto p : primes) f1 *= p;

  // per prime: admissible shifts a (constant term has a positive lift < B)
  std::vector<std::vector<std::uint64_t>> choices;
  for (auto p : primes) {
    std::vector<std::uint64_t> ok;
    for (std::uint64_t a = 0; a < p; ++a) {
      std::uint64_t cq = nt::pow_mod(a, q, p);
      std::uint64_t least = cq == 0 ? p : cq;
      if ((double)least < B) ok.push_back(a);
    }
    choices.push_back(std::move(ok));
  }

  // CRT over the choice product
  std::vector<CongruenceClass> classes;
  std::vector<size_t> idx(primes.size(), 0);
  while (true) {
    // combine (x + a_p)^q mod p over p
    std::vector<std::uint64_t> combined(q + 1, 0);
    for (unsigned j = 0; j <= q; ++j) {
      // CRT coefficient j
      std::uint64_t r = 0, mod = 1;
      for (size_t i = 0; i < primes.size(); ++i) {
        std::uint64_t p = primes[i];
        auto cp = poly_pow_linear_mod(choices[i][idx[i]], q, p);
        std::uint64_t rj = j < cp.size() ? cp[j] : 0;
        std::uint64_t t =
            nt::mul_mod((rj + p - r % p) % p, nt::inv_mod(mod % p, p), p);
        r += mod * t;
        mod *= p;
      }
      combined[j] = r;
    }
    CongruenceClass cc;
    cc.modulus = f1;
    cc.residues.assign(combined.begin(), combined.begin() + q);
    classes.push_back(std::move(cc));

    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == choices[pos].size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }

  // reversal dedup: remove one of {h, x^q h(1/x)} when both are in S
  std::set<std::vector<std::uint64_t>> present;
  for (const auto& c : classes) present.insert(c.residues);
  std::vector<CongruenceClass> out;
  std::set<std::vector<std::uint64_t>> removed;
  for (const auto& c : classes) {
    if (removed.count(c.residues)) continue;
    // x^q h(1/x) with h = x^q + sum_{j<q} h_j x^j equals
    // h_0 x^q + h_1 x^(q-1) + ... + h_{q-1} x + 1, monic only when h_0 = 1;
    // only then can it coincide with a stored monic residue class, with
    // coefficients (1, h_{q-1}, ..., h_1)
    std::vector<std::uint64_t> rev(q, 0);
    if (c.residues[0] == 1) {
      rev[0] = 1 % c.modulus;
      for (unsigned j = 1; j < q; ++j) rev[j] = c.residues[q - j];
      if (rev != c.residues && present.count(rev)) removed.insert(rev);
    }
    out.push_back(c);
  }
  std::vector<CongruenceClass> fin;
  for (const auto& c : out)
    if (!removed.count(c.residues)) fin.push_back(c);
  return fin;
}

// ---------------------------------------------------------------------------
// lifts
// ---------------------------------------------------------------------------
namespace {

long long binom_ll(unsigned n, unsigned k) {
  long long b = 1;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

struct Window {
  long long lo, hi;     // inclusive integer bounds
  std::uint64_t count;  // members of the residue class inside
  long long first;      // smallest member >= lo in the class
};

// window for coefficient j (j = 0 is the constant term)
Window coeff_window(unsigned q, double B, std::uint64_t modulus,
                    std::uint64_t residue, unsigned j) {
  Window w{};
  if (j == 0) {
    w.lo = 1;
    w.hi = (long long)std::floor(B * (1 + 1e-12));
    if ((double)w.hi >= B * (1 + 1e-9)) w.hi -= 0;
  } else {
    double bound = (double)binom_ll(q, j) * B;
    w.hi = (long long)std::floor(bound * (1 + 1e-12));
    w.lo = -w.hi;
  }
  long long m = (long long)modulus;
  long long r = (long long)(residue % modulus);
  long long first = w.lo + ((r - w.lo) % m + m) % m;
  if (first > w.hi) {
    w.count = 0;
    w.first = 0;
  } else {
    w.count = (std::uint64_t)((w.hi - first) / m) + 1;
    w.first = first;
  }
  return w;
}

}  // namespace

std::uint64_t lift_count(const CongruenceClass& h, unsigned q, double B) {
  std::uint64_t total = 1;
  for (unsigned j = 0; j < q; ++j) {
    Window w = coeff_window(q, B, h.modulus, h.residues[j], j);
    total *= w.count;
    if (total == 0) return 0;
  }
  return total;
}

IntPoly lift_by_rank(const CongruenceClass& h, unsigned q, double B,
                     std::uint64_t rank) {
  // mixed radix, most significant digit = leading coefficient a_{q-1}
  std::vector<Window> ws(q);
  for (unsigned j = 0; j < q; ++j)
    ws[j] = coeff_window(q, B, h.modulus, h.residues[j], j);
  std::vector<Int> coeffs(q + 1, Int(0));
  coeffs[q] = 1;
  for (int j = (int)q - 1; j >= 0; --j) {
    std::uint64_t radix = 1;
    for (int i = j - 1; i >= 0; --i) radix *= ws[i].count;
    std::uint64_t digit = radix ? rank / radix : 0;
    rank -= digit * radix;
    coeffs[j] = Int(ws[j].first + (long long)digit * (long long)h.modulus);
  }
  return IntPoly(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// staged filter
// ---------------------------------------------------------------------------

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Congruence: return "congruence";
    case Stage::Lift: return "lift";
    case Stage::Discriminant: return "discriminant";
    case Stage::Divisibility: return "divisibility";
    case Stage::Irreducible: return "irreducible";
    case Stage::RealRooted: return "real-rooted";
    case Stage::Mahler: return "mahler";
    case Stage::Galois: return "galois";
    case Stage::Accepted: return "accepted";
  }
  return "?";
}

namespace {

// quadratic-residue prefilter primes (odd, small, fixed)
constexpr std::uint64_t kQrPrimes[] = {101, 103, 107, 109, 113, 127,
                                       131, 137, 139, 149, 151, 157};

bool qr_mod_p(std::uint64_t v, std::uint64_t p) {
  if (v == 0) return true;
  return nt::pow_mod(v, (p - 1) / 2, p) == 1;
}

}  // namespace

CandidateVerdict filter_candidate(const IntPoly& f, unsigned q,
                                  std::uint64_t conductor, double B) {
  CandidateVerdict v;
  v.conductor = conductor;

  // fast reject: a perfect-square discriminant is a QR modulo every prime
  for (std::uint64_t p : kQrPrimes) {
    std::uint64_t dm;
    try {
      dm = cm::polyalg::discriminant_mod_p(f, p);
    } catch (const DomainError&) {
      continue;
    }
    if (!qr_mod_p(dm, p)) {
      v.stage = Stage::Discriminant;
      return v;
    }
  }

  Int disc = cm::polyalg::discriminant(f);
  if (disc <= 0 || !cm::polyalg::is_square(disc)) {
    v.stage = Stage::Discriminant;
    return v;
  }
  Int f1v = f.eval(Int(1)), fm1v = f.eval(Int(-1));
  Int prod = f1v * fm1v;
  if (prod < 0) prod = -prod;
  if (prod == 0) {
    v.stage = Stage::Discriminant;
    return v;
  }
  // 0 < |f(1) f(-1)| disc < B^(2q)
  {
    PrecisionGuard guard(40);
    Real lhs(prod * disc);
    Real rhs = pow(Real(B), 2 * (long)q) * (1 + pow(Real(10), -9));
    if (!(lhs < rhs)) {
      v.stage = Stage::Discriminant;
      return v;
    }
  }

  Int fq = pow(Int((long long)conductor), q - 1);
  if (disc % fq != 0) {
    v.stage = Stage::Divisibility;
    return v;
  }

  if (!cm::polyalg::is_irreducible(f)) {
    v.stage = Stage::Irreducible;
    return v;
  }

  if (!cm::polyalg::real_rooted(f)) {
    v.stage = Stage::RealRooted;
    return v;
  }

  cm::polyalg::MeasuredValue mm;
  try {
    mm = cm::polyalg::mahler_measure_poly(f, 128);
  } catch (const VerificationError&) {
    mm = cm::polyalg::mahler_measure_poly(f, 512);  // one retry at 4x
  }
  {
    PrecisionGuard guard(40);
    Real M = exp(mm.value);
    v.measure = M.convert_to<double>();
    Real upper = Real(B) * (1 + pow(Real(10), -9));
    if (!(M > 1 && M < upper)) {
      v.stage = Stage::Mahler;
      return v;
    }
  }

  if (!cm::polyalg::cyclic_galois_certificate(f, q)) {
    v.stage = Stage::Galois;
    return v;
  }
  v.stage = Stage::Accepted;
  return v;
}

// ---------------------------------------------------------------------------
// the full search
// ---------------------------------------------------------------------------
namespace {

constexpr std::uint64_t kBlockSize = 1 << 20;

std::string config_hash(unsigned q, double B,
                        const std::vector<std::uint64_t>& conductors) {
  std::ostringstream os;
  os.precision(17);
  os << q << "|" << B << "|";
  for (auto c : conductors) os << c << ",";
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : os.str()) {
    h ^= (unsigned char)c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hx;
  hx << std::hex << h;
  return hx.str();
}

IntPoly canonical_witness(const IntPoly& f) {
  // normalize modulo reversal (when monic) and sign
  IntPoly best = f;
  if (f.coeff(0) == 1 || f.coeff(0) == -1) {
    IntPoly rev = f.reversal();
    if (rev.lead() == -1) rev = Int(-1) * rev;
    if (rev.lead() == 1) {
      if (rev.coeff(0) < 0) rev = rev.negate_variable();
      if (rev.coeffs < best.coeffs) best = rev;
    }
  }
  return best;
}

}  // namespace

std::string SearchReport::to_json(bool with_runtime) const {
  nlohmann::json j;
  j["q"] = q;
  j["B"] = B;
  j["conductors"] = conductors;
  j["minimum"] = minimum;
  auto warr = nlohmann::json::array();
  for (const auto& w : witnesses) {
    nlohmann::json wj;
    std::vector<std::string> cs;
    for (const auto& c : w.poly.coeffs) cs.push_back(c.str());
    wj["coeffs"] = cs;
    wj["measure"] = w.measure;
    wj["conductor"] = w.conductor;
    warr.push_back(wj);
  }
  j["witnesses"] = warr;
  j["stats"] = stage_counts;
  j["candidates_tested"] = candidates_tested;
  if (with_runtime) j["runtime_ms"] = runtime_ms;
  return j.dump(1);
}

SearchReport search_min(const SearchConfig& config) {
  auto t_start = std::chrono::steady_clock::now();
  unsigned q = config.q;
  if (q < 3 || !nt::is_prime((std::uint64_t)q))
    throw DomainError("search_min: q must be an odd prime");

  double B = config.B;
  if (B <= 0) {
    auto ma = cm::gaussperiod::mahler_alpha(q, 40);
    PrecisionGuard guard(40);
    B = exp(ma.value).convert_to<double>() * (1 + 1e-10);
  }

  std::vector<std::uint64_t> conductors = conductor_set(q, B);
  if (config.filter == ConductorFilter::TameOnly) {
    std::vector<std::uint64_t> keep;
    for (auto c : conductors)
      if (c % ((std::uint64_t)q * q) != 0) keep.push_back(c);
    conductors = keep;
  } else if (config.filter == ConductorFilter::Explicit) {
    std::vector<std::uint64_t> keep;
    for (auto c : conductors)
      if (std::find(config.conductors.begin(), config.conductors.end(), c) !=
          config.conductors.end())
        keep.push_back(c);
    conductors = keep;
  }

  // resource estimate
  struct Unit {
    std::uint64_t conductor;
    std::uint64_t class_id;
    std::uint64_t block_id;
    CongruenceClass cls;
    std::uint64_t begin, end;  // rank range
  };
  std::vector<Unit> units;
  std::uint64_t total_candidates = 0;
  for (auto cond : conductors) {
    auto classes = congruence_classes(q, cond, B);
    for (std::uint64_t ci = 0; ci < classes.size(); ++ci) {
      std::uint64_t n = lift_count(classes[ci], q, B);
      total_candidates += n;
      for (std::uint64_t b = 0; b * kBlockSize < n; ++b) {
        Unit u;
        u.conductor = cond;
        u.class_id = ci;
        u.block_id = b;
        u.cls = classes[ci];
        u.begin = b * kBlockSize;
        u.end = std::min(n, (b + 1) * kBlockSize);
        units.push_back(std::move(u));
      }
    }
  }
  if (total_candidates > 200000000ULL && !config.force)
    throw ResourceGuardError(
        "search_min: estimated " + std::to_string(total_candidates) +
        " candidates; pass force to override");

  // checkpoint resume
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> done;
  std::string chash = config_hash(q, B, conductors);
  std::ofstream ck_out;
  std::mutex ck_mutex;
  std::vector<Witness> resumed;
  if (!config.checkpoint_path.empty()) {
    std::ifstream in(config.checkpoint_path);
    std::string line;
    bool head_ok = false;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;
      if (j.contains("config_hash")) {
        head_ok = j["config_hash"] == chash;
        if (!head_ok) break;
        continue;
      }
      if (!head_ok) break;
      done.emplace(j["conductor"].get<std::uint64_t>(),
                   j["class-id"].get<std::uint64_t>(),
                   j["block-id"].get<std::uint64_t>());
      for (const auto& s : j["survivors"]) {
        std::vector<Int> cs;
        for (const auto& c : s["coeffs"]) cs.emplace_back(c.get<std::string>());
        resumed.push_back(Witness{IntPoly(std::move(cs)),
                                  s["measure"].get<double>(),
                                  j["conductor"].get<std::uint64_t>()});
      }
    }
    in.close();
    bool fresh = done.empty();
    ck_out.open(config.checkpoint_path, fresh ? std::ios::trunc : std::ios::app);
    if (fresh) {
      nlohmann::json h;
      h["config_hash"] = chash;
      ck_out << h.dump() << "\n";
      ck_out.flush();
    }
  }

  std::mutex merge_mutex;
  std::vector<Witness> accepted = resumed;
  std::map<std::string, std::uint64_t> stage_counts;
  std::atomic<std::uint64_t> tested{0};
  std::atomic<size_t> next_unit{0};

  auto worker = [&]() {
    std::map<std::string, std::uint64_t> local_counts;
    std::vector<Witness> local_accepted;
    while (true) {
      size_t ui = next_unit.fetch_add(1);
      if (ui >= units.size()) break;
      const Unit& u = units[ui];
      if (done.count({u.conductor, u.class_id, u.block_id})) continue;
      std::vector<Witness> block_survivors;
      for (std::uint64_t r = u.begin; r < u.end; ++r) {
        IntPoly f = lift_by_rank(u.cls, q, B, r);
        CandidateVerdict cv = filter_candidate(f, q, u.conductor, B);
        ++local_counts[stage_name(cv.stage)];
        if (cv.stage == Stage::Accepted)
          block_survivors.push_back(Witness{f, cv.measure, u.conductor});
      }
      tested += (u.end - u.begin);
      if (!config.checkpoint_path.empty()) {
        std::lock_guard<std::mutex> lock(ck_mutex);
        nlohmann::json j;
        j["conductor"] = u.conductor;
        j["class-id"] = u.class_id;
        j["block-id"] = u.block_id;
        j["candidates-tested"] = u.end - u.begin;
        auto arr = nlohmann::json::array();
        for (const auto& w : block_survivors) {
          nlohmann::json wj;
          std::vector<std::string> cs;
          for (const auto& c : w.poly.coeffs) cs.push_back(c.str());
          wj["coeffs"] = cs;
          wj["measure"] = w.measure;
          arr.push_back(wj);
        }
        j["survivors"] = arr;
        ck_out << j.dump() << "\n";
        ck_out.flush();
      }
      for (auto& w : block_survivors) local_accepted.push_back(std::move(w));
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (const auto& [k2, v2] : local_counts) stage_counts[k2] += v2;
    for (auto& w : local_accepted) accepted.push_back(std::move(w));
  };

  int nthreads = std::max(1, config.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SearchReport rep;
  rep.q = q;
  rep.B = B;
  rep.conductors = conductors;
  rep.stage_counts = stage_counts;
  rep.candidates_tested = tested.load();

  if (!accepted.empty()) {
    double mn = accepted[0].measure;
    for (const auto& w : accepted) mn = std::min(mn, w.measure);
    rep.minimum = mn;
    // all witnesses attaining the minimum, modulo reversal and sign
    std::set<std::vector<Int>> seen;
    for (const auto& w : accepted) {
      if (w.measure > mn * (1 + 1e-10) + 1e-10) continue;
      IntPoly cf = canonical_witness(w.poly);
      if (seen.insert(cf.coeffs).second)
        rep.witnesses.push_back(Witness{cf, w.measure, w.conductor});
    }
    std::sort(rep.witnesses.begin(), rep.witnesses.end(),
              [](const Witness& a, const Witness& b) {
                return a.poly.coeffs < b.poly.coeffs;
              });
  }
  rep.runtime_ms = (std::uint64_t)std::chrono::duration_cast<
                       std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return rep;
}

}  // namespace cm::search
