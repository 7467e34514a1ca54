#include "cyclomahler/mp.hpp"

#include <cstring>
#include <vector>

namespace cm {

std::string to_decimal_string(const Real& x, unsigned digits) {
  if (digits < 1) digits = 1;
  if (mpfr_zero_p(x.backend().data()))
    return "0." + std::string(digits > 1 ? digits - 1 : 0, '0');
  if (mpfr_nan_p(x.backend().data())) return "nan";
  if (mpfr_inf_p(x.backend().data()))
    return mpfr_sgn(x.backend().data()) > 0 ? "inf" : "-inf";

  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, digits, x.backend().data(),
                           MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);

  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(0, 1);
  // mant has `digits` digits, value = 0.mant * 10^e
  std::string out;
  if (e <= 0) {
    out = "0." + std::string(static_cast<size_t>(-e), '0') + mant;
  } else if (static_cast<size_t>(e) >= mant.size()) {
    out = mant + std::string(static_cast<size_t>(e) - mant.size(), '0') + ".0";
  } else {
    out = mant.substr(0, static_cast<size_t>(e)) + "." +
          mant.substr(static_cast<size_t>(e));
  }
  return neg ? "-" + out : out;
}

}  // namespace cm
