#include "dtlab/eisenstein.hpp"

#include "dtlab/errors.hpp"

namespace dtlab {

Series sigma_power_series(uint32_t k, size_t n_max) {
  Series s(n_max + 1);
  mpz_class pw;
  for (size_t d = 1; d <= n_max; ++d) {
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(d), k);
    for (size_t m = d; m <= n_max; m += d) s[m] += pw;
  }
  return s;
}

Series eisenstein_series(uint32_t weight, size_t n_max) {
  long c;
  switch (weight) {
    case 4: c = 240; break;
    case 6: c = -504; break;
    case 8: c = 480; break;
    case 10: c = -264; break;
    case 14: c = -24; break;
    default:
      throw ConfigError("eisenstein_series: unsupported weight");
  }
  Series e = sigma_power_series(weight - 1, n_max);
  for (size_t n = 1; n <= n_max; ++n) e[n] *= c;
  e[0] = 1;
  return e;
}

}  // namespace dtlab
