#include "dtlab/angles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtlab {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo >= 0.0) || !(hi <= std::numbers::pi) || !(lo <= hi))
    throw ConfigError("interval must satisfy 0 <= lo <= hi <= pi");
}

double sato_tate_measure(const Interval& iv) {
  return ((iv.hi - iv.lo) -
          (std::sin(2 * iv.hi) - std::sin(2 * iv.lo)) / 2) /
         std::numbers::pi;
}

namespace {

// Exact check of a_p^2 <= 4 p^{k-1}; equality can only occur off primes, so a
// violation means the table is corrupt.
void check_coefficient_bound(uint32_t p, const mpz_class& a, uint32_t weight) {
  mpz_class lhs = a * a;
  mpz_class rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), p, weight - 1);
  rhs *= 4;
  if (lhs > rhs)
    throw Error("coefficient bound violated at p=" + std::to_string(p));
}

double normalized_lambda(const mpz_class& a, uint32_t p, uint32_t weight) {
  if (sgn(a) == 0) return 0.0;
  long exp2;
  double m = mpz_get_d_2exp(&exp2, a.get_mpz_t());
  double ln_a = std::log(std::fabs(m)) + double(exp2) * std::numbers::ln2;
  double lam = std::exp(ln_a - 0.5 * double(weight - 1) * std::log(double(p)));
  if (sgn(a) < 0) lam = -lam;
  return std::clamp(lam, -2.0, 2.0);
}

}  // namespace

AngleTable angle_table(const CoeffTable& table, const FactorSieve& sieve,
                       double x_max) {
  if (x_max > double(table.n_max))
    throw ConfigError("angle_table: x_max exceeds coefficient table length");
  AngleTable out{table.spec, x_max, {}};
  for (uint32_t p : sieve.primes_up_to(x_max)) {
    const mpz_class& a = table.a[p];
    check_coefficient_bound(p, a, table.spec.weight);
    double lam = normalized_lambda(a, p, table.spec.weight);
    double theta = std::acos(std::clamp(lam / 2.0, -1.0, 1.0));
    out.records.push_back({p, a, lam, theta});
  }
  return out;
}

uint64_t zero_coefficient_census(const AngleTable& angles) {
  uint64_t n = 0;
  for (const auto& rec : angles.records)
    if (sgn(rec.a_p) == 0) ++n;
  return n;
}

}  // namespace dtlab
