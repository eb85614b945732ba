#include "dtlab/divisor_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dtlab/errors.hpp"

namespace dtlab {

DivisorTable build_divisor_table(const AngleTable& angles,
                                 const BigFactorizer& factorizer) {
  DivisorTable out;
  out.x_max = angles.x_max;
  out.rows.reserve(angles.records.size());
  mpz_class abs_a;
  for (const auto& rec : angles.records) {
    if (sgn(rec.a_p) == 0) continue;
    abs_a = abs(rec.a_p);
    auto f = factorizer.factor(abs_a);
    if (!f) {
      ++out.failure_count;
      continue;
    }
    out.rows.push_back({rec.p, rec.theta, divisor_count(*f)});
  }
  return out;
}

namespace {

void check_grid(std::span<const double> x_grid) {
  if (x_grid.empty()) throw ConfigError("x grid must be non-empty");
  if (!std::is_sorted(x_grid.begin(), x_grid.end()))
    throw ConfigError("x grid must be ascending");
}

double to_double(unsigned __int128 v) { return double(v); }

}  // namespace

MomentReport divisor_moment(const DivisorTable& table, const NewformSpec& spec,
                            const Interval& interval, uint32_t r,
                            std::span<const double> x_grid) {
  if (r < 1 || r > 4) throw ConfigError("divisor_moment: rank out of range");
  check_grid(x_grid);
  if (x_grid.back() > table.x_max)
    throw ConfigError("divisor_moment: grid exceeds the divisor table range");

  MomentReport report{spec, interval, r, {}, table.failure_count};
  size_t idx = 0;
  uint64_t count = 0;
  unsigned __int128 numerator = 0;
  for (double x : x_grid) {
    for (; idx < table.rows.size() && double(table.rows[idx].p) <= x; ++idx) {
      const auto& row = table.rows[idx];
      if (!interval.contains(row.theta)) continue;
      unsigned __int128 t = 1;
      for (uint32_t i = 0; i < r; ++i) t *= row.d;
      numerator += t;
      ++count;
    }
    MomentRow out{x, count, {}, {}};
    if (count > 0) {
      out.moment = to_double(numerator) / double(count);
      out.ratio = *out.moment /
                  std::pow(std::log(x), double((uint64_t(1) << r) - 1));
    }
    report.rows.push_back(out);
  }
  return report;
}

MomentReport divisor_moment(const AngleTable& angles,
                            const BigFactorizer& factorizer,
                            const Interval& interval, uint32_t r,
                            std::span<const double> x_grid) {
  return divisor_moment(build_divisor_table(angles, factorizer), angles.spec,
                        interval, r, x_grid);
}

uint64_t pi_x_delta_I(const AngleTable& angles, uint64_t delta,
                      const Interval& interval, double x) {
  if (delta < 1) throw ConfigError("pi_x_delta_I: modulus must be positive");
  if (x > angles.x_max)
    throw ConfigError("pi_x_delta_I: x exceeds the angle table range");
  uint64_t n = 0;
  for (const auto& rec : angles.records) {
    if (double(rec.p) > x) break;
    if (sgn(rec.a_p) == 0) continue;
    if (!interval.contains(rec.theta)) continue;
    if (mpz_divisible_ui_p(rec.a_p.get_mpz_t(),
                           static_cast<unsigned long>(delta)))
      ++n;
  }
  return n;
}

std::optional<double> h_model(uint64_t delta,
                              const std::set<uint64_t>& exceptional,
                              const FactorSieve& sieve) {
  if (delta < 1) throw ConfigError("h_model: modulus must be positive");
  double h = 1.0;
  for (const auto& [p, e] : sieve.factorize(delta).factors) {
    if (exceptional.count(p)) return std::nullopt;
    // ell^{2-m} / (ell^2 - 1) at ell^m || delta
    double v = 1.0 / (double(p) * p - 1.0);
    for (uint32_t i = 2; i < e; ++i) v /= double(p);
    if (e == 1) v *= double(p);
    h *= v;
  }
  return h;
}

std::set<uint64_t> default_exceptional_primes(uint32_t weight) {
  switch (weight) {
    case 12: return {2, 3, 5, 7, 23, 691};
    case 16: return {2, 3, 5, 7, 11, 31, 3617};
    case 18: return {2, 3, 5, 7, 11, 13, 43867};
    case 20: return {2, 3, 5, 7, 11, 13, 283, 617};
    case 22: return {2, 3, 5, 7, 13, 17, 131, 593};
    case 26: return {2, 3, 5, 7, 11, 17, 19, 657931};
    default:
      throw ConfigError("default_exceptional_primes: unsupported weight");
  }
}

DensityReport density_report(const AngleTable& angles, uint64_t delta,
                             const Interval& interval,
                             std::span<const double> x_grid,
                             const std::set<uint64_t>& exceptional,
                             const FactorSieve& sieve) {
  check_grid(x_grid);
  if (x_grid.back() > angles.x_max)
    throw ConfigError("density_report: grid exceeds the angle table range");

  std::optional<double> h = h_model(delta, exceptional, sieve);
  std::optional<double> model;
  if (h) model = *h * sato_tate_measure(interval);

  DensityReport report{angles.spec, delta, interval, {}};
  for (double x : x_grid) {
    uint64_t count = pi_x_delta_I(angles, delta, interval, x);
    uint64_t nonzero = 0;
    for (const auto& rec : angles.records) {
      if (double(rec.p) > x) break;
      if (sgn(rec.a_p) != 0) ++nonzero;
    }
    DensityRow row{x, count,
                   nonzero ? double(count) / double(nonzero) : 0.0, model};
    report.rows.push_back(row);
  }
  return report;
}

ConditionReport condition_diagnostics(const AngleTable& angles,
                                      const Interval& interval, double x,
                                      uint64_t delta_max,
                                      const FactorSieve& sieve) {
  if (delta_max < 1) throw ConfigError("condition_diagnostics: empty modulus range");
  if (x > angles.x_max)
    throw ConfigError("condition_diagnostics: x exceeds the angle table range");

  uint64_t a_count = 0;
  for (const auto& rec : angles.records) {
    if (double(rec.p) > x) break;
    if (sgn(rec.a_p) != 0 && interval.contains(rec.theta)) ++a_count;
  }

  const double window = std::pow(x, 1.0 / 25.0);
  ConditionReport report{angles.spec, interval, x, a_count, {}};
  for (uint64_t delta = 1; delta <= delta_max; ++delta) {
    uint64_t count = pi_x_delta_I(angles, delta, interval, x);
    double denom = a_count ? double(a_count) : 1.0;
    ConditionRow row{
        delta, count, double(delta) * double(count) / denom,
        double(sieve.euler_phi_of(delta)) * double(count) / denom,
        double(delta) <= window};
    report.rows.push_back(row);
  }
  return report;
}

const char* decomp_class_name(DecompClass c) {
  switch (c) {
    case DecompClass::sigma1: return "sigma1";
    case DecompClass::s1: return "s1";
    case DecompClass::s3: return "s3";
    case DecompClass::s4: return "s4";
  }
  throw ConfigError("unknown decomposition class");
}

DecompAssignment classify_prime_factor_shape(const ZFactorization& f, double x,
                                             double c, double beta) {
  if (!(x > 1) || !(c > 0) || !(c < 1) || !(beta > 0))
    throw ConfigError("classify_prime_factor_shape: need x > 1, 0 < c < 1, beta > 0");

  const double x_c = std::pow(x, c);
  uint64_t j_total = 0;
  for (const auto& [p, e] : f.factors) j_total += e;

  // Longest prefix of the ascending prime list (with multiplicity) whose
  // product stays at or below x^c; the product comparison is exact.
  uint64_t j = 0;
  mpz_class prod(1);
  mpz_class last_in_prefix(0);
  bool over = false;
  for (const auto& [p, e] : f.factors) {
    for (uint32_t i = 0; i < e && !over; ++i) {
      prod *= p;
      if (mpz_cmp_d(prod.get_mpz_t(), x_c) <= 0) {
        ++j;
        last_in_prefix = p;
      } else {
        over = true;
      }
    }
    if (over) break;
  }

  if (j == 0) return {DecompClass::sigma1, 0};
  if (double(j_total - j) < (2 * beta + 1) / c) return {DecompClass::s1, 0};

  // Size class of the last prefix prime: the s >= 1 with
  // x^{1/(s+1)} <= q_j < x^{1/s}, i.e. s < log x / log q_j <= s + 1.
  long exp2;
  double m = mpz_get_d_2exp(&exp2, last_in_prefix.get_mpz_t());
  double log_q = std::log(m) + double(exp2) * std::numbers::ln2;
  double t = std::log(x) / log_q;
  uint32_t s = uint32_t(std::max(1.0, std::ceil(t) - 1));

  const double s_split = std::log(x) / (2 * std::log(std::log(x)));
  return {double(s) < s_split ? DecompClass::s3 : DecompClass::s4, s};
}

DecompositionReport decompose_divisor_sum(const AngleTable& angles,
                                          const BigFactorizer& factorizer,
                                          double x, uint32_t r, double c,
                                          double beta) {
  if (r < 1 || r > 4) throw ConfigError("decompose_divisor_sum: rank out of range");
  if (x > angles.x_max)
    throw ConfigError("decompose_divisor_sum: x exceeds the angle table range");

  DecompositionReport report{angles.spec, x, c, beta, r, {}, 0, 0, 0};

  // class -> (count, sum); s3 keyed further by s
  uint64_t count_sigma1 = 0, count_s1 = 0, count_s4 = 0;
  mpz_class sum_sigma1 = 0, sum_s1 = 0, sum_s4 = 0;
  std::map<uint32_t, std::pair<uint64_t, mpz_class>> s3;

  mpz_class abs_a;
  for (const auto& rec : angles.records) {
    if (double(rec.p) > x) break;
    if (sgn(rec.a_p) == 0) {
      ++report.zero_count;
      continue;
    }
    abs_a = abs(rec.a_p);
    auto f = factorizer.factor(abs_a);
    if (!f) {
      ++report.failure_count;
      continue;
    }
    uint64_t d = divisor_count(*f);
    mpz_class dr(1);
    for (uint32_t i = 0; i < r; ++i) dr *= d;

    auto cls = classify_prime_factor_shape(*f, x, c, beta);
    switch (cls.cls) {
      case DecompClass::sigma1: ++count_sigma1; sum_sigma1 += dr; break;
      case DecompClass::s1: ++count_s1; sum_s1 += dr; break;
      case DecompClass::s3: {
        auto& slot = s3[cls.s];
        ++slot.first;
        slot.second += dr;
        break;
      }
      case DecompClass::s4: ++count_s4; sum_s4 += dr; break;
    }
    report.total += dr;
  }

  report.rows.push_back({DecompClass::sigma1, {}, count_sigma1, sum_sigma1});
  report.rows.push_back({DecompClass::s1, {}, count_s1, sum_s1});
  if (s3.empty()) {
    report.rows.push_back({DecompClass::s3, {}, 0, mpz_class(0)});
  } else {
    for (const auto& [s, agg] : s3)
      report.rows.push_back({DecompClass::s3, s, agg.first, agg.second});
  }
  report.rows.push_back({DecompClass::s4, {}, count_s4, sum_s4});
  return report;
}

CensusReport sato_tate_census(const AngleTable& angles, const Interval& interval,
                              std::span<const double> x_grid) {
  check_grid(x_grid);
  if (x_grid.back() > angles.x_max)
    throw ConfigError("sato_tate_census: grid exceeds the angle table range");

  const double model = sato_tate_measure(interval);
  CensusReport report{angles.spec, interval, {}};
  size_t idx = 0;
  uint64_t primes = 0, hits = 0;
  for (double x : x_grid) {
    for (; idx < angles.records.size() && double(angles.records[idx].p) <= x;
         ++idx) {
      ++primes;
      if (interval.contains(angles.records[idx].theta)) ++hits;
    }
    double freq = primes ? double(hits) / double(primes) : 0.0;
    report.rows.push_back(
        {x, primes, hits, freq, model, std::fabs(freq - model)});
  }
  return report;
}

}  // namespace dtlab
