#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dtlab/factor_sieve.hpp"

namespace dtlab {

// Summand families over r-tuples (d_1, ..., d_r) of positive integers <= x,
// each a function of m = lcm(d_1, ..., d_r):
//   inv_phi_lcm      1 / phi(m)
//   lcm_over_phi_sq  m / phi(m)^2
//   inv_lcm          1 / m
// All three grow like (log x)^{2^r - 1}.
enum class LcmKind { inv_phi_lcm, lcm_over_phi_sq, inv_lcm };

const char* lcm_kind_name(LcmKind kind);
LcmKind parse_lcm_kind(const std::string& name);

enum class SumMode { exact, fp };

struct LcmSumValue {
  mpq_class exact;  // populated only in exact mode
  double value = 0;
  SumMode mode = SumMode::fp;
};

// Exact rationals below the cutoff, compensated doubles above.
inline constexpr double kExactModeCutoff = 2000;

// Largest x admitted to full tuple enumeration at rank r; chosen so the
// worst case stays around 5e8 visited tuples.
double tuple_ceiling(uint32_t r);

LcmSumValue lcm_sum(LcmKind kind, double x, uint32_t r, const FactorSieve& sieve,
                    std::optional<SumMode> force_mode = {}, unsigned threads = 1);

LcmSumValue inv_phi_lcm_sum(double x, uint32_t r, const FactorSieve& sieve,
                            unsigned threads = 1);
LcmSumValue lcm_over_phi_sq_sum(double x, uint32_t r, const FactorSieve& sieve,
                                unsigned threads = 1);
LcmSumValue inv_lcm_sum(double x, uint32_t r, const FactorSieve& sieve,
                        unsigned threads = 1);

// Sorted-tuple evaluation over an explicit ascending candidate set: each
// multiset is visited once and counted with its multinomial weight, which
// reproduces the full ordered-tuple sum exactly.
LcmSumValue sorted_tuple_sum(LcmKind kind, std::span<const uint32_t> values,
                             uint32_t r, const FactorSieve& sieve, SumMode mode,
                             unsigned threads = 1);

// Number of r-tuples of divisors of m with lcm equal to m:
// multiplicative with value (e+1)^r - e^r on p^e.
uint64_t phi_r_full(uint64_t m, uint32_t r, const FactorSieve& sieve);

// Same count restricted to divisors d with z_lo <= d <= x_hi (real bounds),
// via Moebius inversion over the divisor lattice of m.
struct PhiRQuery {
  uint64_t m;
  uint32_t r;
  double x_hi;
  double z_lo;
};
uint64_t phi_r_constrained(const PhiRQuery& q, const FactorSieve& sieve);

// Sum of 1/lcm over r-tuples drawn from the x^{1/s}-smooth integers in
// [x^{c/4}, x^c].
LcmSumValue smooth_restricted_inv_lcm(double x, double c, double s, uint32_t r,
                                      const FactorSieve& sieve,
                                      unsigned threads = 1);

struct LcmSumRow {
  double x;
  LcmSumValue sum;
  double ratio;  // sum / (log x)^{2^r - 1}
};

struct LcmSumReport {
  LcmKind kind;
  uint32_t r;
  std::vector<LcmSumRow> rows;
};

LcmSumReport lcm_sum_report(LcmKind kind, uint32_t r,
                            std::span<const double> x_grid,
                            const FactorSieve& sieve, unsigned threads = 1);

// Tauberian sanity data: normalized ratios along the grid and the relative
// change between consecutive ratios.  Requires at least three grid points.
struct GrowthDiagnostic {
  std::vector<double> ratios;
  std::vector<double> changes;
};
GrowthDiagnostic growth_diagnostic(const LcmSumReport& report);

}  // namespace dtlab
