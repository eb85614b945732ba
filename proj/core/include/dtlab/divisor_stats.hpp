#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dtlab/angles.hpp"
#include "dtlab/bigfactor.hpp"
#include "dtlab/factor_sieve.hpp"

namespace dtlab {

// d(|a_f(p)|) alongside the angle, for primes with nonzero coefficient.
// Primes whose coefficient resisted factoring are excluded and counted.
struct DivisorTable {
  struct Row {
    uint32_t p;
    double theta;
    uint64_t d;
  };
  std::vector<Row> rows;  // ascending p
  double x_max = 0;
  uint64_t failure_count = 0;
};

DivisorTable build_divisor_table(const AngleTable& angles,
                                 const BigFactorizer& factorizer);

struct MomentRow {
  double x;
  uint64_t count;                 // primes p <= x with theta in I, a_p != 0
  std::optional<double> moment;   // average of d(|a_p|)^r over those primes
  std::optional<double> ratio;    // moment / (log x)^{2^r - 1}
};

struct MomentReport {
  NewformSpec spec;
  Interval interval;
  uint32_t r;
  std::vector<MomentRow> rows;
  uint64_t failure_count = 0;
};

MomentReport divisor_moment(const DivisorTable& table, const NewformSpec& spec,
                            const Interval& interval, uint32_t r,
                            std::span<const double> x_grid);
MomentReport divisor_moment(const AngleTable& angles,
                            const BigFactorizer& factorizer,
                            const Interval& interval, uint32_t r,
                            std::span<const double> x_grid);

// #{p <= x : a_p != 0, delta | a_p, theta_p in I}
uint64_t pi_x_delta_I(const AngleTable& angles, uint64_t delta,
                      const Interval& interval, double x);

// Multiplicative density model h(delta) = prod over ell^m || delta of
// ell^{2-m}/(ell^2 - 1); no prediction at exceptional primes.
std::optional<double> h_model(uint64_t delta,
                              const std::set<uint64_t>& exceptional,
                              const FactorSieve& sieve);

// Primes with nonsurjective mod-ell coefficient representation, per weight.
std::set<uint64_t> default_exceptional_primes(uint32_t weight);

struct DensityRow {
  double x;
  uint64_t count;
  double density;                // count / #{p <= x : a_p != 0}
  std::optional<double> model;   // h(delta) * mu_ST(I)
};

struct DensityReport {
  NewformSpec spec;
  uint64_t delta;
  Interval interval;
  std::vector<DensityRow> rows;
};

DensityReport density_report(const AngleTable& angles, uint64_t delta,
                             const Interval& interval,
                             std::span<const double> x_grid,
                             const std::set<uint64_t>& exceptional,
                             const FactorSieve& sieve);

// Per-modulus divisibility counts with the two normalizations whose
// boundedness props up the moment method: delta * count / #A should stay
// bounded away from 0 (lower condition) and phi(delta) * count / #A bounded
// above (upper condition).  The window flag records delta <= x^{1/25}.
struct ConditionRow {
  uint64_t delta;
  uint64_t count;
  double delta_ratio;
  double phi_ratio;
  bool within_window;
};

struct ConditionReport {
  NewformSpec spec;
  Interval interval;
  double x;
  uint64_t a_count;  // primes p <= x with a_p != 0, theta in I
  std::vector<ConditionRow> rows;
};

ConditionReport condition_diagnostics(const AngleTable& angles,
                                      const Interval& interval, double x,
                                      uint64_t delta_max,
                                      const FactorSieve& sieve);

// Partition of primes p <= x by the shape of |a_p| = q_1 q_2 ... q_J
// (ascending primes with multiplicity):
//   head      j = max prefix with q_1 ... q_j <= x^c
//   sigma1    j = 0
//   s1        0 < j, J - j < (2 beta + 1)/c
//   s3 / s4   remaining primes, split by the size class s of q_j
//             (x^{1/(s+1)} <= q_j < x^{1/s}), small s to s3, large s to s4.
enum class DecompClass { sigma1, s1, s3, s4 };
const char* decomp_class_name(DecompClass c);

struct DecompAssignment {
  DecompClass cls;
  uint32_t s = 0;  // set for s3 and s4
};
DecompAssignment classify_prime_factor_shape(const ZFactorization& f, double x,
                                             double c, double beta);

struct DecompositionRow {
  DecompClass cls;
  std::optional<uint32_t> s;  // s3 rows are split by s
  uint64_t count;
  mpz_class dr_sum;           // sum of d(|a_p|)^r over the class
};

struct DecompositionReport {
  NewformSpec spec;
  double x;
  double c;
  double beta;
  uint32_t r;
  std::vector<DecompositionRow> rows;
  mpz_class total;            // equals sum of d(|a_p|)^r over all p <= x, a_p != 0
  uint64_t zero_count = 0;
  uint64_t failure_count = 0;
};

DecompositionReport decompose_divisor_sum(const AngleTable& angles,
                                          const BigFactorizer& factorizer,
                                          double x, uint32_t r, double c,
                                          double beta);

struct CensusRow {
  double x;
  uint64_t primes;     // pi(x)
  uint64_t hits;       // theta_p in I
  double frequency;
  double model;        // mu_ST(I)
  double deviation;    // |frequency - model|
};

struct CensusReport {
  NewformSpec spec;
  Interval interval;
  std::vector<CensusRow> rows;
};

CensusReport sato_tate_census(const AngleTable& angles, const Interval& interval,
                              std::span<const double> x_grid);

}  // namespace dtlab
