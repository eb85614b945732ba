#pragma once

#include <cstdint>
#include <vector>

#include "dtlab/factor_sieve.hpp"
#include "dtlab/newform.hpp"

namespace dtlab {

// Closed subinterval of [0, pi].
struct Interval {
  double lo;
  double hi;
  Interval(double lo, double hi);
  bool contains(double theta) const { return lo <= theta && theta <= hi; }
  double length() const { return hi - lo; }
};

// mu_ST(I) = (2/pi) int_I sin^2 t dt = (1/pi) [(hi - lo) - (sin 2hi - sin 2lo)/2].
double sato_tate_measure(const Interval& iv);

// lambda = a_p / p^{(k-1)/2} in [-2, 2], theta = arccos(lambda / 2) in [0, pi].
struct AngleRecord {
  uint32_t p;
  mpz_class a_p;
  double lambda;
  double theta;
};

struct AngleTable {
  NewformSpec spec;
  double x_max = 0;
  std::vector<AngleRecord> records;  // ascending p
};

// Requires x_max <= table.n_max.  Normalization uses sign and exact bit
// length of a_p, so |lambda| stays accurate to ~1e-14 at any coefficient size;
// the two-sided bound |a_p| <= 2 p^{(k-1)/2} is verified exactly on the way.
AngleTable angle_table(const CoeffTable& table, const FactorSieve& sieve,
                       double x_max);

uint64_t zero_coefficient_census(const AngleTable& angles);

}  // namespace dtlab
