#pragma once

#include <cstdint>

#include "dtlab/series.hpp"

namespace dtlab {

// sigma_k(n) = sum of k-th powers of divisors, as a series with term 0 zero.
Series sigma_power_series(uint32_t k, size_t n_max);

// Level-one Eisenstein series with integer coefficients, normalized constant
// term 1: supported weights 4, 6, 8, 10, 14.  E.g. E4 = 1 + 240 sum sigma_3 q^n.
Series eisenstein_series(uint32_t weight, size_t n_max);

}  // namespace dtlab
