#pragma once

// Independent reference computations for tests.  Everything here is written
// against first principles (trial division, full tuple enumeration, the
// Dirichlet hyperbola identity) and deliberately shares no code with the
// library paths it checks.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "dtlab/lcm_sums.hpp"

namespace oracle {

inline std::map<uint64_t, uint32_t> trial_factor(uint64_t n) {
  std::map<uint64_t, uint32_t> f;
  for (uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) ++f[p], n /= p;
  if (n > 1) ++f[n];
  return f;
}

inline uint64_t d_of(uint64_t n) {
  uint64_t d = 1;
  for (const auto& [p, e] : trial_factor(n)) d *= e + 1;
  return d;
}

inline uint64_t phi_of(uint64_t n) {
  if (n == 0) return 0;
  uint64_t v = n;
  for (const auto& [p, e] : trial_factor(n)) v = v / p * (p - 1);
  return v;
}

inline uint64_t lcm2(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

// sum_{n<=x} d(n) = 2 sum_{i<=sqrt x} floor(x/i) - floor(sqrt x)^2
inline uint64_t hyperbola_d_sum(uint64_t x) {
  uint64_t root = 0;
  while ((root + 1) * (root + 1) <= x) ++root;
  uint64_t s = 0;
  for (uint64_t i = 1; i <= root; ++i) s += x / i;
  return 2 * s - root * root;
}

// Full ordered-tuple enumeration of the lcm summand sums, exact rationals.
inline mpq_class naive_tuple_sum(dtlab::LcmKind kind, uint64_t n, uint32_t r) {
  std::vector<uint64_t> phi(n + 1);
  for (uint64_t k = 1; k <= n; ++k) phi[k] = phi_of(k);

  std::vector<uint64_t> idx(r, 1);
  mpq_class total = 0;
  if (n == 0) return total;
  while (true) {
    uint64_t m = 1;
    for (uint32_t t = 0; t < r; ++t) m = lcm2(m, idx[t]);
    uint64_t ph = phi_of(m);
    mpq_class term;
    switch (kind) {
      case dtlab::LcmKind::inv_phi_lcm:
        term = mpq_class(1, static_cast<unsigned long>(ph));
        break;
      case dtlab::LcmKind::lcm_over_phi_sq:
        term = mpq_class(mpz_class(static_cast<unsigned long>(m)),
                         mpz_class(static_cast<unsigned long>(ph)) * ph);
        break;
      case dtlab::LcmKind::inv_lcm:
        term = mpq_class(1, static_cast<unsigned long>(m));
        break;
    }
    term.canonicalize();
    total += term;
    uint32_t t = 0;
    for (; t < r; ++t) {
      if (++idx[t] <= n) break;
      idx[t] = 1;
    }
    if (t == r) break;
  }
  return total;
}

// #{(d_1..d_r) : d_i | m, Z <= d_i <= X, lcm = m} by direct enumeration.
inline uint64_t phi_r_brute(uint64_t m, uint32_t r, double x_hi, double z_lo) {
  std::vector<uint64_t> divs;
  for (uint64_t d = 1; d <= m; ++d)
    if (m % d == 0 && double(d) >= z_lo && double(d) <= x_hi)
      divs.push_back(d);
  if (divs.empty()) return 0;

  std::vector<size_t> idx(r, 0);
  uint64_t count = 0;
  while (true) {
    uint64_t l = 1;
    for (uint32_t t = 0; t < r; ++t) l = lcm2(l, divs[idx[t]]);
    if (l == m) ++count;
    uint32_t t = 0;
    for (; t < r; ++t) {
      if (++idx[t] < divs.size()) break;
      idx[t] = 0;
    }
    if (t == r) break;
  }
  return count;
}

}  // namespace oracle
