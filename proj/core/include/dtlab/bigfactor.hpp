#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dtlab/factor_sieve.hpp"

namespace dtlab {

// Factorization of an arbitrary-precision positive integer; primes ascending.
struct ZFactorization {
  std::vector<std::pair<mpz_class, uint32_t>> factors;
};

uint64_t divisor_count(const ZFactorization& f);

bool is_prime_u64(uint64_t n);              // deterministic Miller-Rabin
uint64_t pollard_brent_u64(uint64_t n);     // a nontrivial factor of composite n

// Staged factoring: sieve-backed trial division with early exit (cofactor 1,
// cofactor prime, cofactor below trial-bound squared), then Brent rho in
// 64-bit arithmetic while the cofactor fits, and an iteration-bounded
// arbitrary-precision Brent tail.  Deterministic: fixed polynomial sequence,
// no randomness.  Returns nullopt when the tail budget is exhausted.
class BigFactorizer {
 public:
  struct Options {
    uint64_t rho_iteration_budget = 100'000'000;
  };

  explicit BigFactorizer(const FactorSieve& sieve) : BigFactorizer(sieve, Options{}) {}
  BigFactorizer(const FactorSieve& sieve, Options opts);
  std::optional<ZFactorization> factor(const mpz_class& n) const;  // n >= 1

 private:
  const FactorSieve& sieve_;
  Options opts_;
};

}  // namespace dtlab
