#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "dtlab/errors.hpp"

namespace dtlab {

struct PrimePower {
  uint64_t p;
  uint32_t e;
};

// Canonical factorization: primes strictly increasing, all exponents >= 1.
// An empty factor list represents 1.
struct Factorization {
  std::vector<PrimePower> factors;
};

uint64_t value_of(const Factorization& f);
uint64_t divisor_count(const Factorization& f);      // prod (e_i + 1)
uint64_t euler_phi(const Factorization& f);          // prod p^{e-1}(p-1)
uint64_t mu_sign(const Factorization& f);            // |mu|; 1 iff squarefree
int moebius(const Factorization& f);                 // mu(n)
Factorization merge_lcm(const Factorization& a, const Factorization& b);

// Smallest-prime-factor sieve over [2, limit].  spf(n) = least prime dividing n,
// so repeated division by spf yields the factorization in ascending prime order.
class FactorSieve {
 public:
  static constexpr uint32_t kDefaultLimit = 2'000'000;
  static constexpr uint32_t kMaxLimit = 1u << 28;

  explicit FactorSieve(uint32_t limit);

  uint32_t limit() const { return limit_; }
  uint32_t spf(uint32_t n) const;
  bool is_prime(uint32_t n) const;

  Factorization factorize(uint64_t n) const;           // 1 <= n <= limit
  uint64_t divisor_count_of(uint64_t n) const;
  uint64_t euler_phi_of(uint64_t n) const;
  uint32_t largest_prime_factor(uint32_t m) const;     // q(m), m >= 2
  bool is_smooth(uint64_t m, double y) const;          // q(m) <= y; q(1) = 1

  const std::vector<uint32_t>& primes() const { return primes_; }
  std::vector<uint32_t> primes_up_to(double x) const;
  uint64_t prime_count(double x) const;                // pi(x)

 private:
  uint32_t limit_;
  std::vector<uint32_t> spf_;
  std::vector<uint32_t> primes_;
};

FactorSieve build_factor_sieve(uint32_t limit = FactorSieve::kDefaultLimit);

// lcm of a non-empty list.  The u64 form throws OverflowError when the value
// leaves 64 bits; the mpz form is exact for any input.
uint64_t lcm_many_u64(std::span<const uint64_t> values);
mpz_class lcm_many_mpz(std::span<const uint64_t> values);

}  // namespace dtlab
