#include "dtlab/factor_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dtlab {

uint64_t value_of(const Factorization& f) {
  uint64_t v = 1;
  for (const auto& [p, e] : f.factors)
    for (uint32_t i = 0; i < e; ++i) v *= p;
  return v;
}

uint64_t divisor_count(const Factorization& f) {
  uint64_t d = 1;
  for (const auto& [p, e] : f.factors) d *= e + 1;
  return d;
}

uint64_t euler_phi(const Factorization& f) {
  uint64_t v = 1;
  for (const auto& [p, e] : f.factors) {
    v *= p - 1;
    for (uint32_t i = 1; i < e; ++i) v *= p;
  }
  return v;
}

uint64_t mu_sign(const Factorization& f) {
  for (const auto& pp : f.factors)
    if (pp.e > 1) return 0;
  return 1;
}

int moebius(const Factorization& f) {
  if (mu_sign(f) == 0) return 0;
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

Factorization merge_lcm(const Factorization& a, const Factorization& b) {
  Factorization out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    if (a.factors[i].p < b.factors[j].p) {
      out.factors.push_back(a.factors[i++]);
    } else if (a.factors[i].p > b.factors[j].p) {
      out.factors.push_back(b.factors[j++]);
    } else {
      out.factors.push_back(
          {a.factors[i].p, std::max(a.factors[i].e, b.factors[j].e)});
      ++i, ++j;
    }
  }
  for (; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i]);
  for (; j < b.factors.size(); ++j) out.factors.push_back(b.factors[j]);
  return out;
}

FactorSieve::FactorSieve(uint32_t limit) : limit_(limit) {
  if (limit < 2) throw ConfigError("sieve limit must be at least 2");
  if (limit > kMaxLimit) throw BudgetError("sieve limit exceeds ceiling");
  spf_.assign(size_t(limit) + 1, 0);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      primes_.push_back(uint32_t(i));
      for (uint64_t j = i; j <= limit; j += i)
        if (spf_[j] == 0) spf_[j] = uint32_t(i);
    }
  }
}

uint32_t FactorSieve::spf(uint32_t n) const {
  if (n < 2 || n > limit_) throw ConfigError("spf: argument out of sieve range");
  return spf_[n];
}

bool FactorSieve::is_prime(uint32_t n) const {
  if (n < 2 || n > limit_) return false;
  return spf_[n] == n;
}

Factorization FactorSieve::factorize(uint64_t n) const {
  if (n < 1 || n > limit_) throw ConfigError("factorize: argument out of sieve range");
  Factorization f;
  uint32_t m = uint32_t(n);
  while (m > 1) {
    uint32_t p = spf_[m];
    uint32_t e = 0;
    while (m % p == 0) m /= p, ++e;
    f.factors.push_back({p, e});
  }
  return f;
}

uint64_t FactorSieve::divisor_count_of(uint64_t n) const {
  return divisor_count(factorize(n));
}

uint64_t FactorSieve::euler_phi_of(uint64_t n) const {
  return euler_phi(factorize(n));
}

uint32_t FactorSieve::largest_prime_factor(uint32_t m) const {
  if (m < 2 || m > limit_)
    throw ConfigError("largest_prime_factor: argument out of sieve range");
  uint32_t q = 1;
  while (m > 1) {
    uint32_t p = spf_[m];
    q = std::max(q, p);
    while (m % p == 0) m /= p;
  }
  return q;
}

bool FactorSieve::is_smooth(uint64_t m, double y) const {
  if (m < 1 || m > limit_) throw ConfigError("is_smooth: argument out of sieve range");
  if (m == 1) return true;
  return double(largest_prime_factor(uint32_t(m))) <= y;
}

namespace {
// Index of the first prime exceeding the real bound x.
size_t upper_index(const std::vector<uint32_t>& primes, double x) {
  return size_t(std::upper_bound(primes.begin(), primes.end(), x,
                                 [](double bound, uint32_t p) {
                                   return bound < double(p);
                                 }) -
                primes.begin());
}
}  // namespace

std::vector<uint32_t> FactorSieve::primes_up_to(double x) const {
  if (x > double(limit_)) throw ConfigError("primes_up_to: bound exceeds sieve range");
  return {primes_.begin(), primes_.begin() + upper_index(primes_, x)};
}

uint64_t FactorSieve::prime_count(double x) const {
  if (x > double(limit_)) throw ConfigError("prime_count: bound exceeds sieve range");
  return upper_index(primes_, x);
}

FactorSieve build_factor_sieve(uint32_t limit) { return FactorSieve(limit); }

uint64_t lcm_many_u64(std::span<const uint64_t> values) {
  if (values.empty()) throw ConfigError("lcm_many: empty list");
  uint64_t l = 1;
  for (uint64_t v : values) {
    if (v == 0) throw ConfigError("lcm_many: zero operand");
    uint64_t g = std::gcd(l, v);
    unsigned __int128 t = (unsigned __int128)(l / g) * v;
    if (t > ~uint64_t(0)) throw OverflowError("lcm_many: 64-bit overflow");
    l = uint64_t(t);
  }
  return l;
}

mpz_class lcm_many_mpz(std::span<const uint64_t> values) {
  if (values.empty()) throw ConfigError("lcm_many: empty list");
  mpz_class l = 1;
  for (uint64_t v : values) {
    if (v == 0) throw ConfigError("lcm_many: zero operand");
    mpz_class z = mpz_class(static_cast<unsigned long>(v));
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.get_mpz_t());
  }
  return l;
}

}  // namespace dtlab
