#include "dtlab/bigfactor.hpp"

#include <algorithm>
#include <numeric>

#include "dtlab/errors.hpp"

namespace dtlab {

uint64_t divisor_count(const ZFactorization& f) {
  uint64_t d = 1;
  for (const auto& [p, e] : f.factors) d *= e + 1;
  return d;
}

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // These twelve bases decide primality for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

u64 pollard_brent_u64(u64 n) {
  if (n % 2 == 0) return 2;
  if (n % 3 == 0) return 3;
  // Brent cycle detection on x -> x^2 + c mod n with batched gcd; c advances
  // deterministically on failure.
  for (u64 c = 1;; ++c) {
    u64 x = 2, ys = 0, q = 1, g = 1;
    u64 y = 2, r = 1;
    const u64 m = 128;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        u64 lim = std::min(m, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time to split the batched gcd.
      g = 1;
      while (g == 1) {
        ys = (mulmod(ys, ys, n) + c) % n;
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

namespace {

void factor_u64_into(u64 n, std::vector<mpz_class>& primes_out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes_out.emplace_back(static_cast<unsigned long>(n));
    return;
  }
  u64 d = pollard_brent_u64(n);
  factor_u64_into(d, primes_out);
  factor_u64_into(n / d, primes_out);
}

// Brent rho over mpz with the same deterministic schedule; returns a
// nontrivial factor or nullopt once the iteration budget is spent.
std::optional<mpz_class> pollard_brent_mpz(const mpz_class& n, u64 budget) {
  u64 spent = 0;
  for (unsigned long c = 1; spent < budget; ++c) {
    mpz_class x = 2, y = 2, ys = 0, q = 1, g = 1, diff;
    u64 r = 1;
    const u64 m = 128;
    while (g == 1 && spent < budget) {
      x = y;
      for (u64 i = 0; i < r; ++i) {
        y = (y * y + c) % n;
      }
      spent += r;
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        u64 lim = std::min(m, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          diff = x > y ? x - y : y - x;
          q = q * diff % n;
        }
        spent += lim;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      r *= 2;
    }
    if (g == 1) return std::nullopt;  // budget ran out mid-cycle
    if (g == n) {
      g = 1;
      while (g == 1 && spent < budget) {
        ys = (ys * ys + c) % n;
        diff = x > ys ? x - ys : ys - x;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        ++spent;
      }
    }
    if (g != 1 && g != n) return g;
  }
  return std::nullopt;
}

bool is_prime_mpz(const mpz_class& n) {
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(n.get_ui());
  return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

// Splits n completely; false when the rho budget dies on some cofactor.
bool factor_mpz_into(const mpz_class& n, u64 budget,
                     std::vector<mpz_class>& primes_out) {
  if (n == 1) return true;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    factor_u64_into(n.get_ui(), primes_out);
    return true;
  }
  if (is_prime_mpz(n)) {
    primes_out.push_back(n);
    return true;
  }
  auto d = pollard_brent_mpz(n, budget);
  if (!d) return false;
  return factor_mpz_into(*d, budget, primes_out) &&
         factor_mpz_into(n / *d, budget, primes_out);
}

}  // namespace

BigFactorizer::BigFactorizer(const FactorSieve& sieve, Options opts)
    : sieve_(sieve), opts_(opts) {}

std::optional<ZFactorization> BigFactorizer::factor(const mpz_class& n) const {
  if (sgn(n) <= 0) throw ConfigError("BigFactorizer: argument must be positive");

  std::vector<mpz_class> primes;
  mpz_class c = n;

  for (uint32_t p : sieve_.primes()) {
    if (c == 1) break;
    if (mpz_cmp_ui(c.get_mpz_t(), u64(p) * p) < 0) break;  // cofactor is prime
    while (mpz_divisible_ui_p(c.get_mpz_t(), p)) {
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p);
      primes.emplace_back(static_cast<unsigned long>(p));
    }
  }

  if (c != 1 && !factor_mpz_into(c, opts_.rho_iteration_budget, primes))
    return std::nullopt;

  std::sort(primes.begin(), primes.end());
  ZFactorization out;
  for (const auto& p : primes) {
    if (!out.factors.empty() && out.factors.back().first == p)
      ++out.factors.back().second;
    else
      out.factors.emplace_back(p, 1);
  }
  return out;
}

}  // namespace dtlab
