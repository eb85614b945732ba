#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace dtlab {

// Dense power series with integer coefficients; index i holds the q^i term.
using Series = std::vector<mpz_class>;

// Schoolbook product truncated to out_len terms.  O(|a| |b|); the reference
// path for small operands and for cross-checking the packed path.
Series naive_multiply(std::span<const mpz_class> a, std::span<const mpz_class> b,
                      size_t out_len);

// Kronecker substitution: evaluate both series at 2^S for a slot width S wide
// enough that product coefficients cannot interfere, multiply once with GMP,
// then read the coefficients back out of the digits.  Exact for signed input.
Series kronecker_multiply(std::span<const mpz_class> a,
                          std::span<const mpz_class> b, size_t out_len);

// Dispatches between the two products on operand size.
Series multiply(std::span<const mpz_class> a, std::span<const mpz_class> b,
                size_t out_len);
Series square(std::span<const mpz_class> a, size_t out_len);

}  // namespace dtlab
