// Kronecker substitution for signed big-integer series.
//
// Packing: with slot width S bits, A = sum_i a_i 2^{iS}.  Signed coefficients
// are split as a_i = pos_i - neg_i and the two nonnegative vectors are packed
// by limb blits, so A = P - N costs one subtraction.  With
//     S >= maxbits(a) + maxbits(b) + ceil(log2(min(|a|,|b|))) + 2
// every product coefficient c_i satisfies |c_i| < 2^{S-1}, hence the base-2^S
// digits of A*B recover c_i two's-complement style: reading digit v with an
// incoming borrow-carry, v + carry >= 2^{S-1} means c_i = v + carry - 2^S and
// a carry of 1 into the next slot.  S is a multiple of 64 so slots are whole
// limbs.
#include "dtlab/series.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "dtlab/errors.hpp"

static_assert(GMP_LIMB_BITS == 64, "slot packing assumes 64-bit limbs");

namespace dtlab {

Series naive_multiply(std::span<const mpz_class> a, std::span<const mpz_class> b,
                      size_t out_len) {
  Series out(out_len);
  for (size_t i = 0; i < a.size(); ++i) {
    if (i >= out_len) break;
    if (sgn(a[i]) == 0) continue;
    size_t jmax = std::min(b.size(), out_len - i);
    for (size_t j = 0; j < jmax; ++j) {
      if (sgn(b[j]) == 0) continue;
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

namespace {

size_t max_coeff_bits(std::span<const mpz_class> v) {
  size_t bits = 0;
  for (const auto& c : v)
    if (sgn(c) != 0) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

// One sign-split packed evaluation at 2^{64*slot_words}.
mpz_class pack(std::span<const mpz_class> v, size_t slot_words) {
  std::vector<mp_limb_t> pos(v.size() * slot_words, 0);
  std::vector<mp_limb_t> neg(v.size() * slot_words, 0);
  for (size_t i = 0; i < v.size(); ++i) {
    int s = sgn(v[i]);
    if (s == 0) continue;
    const mpz_srcptr z = v[i].get_mpz_t();
    size_t n = mpz_size(z);
    std::memcpy((s > 0 ? pos : neg).data() + i * slot_words, mpz_limbs_read(z),
                n * sizeof(mp_limb_t));
  }
  mpz_class p, q;
  mpz_import(p.get_mpz_t(), pos.size(), -1, sizeof(mp_limb_t), 0, 0, pos.data());
  mpz_import(q.get_mpz_t(), neg.size(), -1, sizeof(mp_limb_t), 0, 0, neg.data());
  return p - q;
}

// Read nslots base-2^S digits of x back into signed coefficients.
Series unpack(const mpz_class& x, size_t nslots, size_t slot_words,
              size_t out_len) {
  const bool flip = sgn(x) < 0;
  std::vector<mp_limb_t> buf(nslots * slot_words + 1, 0);
  if (sgn(x) != 0) {
    size_t words = 0;
    mpz_export(buf.data(), &words, -1, sizeof(mp_limb_t), 0, 0, x.get_mpz_t());
  }

  Series out(out_len);
  std::vector<mp_limb_t> mag(slot_words);
  mp_limb_t carry = 0;
  size_t read = std::min(nslots, out_len);
  for (size_t i = 0; i < read; ++i) {
    const mp_limb_t* w = buf.data() + i * slot_words;
    std::memcpy(mag.data(), w, slot_words * sizeof(mp_limb_t));

    mp_limb_t c = carry;
    for (size_t k = 0; k < slot_words && c; ++k) {
      mag[k] += c;
      c = (mag[k] == 0) ? 1 : 0;
    }
    if (c) {  // digit was 2^S - 1 with incoming carry: coefficient 0, carry on
      carry = 1;
      continue;
    }

    bool negative = (mag[slot_words - 1] >> 63) != 0;
    carry = negative ? 1 : 0;
    if (negative) {  // magnitude = 2^S - value
      mp_limb_t borrow = 1;
      for (size_t k = 0; k < slot_words; ++k) {
        mag[k] = ~mag[k] + borrow;
        if (borrow && mag[k] != 0) borrow = 0;
      }
    }
    mpz_import(out[i].get_mpz_t(), slot_words, -1, sizeof(mp_limb_t), 0, 0,
               mag.data());
    if (negative != flip) mpz_neg(out[i].get_mpz_t(), out[i].get_mpz_t());
  }
  return out;
}

}  // namespace

Series kronecker_multiply(std::span<const mpz_class> a,
                          std::span<const mpz_class> b, size_t out_len) {
  size_t ba = max_coeff_bits(a);
  size_t bb = max_coeff_bits(b);
  if (a.empty() || b.empty() || ba == 0 || bb == 0) return Series(out_len);

  size_t min_len = std::min(a.size(), b.size());
  size_t bits = ba + bb + std::bit_width(min_len) + 2;
  size_t slot_words = (bits + 63) / 64;

  const bool squaring = a.data() == b.data() && a.size() == b.size();
  mpz_class pa = pack(a, slot_words);
  mpz_class prod;
  if (squaring) {
    mpz_mul(prod.get_mpz_t(), pa.get_mpz_t(), pa.get_mpz_t());
  } else {
    mpz_class pb = pack(b, slot_words);
    mpz_mul(prod.get_mpz_t(), pa.get_mpz_t(), pb.get_mpz_t());
  }
  return unpack(prod, a.size() + b.size() - 1, slot_words, out_len);
}

Series multiply(std::span<const mpz_class> a, std::span<const mpz_class> b,
                size_t out_len) {
  if (std::min(a.size(), b.size()) < 32 || a.size() * b.size() < 1u << 14)
    return naive_multiply(a, b, out_len);
  return kronecker_multiply(a, b, out_len);
}

Series square(std::span<const mpz_class> a, size_t out_len) {
  return multiply(a, a, out_len);
}

}  // namespace dtlab
