#pragma once

#include <cstdint>
#include <vector>

#include "pcadmm/bignat.hpp"

namespace pcadmm {

// Coefficient representation of a natural number: little-endian digits in a
// small power-of-two base b in {2, 4, 16, 256, 65536}. This is the form the
// FFT multiply operates on; digits are held one-per-u32 so a digit string is
// directly usable as a real coefficient vector. Normalized: all digits < b,
// no trailing zero digits, zero is the empty vector.
struct CoeffVec {
  u32 base = 0;
  std::vector<u32> digits;

  bool is_zero() const { return digits.empty(); }
  size_t size() const { return digits.size(); }
};

bool base_supported(u32 base);
u32 base_bits(u32 base);  // log2 of a supported base

// Conversions between the packed and coefficient forms. Round-trip exact.
CoeffVec to_limbs(const BigNat& v, u32 base);
BigNat from_limbs(const CoeffVec& v);

int cmp_coeff(const CoeffVec& a, const CoeffVec& b);
CoeffVec add_coeff(const CoeffVec& a, const CoeffVec& b);
CoeffVec sub_coeff(const CoeffVec& a, const CoeffVec& b);  // requires a >= b
CoeffVec shift_right_digits(const CoeffVec& a, size_t count);

// O(n*m) convolution with carry-as-you-go accumulation. Serves as the
// independent oracle for fft_mul and as the fallback when a precision fault
// is raised (digit products are < 2^32 so a u64 row carry never overflows).
CoeffVec schoolbook_mul(const CoeffVec& a, const CoeffVec& b);

}  // namespace pcadmm
