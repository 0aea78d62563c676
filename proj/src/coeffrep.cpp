#include "pcadmm/coeffrep.hpp"

#include <stdexcept>

namespace pcadmm {

bool base_supported(u32 base) {
  return base == 2 || base == 4 || base == 16 || base == 256 || base == 65536;
}

u32 base_bits(u32 base) {
  switch (base) {
    case 2: return 1;
    case 4: return 2;
    case 16: return 4;
    case 256: return 8;
    case 65536: return 16;
  }
  throw std::invalid_argument("unsupported coefficient base");
}

CoeffVec to_limbs(const BigNat& v, u32 base) {
  u32 bits = base_bits(base);
  CoeffVec out;
  out.base = base;
  size_t total = v.bit_length();
  size_t ndigits = (total + bits - 1) / bits;
  out.digits.resize(ndigits);
  const auto& limbs = v.limbs();
  for (size_t d = 0; d < ndigits; d++) {
    size_t bit0 = d * bits;
    size_t w = bit0 / 64, off = bit0 % 64;
    u64 chunk = limbs[w] >> off;
    if (off + bits > 64 && w + 1 < limbs.size()) chunk |= limbs[w + 1] << (64 - off);
    out.digits[d] = (u32)(chunk & (base - 1));
  }
  while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
  return out;
}

BigNat from_limbs(const CoeffVec& v) {
  u32 bits = base_bits(v.base);
  std::vector<u64> limbs((v.digits.size() * bits + 63) / 64, 0);
  for (size_t d = 0; d < v.digits.size(); d++) {
    if (v.digits[d] >= v.base) throw std::invalid_argument("digit out of base range");
    size_t bit0 = d * bits;
    size_t w = bit0 / 64, off = bit0 % 64;
    limbs[w] |= (u64)v.digits[d] << off;
    if (off + bits > 64 && w + 1 < limbs.size())
      limbs[w + 1] |= (u64)v.digits[d] >> (64 - off);
  }
  return BigNat::from_limbs(std::move(limbs));
}

int cmp_coeff(const CoeffVec& a, const CoeffVec& b) {
  if (a.digits.size() != b.digits.size())
    return a.digits.size() < b.digits.size() ? -1 : 1;
  for (size_t i = a.digits.size(); i-- > 0;) {
    if (a.digits[i] != b.digits[i]) return a.digits[i] < b.digits[i] ? -1 : 1;
  }
  return 0;
}

CoeffVec add_coeff(const CoeffVec& a, const CoeffVec& b) {
  if (a.base != b.base) throw std::invalid_argument("coefficient base mismatch");
  CoeffVec r;
  r.base = a.base;
  size_t n = std::max(a.digits.size(), b.digits.size());
  r.digits.resize(n);
  u32 carry = 0;
  for (size_t i = 0; i < n; i++) {
    u32 s = carry;
    if (i < a.digits.size()) s += a.digits[i];
    if (i < b.digits.size()) s += b.digits[i];
    r.digits[i] = s & (a.base - 1);
    carry = s >> base_bits(a.base);
  }
  if (carry) r.digits.push_back(carry);
  return r;
}

CoeffVec sub_coeff(const CoeffVec& a, const CoeffVec& b) {
  if (a.base != b.base) throw std::invalid_argument("coefficient base mismatch");
  if (cmp_coeff(a, b) < 0) throw std::underflow_error("coefficient subtraction underflow");
  CoeffVec r;
  r.base = a.base;
  r.digits.resize(a.digits.size());
  int64_t borrow = 0;
  for (size_t i = 0; i < a.digits.size(); i++) {
    int64_t d = (int64_t)a.digits[i] - borrow - (i < b.digits.size() ? b.digits[i] : 0);
    if (d < 0) {
      d += a.base;
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.digits[i] = (u32)d;
  }
  while (!r.digits.empty() && r.digits.back() == 0) r.digits.pop_back();
  return r;
}

CoeffVec shift_right_digits(const CoeffVec& a, size_t count) {
  CoeffVec r;
  r.base = a.base;
  if (count < a.digits.size())
    r.digits.assign(a.digits.begin() + count, a.digits.end());
  return r;
}

CoeffVec schoolbook_mul(const CoeffVec& a, const CoeffVec& b) {
  if (a.base != b.base) throw std::invalid_argument("coefficient base mismatch");
  CoeffVec r;
  r.base = a.base;
  if (a.is_zero() || b.is_zero()) return r;
  u32 bits = base_bits(a.base);
  u32 mask = a.base - 1;
  r.digits.assign(a.digits.size() + b.digits.size(), 0);
  for (size_t i = 0; i < a.digits.size(); i++) {
    u64 carry = 0;
    u64 ai = a.digits[i];
    for (size_t j = 0; j < b.digits.size(); j++) {
      u64 t = ai * b.digits[j] + r.digits[i + j] + carry;
      r.digits[i + j] = (u32)(t & mask);
      carry = t >> bits;
    }
    // Propagate the leftover carry (can span several digits for small bases).
    size_t pos = i + b.digits.size();
    while (carry) {
      u64 t = r.digits[pos] + carry;
      r.digits[pos] = (u32)(t & mask);
      carry = t >> bits;
      pos++;
    }
  }
  while (!r.digits.empty() && r.digits.back() == 0) r.digits.pop_back();
  return r;
}

}  // namespace pcadmm
