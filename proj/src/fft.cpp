#include "pcadmm/fft.hpp"

#include <cmath>

namespace pcadmm {

FftPlan FftPlan::make(size_t length) {
  if (length < 2 || (length & (length - 1)) != 0)
    throw std::invalid_argument("fft length must be a power of two >= 2");
  FftPlan plan;
  plan.length = length;
  plan.twiddle.resize(length / 2);
  // Long-double trig keeps the twiddle table accurate to the last double bit
  // even at the plan sizes the 4096-bit moduli need.
  const long double step = -2.0L * 3.14159265358979323846264338327950288L / (long double)length;
  for (size_t k = 0; k < length / 2; k++) {
    long double ang = step * (long double)k;
    plan.twiddle[k].re = (double)cosl(ang);
    plan.twiddle[k].im = (double)sinl(ang);
  }
  plan.bitrev.resize(length);
  u32 bits = 0;
  while (((size_t)1 << bits) < length) bits++;
  for (size_t i = 0; i < length; i++) {
    size_t r = 0;
    for (u32 b = 0; b < bits; b++)
      if (i & ((size_t)1 << b)) r |= (size_t)1 << (bits - 1 - b);
    plan.bitrev[i] = (u32)r;
  }
  return plan;
}

static void transform(std::vector<Cpx>& a, const FftPlan& plan, bool invert) {
  const size_t n = plan.length;
  for (size_t i = 0; i < n; i++) {
    size_t j = plan.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t half = 1; half < n; half <<= 1) {
    // The table holds xi^k for k < n/2; this stage walks it with this stride.
    const size_t stride = n / (2 * half);
    for (size_t start = 0; start < n; start += 2 * half) {
      for (size_t k = 0; k < half; k++) {
        Cpx w = plan.twiddle[k * stride];
        if (invert) w.im = -w.im;
        Cpx& lo = a[start + k];
        Cpx& hi = a[start + k + half];
        double tre = hi.re * w.re - hi.im * w.im;
        double tim = hi.re * w.im + hi.im * w.re;
        hi.re = lo.re - tre;
        hi.im = lo.im - tim;
        lo.re += tre;
        lo.im += tim;
      }
    }
  }
  if (invert) {
    const double inv = 1.0 / (double)n;
    for (auto& c : a) {
      c.re *= inv;
      c.im *= inv;
    }
  }
}

void FftPlan::forward(std::vector<Cpx>& a) const {
  if (a.size() != length) throw std::invalid_argument("fft size mismatch");
  transform(a, *this, false);
}

void FftPlan::inverse(std::vector<Cpx>& a) const {
  if (a.size() != length) throw std::invalid_argument("fft size mismatch");
  transform(a, *this, true);
}

std::vector<Cpx> fft_forward_digits(const CoeffVec& a, const FftPlan& plan) {
  if (a.size() > plan.length)
    throw std::invalid_argument("fft plan too short for operand");
  std::vector<Cpx> fa(plan.length);
  for (size_t i = 0; i < a.size(); i++) fa[i].re = a.digits[i];
  plan.forward(fa);
  return fa;
}

// Round each inverse-transform coefficient to the nearest integer, check the
// residue, and fold carries down into base digits.
static CoeffVec round_and_carry(const std::vector<Cpx>& fa, u32 base,
                                double fault_threshold) {
  const u32 bits = base_bits(base);
  const u64 mask = ((u64)1 << bits) - 1;
  CoeffVec out;
  out.base = base;
  out.digits.reserve(fa.size());
  u64 carry = 0;
  for (size_t i = 0; i < fa.size(); i++) {
    double v = fa[i].re;
    double r = std::nearbyint(v);
    if (std::fabs(v - r) > fault_threshold)
      throw PrecisionFault(std::fabs(v - r));
    u64 t = carry + (u64)(long long)r;
    out.digits.push_back((u32)(t & mask));
    carry = t >> bits;
  }
  // The product is below base^L whenever the operand digit counts fit the
  // plan, so the carry out of the top position has to be zero; anything else
  // means the convolution went bad without tripping the residue check.
  if (carry != 0) throw PrecisionFault((double)carry);
  while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
  return out;
}

CoeffVec fft_mul_spectrum(const CoeffVec& a, const std::vector<Cpx>& spec_b,
                          const FftPlan& plan, double fault_threshold) {
  if (spec_b.size() != plan.length)
    throw std::invalid_argument("spectrum length does not match plan");
  if (a.is_zero()) return CoeffVec{a.base, {}};
  std::vector<Cpx> fa = fft_forward_digits(a, plan);
  for (size_t i = 0; i < plan.length; i++) {
    double re = fa[i].re * spec_b[i].re - fa[i].im * spec_b[i].im;
    double im = fa[i].re * spec_b[i].im + fa[i].im * spec_b[i].re;
    fa[i].re = re;
    fa[i].im = im;
  }
  plan.inverse(fa);
  return round_and_carry(fa, a.base, fault_threshold);
}

CoeffVec fft_mul(const CoeffVec& a, const CoeffVec& b, const FftPlan& plan,
                 double fault_threshold) {
  if (a.base != b.base) throw std::invalid_argument("fft_mul base mismatch");
  if (a.is_zero() || b.is_zero()) return CoeffVec{a.base, {}};
  if (a.size() + b.size() > plan.length)
    throw std::invalid_argument("fft plan too short for operands");
  return fft_mul_spectrum(a, fft_forward_digits(b, plan), plan, fault_threshold);
}

}  // namespace pcadmm
