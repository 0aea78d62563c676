#include "pcadmm/modexp.hpp"

namespace pcadmm {

CoeffVec checked_mul(const CoeffVec& a, const CoeffVec& b, const FftPlan& plan,
                     double fault_threshold, u64* fallbacks) {
  try {
    return fft_mul(a, b, plan, fault_threshold);
  } catch (const PrecisionFault&) {
    if (fallbacks) (*fallbacks)++;
    return schoolbook_mul(a, b);
  }
}

u32 pick_fft_base(size_t modulus_bits) {
  return modulus_bits > 4096 ? 256 : 65536;
}

static size_t next_pow2(size_t v) {
  size_t p = 2;
  while (p < v) p <<= 1;
  return p;
}

// Spectrum multiply with the same fallback contract as checked_mul; the
// digit form of the cached operand is what the schoolbook path needs.
static CoeffVec mul_spec_checked(const CoeffVec& a, const std::vector<Cpx>& spec_b,
                                 const CoeffVec& b, const FftPlan& plan,
                                 double fault_threshold, u64* fallbacks) {
  try {
    return fft_mul_spectrum(a, spec_b, plan, fault_threshold);
  } catch (const PrecisionFault&) {
    if (fallbacks) (*fallbacks)++;
    return schoolbook_mul(a, b);
  }
}

BarrettCtx BarrettCtx::make(const BigNat& modulus, u32 base,
                            double fault_threshold) {
  if (modulus < BigNat((u64)2))
    throw std::invalid_argument("barrett modulus must be >= 2");
  if (!base_supported(base)) throw std::invalid_argument("unsupported coefficient base");
  BarrettCtx ctx;
  ctx.base = base;
  ctx.fault_threshold = fault_threshold;
  ctx.modulus = to_limbs(modulus, base);
  ctx.len = ctx.modulus.size();
  BigNat shifted = BigNat((u64)1) << (2 * ctx.len * base_bits(base));
  ctx.reciprocal = to_limbs(divmod(shifted, modulus).quot, base);
  ctx.plan = FftPlan::make(next_pow2(3 * ctx.len + 2));
  ctx.spec_modulus = fft_forward_digits(ctx.modulus, ctx.plan);
  ctx.spec_reciprocal = fft_forward_digits(ctx.reciprocal, ctx.plan);
  return ctx;
}

CoeffVec BarrettCtx::reduce(const CoeffVec& a, u64* fallbacks) const {
  if (a.base != base) throw std::invalid_argument("coefficient base mismatch");
  if (a.size() > 2 * len)
    throw std::invalid_argument("operand too wide for barrett reduce");
  if (cmp_coeff(a, modulus) < 0) return a;
  // Quotient estimate: q = (a * reciprocal) >> 2*len digits, then peel off
  // q * modulus. The estimate undershoots by at most a couple of multiples.
  CoeffVec q = shift_right_digits(
      mul_spec_checked(a, spec_reciprocal, reciprocal, plan, fault_threshold, fallbacks),
      2 * len);
  CoeffVec r = sub_coeff(
      a, mul_spec_checked(q, spec_modulus, modulus, plan, fault_threshold, fallbacks));
  int guard = 0;
  while (cmp_coeff(r, modulus) >= 0) {
    r = sub_coeff(r, modulus);
    if (++guard > 4) throw std::logic_error("barrett quotient estimate off");
  }
  return r;
}

CoeffVec BarrettCtx::mul_mod(const CoeffVec& a, const CoeffVec& b,
                             u64* fallbacks) const {
  if (cmp_coeff(a, modulus) >= 0 || cmp_coeff(b, modulus) >= 0)
    throw std::invalid_argument("mul_mod operands must be reduced");
  return reduce(checked_mul(a, b, plan, fault_threshold, fallbacks), fallbacks);
}

ModExpResult mod_exp(const CoeffVec& g, const BigNat& e, const BarrettCtx& ctx) {
  if (cmp_coeff(g, ctx.modulus) >= 0)
    throw std::invalid_argument("mod_exp base must be reduced");
  ModExpResult res;
  res.value = CoeffVec{ctx.base, {1}};
  CoeffVec t = g;
  // Scan the exponent from the low bit; the running base squares once per
  // bit, the result picks up a multiply on set bits.
  for (size_t i = 0, nbits = e.bit_length(); i < nbits; i++) {
    if (e.bit(i)) {
      res.value = ctx.mul_mod(res.value, t, &res.fallbacks);
      res.multiplies++;
    }
    t = ctx.mul_mod(t, t, &res.fallbacks);
    res.multiplies++;
  }
  return res;
}

std::vector<ModExpResult> sequential_mod_exp(const std::vector<CoeffVec>& bases,
                                             const std::vector<BigNat>& exps,
                                             const BarrettCtx& ctx) {
  if (bases.size() != exps.size())
    throw std::invalid_argument("base/exponent count mismatch");
  std::vector<ModExpResult> out(bases.size());
  for (size_t i = 0; i < bases.size(); i++) out[i] = mod_exp(bases[i], exps[i], ctx);
  return out;
}

std::vector<ModExpResult> parallel_mod_exp(const std::vector<CoeffVec>& bases,
                                           const std::vector<BigNat>& exps,
                                           const BarrettCtx& ctx) {
  if (bases.size() != exps.size())
    throw std::invalid_argument("base/exponent count mismatch");
  std::vector<ModExpResult> out(bases.size());
#pragma omp parallel for schedule(dynamic)
  for (ptrdiff_t i = 0; i < (ptrdiff_t)bases.size(); i++)
    out[i] = mod_exp(bases[i], exps[i], ctx);
  return out;
}

}  // namespace pcadmm
