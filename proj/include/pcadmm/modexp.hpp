#pragma once

#include <vector>

#include "pcadmm/fft.hpp"

namespace pcadmm {

// fft multiply that falls back to the schoolbook convolution when a precision
// fault fires. Bumps *fallbacks (if given) each time the fallback is taken.
CoeffVec checked_mul(const CoeffVec& a, const CoeffVec& b, const FftPlan& plan,
                     double fault_threshold, u64* fallbacks = nullptr);

// Pick the digit base for a modulus of the given bit width. Wide moduli get
// 8-bit digits so convolution coefficients keep a fat margin inside the
// double mantissa; everything else runs 16-bit digits for fewer stages.
u32 pick_fft_base(size_t modulus_bits);

// Digit-level Barrett reduction against a fixed modulus. Holds the
// precomputed reciprocal floor(base^(2*len)/modulus) plus cached forward
// transforms of both fixed operands, so one reduce costs two spectrum
// multiplies instead of three full convolutions.
struct BarrettCtx {
  u32 base = 0;
  size_t len = 0;  // digit count of the modulus
  CoeffVec modulus;
  CoeffVec reciprocal;
  FftPlan plan;  // sized for the widest product: a (2*len) times reciprocal
  std::vector<Cpx> spec_modulus;
  std::vector<Cpx> spec_reciprocal;
  double fault_threshold = 0.25;

  // The threshold parameter exists for fault-injection tests; production
  // callers keep the default.
  static BarrettCtx make(const BigNat& modulus, u32 base,
                         double fault_threshold = 0.25);

  // Requires a to span at most 2*len digits (any product of two reduced
  // operands qualifies). At most a couple of conditional subtracts after the
  // quotient estimate.
  CoeffVec reduce(const CoeffVec& a, u64* fallbacks = nullptr) const;

  // Requires both operands already reduced.
  CoeffVec mul_mod(const CoeffVec& a, const CoeffVec& b,
                   u64* fallbacks = nullptr) const;
};

struct ModExpResult {
  CoeffVec value;
  u64 multiplies = 0;  // modular multiplies, every square included
  u64 fallbacks = 0;   // schoolbook fallbacks taken on precision faults
};

// Right-to-left binary exponentiation over a BarrettCtx: square the running
// base after every bit (the top bit included), multiply into the result on
// set bits. Multiply count is therefore at most twice the exponent bit
// length. Requires g already reduced.
ModExpResult mod_exp(const CoeffVec& g, const BigNat& e, const BarrettCtx& ctx);

// Map mod_exp over paired base/exponent lists. The parallel form fans the
// loop out with OpenMP; results match the sequential form element for
// element regardless of thread count.
std::vector<ModExpResult> sequential_mod_exp(const std::vector<CoeffVec>& bases,
                                             const std::vector<BigNat>& exps,
                                             const BarrettCtx& ctx);
std::vector<ModExpResult> parallel_mod_exp(const std::vector<CoeffVec>& bases,
                                           const std::vector<BigNat>& exps,
                                           const BarrettCtx& ctx);

}  // namespace pcadmm
