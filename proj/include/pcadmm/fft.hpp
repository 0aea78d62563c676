#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcadmm/coeffrep.hpp"

namespace pcadmm {

// Raised when a convolution coefficient lands too far from an integer
// (residue above the configured threshold, 0.25 by default). Callers fall
// back to schoolbook_mul; see checked_mul in modexp.hpp.
struct PrecisionFault : std::runtime_error {
  double residue;
  explicit PrecisionFault(double r)
      : std::runtime_error("fft precision fault"), residue(r) {}
};

struct Cpx {
  double re = 0, im = 0;
};

// Radix-2 iterative transform of a fixed power-of-two length with
// precomputed twiddles (xi^k = e^(-2*pi*i*k/L)) and a bit-reversal table.
struct FftPlan {
  size_t length = 0;
  std::vector<Cpx> twiddle;  // xi^k for k < length/2
  std::vector<u32> bitrev;

  static FftPlan make(size_t length);  // length must be a power of two >= 2
  void forward(std::vector<Cpx>& a) const;
  void inverse(std::vector<Cpx>& a) const;
};

// Forward transform of a digit string, zero-padded to the plan length. The
// modular-reduction path caches these for its fixed operands so repeated
// multiplies against the same value skip one transform each.
std::vector<Cpx> fft_forward_digits(const CoeffVec& a, const FftPlan& plan);

// Multiply a digit string against a cached spectrum: one forward transform,
// a pointwise product, one inverse, then per-coefficient rounding with the
// residue check and carry normalization back into base digits. The caller
// must ensure the digit counts of both operands fit the plan together.
CoeffVec fft_mul_spectrum(const CoeffVec& a, const std::vector<Cpx>& spec_b,
                          const FftPlan& plan, double fault_threshold = 0.25);

// Convolution multiply of two digit strings (three transforms total).
// Throws PrecisionFault when the rounding residue is exceeded and
// std::invalid_argument on base or length mismatches.
CoeffVec fft_mul(const CoeffVec& a, const CoeffVec& b, const FftPlan& plan,
                 double fault_threshold = 0.25);

}  // namespace pcadmm
