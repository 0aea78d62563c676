#pragma once

#include <vector>

#include "pcadmm/bignat.hpp"

namespace pcadmm {

// Affine quantization window shared by every party in a session. All values
// entering the encrypted pipeline are mapped into [0, delta] (coarse) or
// [0, delta^2] (fine) against the same [z_min, z_max] window; one global
// window keeps the combined integer invertible by a closed form.
struct QuantSpec {
  double z_min = 0.0;
  double z_max = 0.0;
  double delta = 1e15;  // resolution: R / delta is the coarse step

  double range() const { return z_max - z_min; }
};

// Out-of-window inputs are clamped, not rejected: a handful of clamps means
// the bounds margin was tight, a flood means the prerun bounds are wrong.
// Callers surface the counts as a warning.
struct ClampStats {
  u64 low = 0, high = 0;
  u64 total() const { return low + high; }
};

// Coarse quantizer: round(delta * (v - z_min) / R), range [0, delta].
// Rounding is half away from zero. Throws on non-finite input or a
// malformed spec.
u64 gamma2(double v, const QuantSpec& s, ClampStats* clamps = nullptr);

// Fine quantizer for the offset vector: round(delta^2 * (v - z_min) / R^2),
// range [0, delta^2]. Needs 128 bits at the default resolution.
u128 gamma1(double v, const QuantSpec& s, ClampStats* clamps = nullptr);

// Dequantized surrogates: the value the integer stands for.
double degamma2(u64 q, const QuantSpec& s);
double degamma1(u128 q, const QuantSpec& s);

std::vector<u64> gamma2_vec(const std::vector<double>& v, const QuantSpec& s,
                            ClampStats* clamps = nullptr);
std::vector<u128> gamma1_vec(const std::vector<double>& v, const QuantSpec& s,
                             ClampStats* clamps = nullptr);

// The integer the encrypted path accumulates homomorphically, computed in
// plaintext: q_i = g1(alpha)_i + sum_j g2(B)_ij * (g2(z)_j + g2(-v)_j).
// Serves as the oracle for the ciphertext pipeline and as the fast path of
// the plaintext reference pipeline. Magnitudes stay under 2^128 for any
// delta <= 1e15 and row width under ~2^26.
std::vector<u128> combined_quantized_update(
    const std::vector<u128>& q_alpha, const std::vector<std::vector<u64>>& q_b,
    const std::vector<u64>& q_z, const std::vector<u64>& q_negv);

// Closed-form inverse of the combined integer. Reconstructs
//   x_i = a_i + sum_j B_ij (z_j - v_j)
// where a, B, z, v are the dequantized surrogates of the integer inputs, so
// inputs that sit exactly on the quantization lattice reconstruct exactly
// (up to double rounding). q_b_rowsum[i] = sum_j g2(B)_ij is the only piece
// of B the inverting party needs.
std::vector<double> inverse_quantize_x(const std::vector<u128>& q,
                                       const std::vector<u64>& q_b_rowsum,
                                       const std::vector<u64>& q_z,
                                       const std::vector<u64>& q_negv,
                                       const QuantSpec& s);

// Builds a session window from observed value extremes: widens [lo, hi]
// symmetrically to margin times its width (a degenerate interval is first
// padded to unit width).
QuantSpec widen_bounds(double lo, double hi, double margin, double delta);

}  // namespace pcadmm
