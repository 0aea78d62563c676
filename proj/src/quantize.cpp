#include "pcadmm/quantize.hpp"

#include <cmath>
#include <stdexcept>

namespace pcadmm {

static void check_spec(const QuantSpec& s) {
  if (!std::isfinite(s.z_min) || !std::isfinite(s.z_max) || s.z_max <= s.z_min)
    throw std::invalid_argument("quantization window is empty or non-finite");
  // Past 2^53 the resolution outruns the double mantissa and the fine
  // quantizer would silently lose whole steps.
  if (!(s.delta >= 1.0) || s.delta > 9.0e15)
    throw std::invalid_argument("delta outside [1, 9e15]");
}

static double clamp_in(double v, const QuantSpec& s, ClampStats* clamps) {
  if (!std::isfinite(v))
    throw std::invalid_argument("non-finite value into quantizer");
  if (v < s.z_min) {
    if (clamps) clamps->low++;
    return s.z_min;
  }
  if (v > s.z_max) {
    if (clamps) clamps->high++;
    return s.z_max;
  }
  return v;
}

u64 gamma2(double v, const QuantSpec& s, ClampStats* clamps) {
  check_spec(s);
  double t = s.delta * ((clamp_in(v, s, clamps) - s.z_min) / s.range());
  return (u64)std::round(t);  // round() is the half-away-from-zero form
}

u128 gamma1(double v, const QuantSpec& s, ClampStats* clamps) {
  check_spec(s);
  double d = (clamp_in(v, s, clamps) - s.z_min) / (s.range() * s.range());
  return (u128)std::round(s.delta * s.delta * d);
}

double degamma2(u64 q, const QuantSpec& s) {
  return s.z_min + (double)q * (s.range() / s.delta);
}

double degamma1(u128 q, const QuantSpec& s) {
  double step = s.range() / s.delta;
  return s.z_min + (double)q * (step * step);
}

std::vector<u64> gamma2_vec(const std::vector<double>& v, const QuantSpec& s,
                            ClampStats* clamps) {
  std::vector<u64> out(v.size());
  for (size_t i = 0; i < v.size(); i++) out[i] = gamma2(v[i], s, clamps);
  return out;
}

std::vector<u128> gamma1_vec(const std::vector<double>& v, const QuantSpec& s,
                             ClampStats* clamps) {
  std::vector<u128> out(v.size());
  for (size_t i = 0; i < v.size(); i++) out[i] = gamma1(v[i], s, clamps);
  return out;
}

std::vector<u128> combined_quantized_update(
    const std::vector<u128>& q_alpha, const std::vector<std::vector<u64>>& q_b,
    const std::vector<u64>& q_z, const std::vector<u64>& q_negv) {
  size_t rows = q_alpha.size(), cols = q_z.size();
  if (q_b.size() != rows || q_negv.size() != cols)
    throw std::invalid_argument("combined update size mismatch");
  std::vector<u128> out(rows);
  for (size_t i = 0; i < rows; i++) {
    if (q_b[i].size() != cols)
      throw std::invalid_argument("combined update row width");
    u128 acc = q_alpha[i];
    for (size_t j = 0; j < cols; j++)
      acc += (u128)q_b[i][j] * ((u128)q_z[j] + (u128)q_negv[j]);
    out[i] = acc;
  }
  return out;
}

std::vector<double> inverse_quantize_x(const std::vector<u128>& q,
                                       const std::vector<u64>& q_b_rowsum,
                                       const std::vector<u64>& q_z,
                                       const std::vector<u64>& q_negv,
                                       const QuantSpec& s) {
  check_spec(s);
  size_t rows = q.size(), cols = q_z.size();
  if (q_b_rowsum.size() != rows || q_negv.size() != cols)
    throw std::invalid_argument("inverse quantization size mismatch");
  double step = s.range() / s.delta;
  double step2 = step * step;

  // sum_j of the dequantized (z_j - v_j) = 2 z_min + step (g2(z) + g2(-v)).
  double sum_zv = 0.0;
  for (size_t j = 0; j < cols; j++)
    sum_zv += 2.0 * s.z_min + step * ((double)q_z[j] + (double)q_negv[j]);

  // Expanding the combined integer against the affine map leaves the three
  // correction terms below; everything is in dequantized-surrogate space so
  // lattice inputs come back exactly.
  std::vector<double> out(rows);
  for (size_t i = 0; i < rows; i++) {
    double rowsum_b = (double)cols * s.z_min + step * (double)q_b_rowsum[i];
    out[i] = (double)q[i] * step2 +
             s.z_min * (1.0 + 2.0 * rowsum_b + sum_zv) -
             2.0 * s.z_min * s.z_min * (double)cols;
  }
  return out;
}

QuantSpec widen_bounds(double lo, double hi, double margin, double delta) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw std::invalid_argument("bad value extremes");
  if (margin < 1.0) throw std::invalid_argument("margin below 1");
  if (hi - lo < 1e-12) {  // constant signal, give it unit width first
    lo -= 0.5;
    hi += 0.5;
  }
  double pad = (margin - 1.0) * (hi - lo) / 2.0;
  QuantSpec s;
  s.z_min = lo - pad;
  s.z_max = hi + pad;
  s.delta = delta;
  check_spec(s);
  return s;
}

}  // namespace pcadmm
