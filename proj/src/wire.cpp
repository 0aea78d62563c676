#include "pcadmm/wire.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace pcadmm {

static void need(const std::vector<uint8_t>& d, size_t off, size_t len) {
  if (off > d.size() || len > d.size() - off)
    throw std::runtime_error("truncated frame");
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back((uint8_t)(v >> 8));
  out.push_back((uint8_t)v);
}

void put_u32(std::vector<uint8_t>& out, u32 v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back((uint8_t)(v >> s));
}

void put_u64(std::vector<uint8_t>& out, u64 v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back((uint8_t)(v >> s));
}

uint16_t get_u16(const std::vector<uint8_t>& d, size_t& off) {
  need(d, off, 2);
  uint16_t v = (uint16_t)((d[off] << 8) | d[off + 1]);
  off += 2;
  return v;
}

u32 get_u32(const std::vector<uint8_t>& d, size_t& off) {
  need(d, off, 4);
  u32 v = 0;
  for (int i = 0; i < 4; i++) v = (v << 8) | d[off + i];
  off += 4;
  return v;
}

u64 get_u64(const std::vector<uint8_t>& d, size_t& off) {
  need(d, off, 8);
  u64 v = 0;
  for (int i = 0; i < 8; i++) v = (v << 8) | d[off + i];
  off += 8;
  return v;
}

void put_f64(std::vector<uint8_t>& out, double v) {
  if (!std::isfinite(v))
    throw std::invalid_argument("non-finite value on the wire");
  u64 bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

double get_f64(const std::vector<uint8_t>& d, size_t& off) {
  u64 bits = get_u64(d, off);
  double v;
  std::memcpy(&v, &bits, 8);
  if (!std::isfinite(v))
    throw std::runtime_error("non-finite value on the wire");
  return v;
}

void put_vec_f64(std::vector<uint8_t>& out, const Vec& v) {
  put_u32(out, (u32)v.size());
  for (Eigen::Index i = 0; i < v.size(); i++) put_f64(out, v[i]);
}

Vec get_vec_f64(const std::vector<uint8_t>& d, size_t& off) {
  u32 n = get_u32(d, off);
  need(d, off, (size_t)n * 8);
  Vec v(n);
  for (u32 i = 0; i < n; i++) v[i] = get_f64(d, off);
  return v;
}

void put_mat_f64(std::vector<uint8_t>& out, const Mat& m) {
  put_u32(out, (u32)m.rows());
  put_u32(out, (u32)m.cols());
  for (Eigen::Index i = 0; i < m.rows(); i++)
    for (Eigen::Index j = 0; j < m.cols(); j++) put_f64(out, m(i, j));
}

Mat get_mat_f64(const std::vector<uint8_t>& d, size_t& off) {
  u32 rows = get_u32(d, off);
  u32 cols = get_u32(d, off);
  if ((u64)rows * cols * 8 > kFrameCap)
    throw std::runtime_error("matrix dimensions past the frame cap");
  need(d, off, (size_t)rows * cols * 8);
  Mat m(rows, cols);
  for (u32 i = 0; i < rows; i++)
    for (u32 j = 0; j < cols; j++) m(i, j) = get_f64(d, off);
  return m;
}

void put_vec_u64(std::vector<uint8_t>& out, const std::vector<u64>& v) {
  put_u32(out, (u32)v.size());
  for (u64 x : v) put_u64(out, x);
}

std::vector<u64> get_vec_u64(const std::vector<uint8_t>& d, size_t& off) {
  u32 n = get_u32(d, off);
  need(d, off, (size_t)n * 8);
  std::vector<u64> v(n);
  for (u32 i = 0; i < n; i++) v[i] = get_u64(d, off);
  return v;
}

void put_bignat_vec(std::vector<uint8_t>& out, const std::vector<BigNat>& v) {
  put_u32(out, (u32)v.size());
  for (const BigNat& x : v) wire_put(out, x);
}

std::vector<BigNat> get_bignat_vec(const std::vector<uint8_t>& d, size_t& off) {
  u32 n = get_u32(d, off);
  std::vector<BigNat> v;
  v.reserve(n);
  for (u32 i = 0; i < n; i++) v.push_back(wire_get(d, off));
  return v;
}

void put_cipher_vec(std::vector<uint8_t>& out,
                    const std::vector<Ciphertext>& v) {
  put_u32(out, (u32)v.size());
  for (const Ciphertext& c : v) {
    wire_put(out, c.value);
    put_u32(out, c.plain_bits);
  }
}

std::vector<Ciphertext> get_cipher_vec(const std::vector<uint8_t>& d,
                                       size_t& off) {
  u32 n = get_u32(d, off);
  std::vector<Ciphertext> v;
  v.reserve(n);
  for (u32 i = 0; i < n; i++) {
    Ciphertext c;
    c.value = wire_get(d, off);
    c.plain_bits = get_u32(d, off);
    v.push_back(std::move(c));
  }
  return v;
}

std::vector<uint8_t> encode_envelope(const Envelope& e) {
  size_t body = 1 + 2 + 4 + e.payload.size();
  if (body > kFrameCap) throw std::length_error("frame past the size cap");
  std::vector<uint8_t> out;
  out.reserve(4 + body);
  put_u32(out, (u32)body);
  out.push_back((uint8_t)e.type);
  put_u16(out, e.session);
  put_u32(out, e.iteration);
  out.insert(out.end(), e.payload.begin(), e.payload.end());
  return out;
}

Envelope decode_envelope(const std::vector<uint8_t>& frame) {
  size_t off = 0;
  u32 body = get_u32(frame, off);
  if (body > kFrameCap) throw std::runtime_error("frame past the size cap");
  if (body < 7 || frame.size() - 4 != body)
    throw std::runtime_error("frame length field mismatch");
  uint8_t type = frame[off++];
  if (type < 1 || type > 7) throw std::runtime_error("unknown message type");
  Envelope e;
  e.type = (MsgType)type;
  e.session = get_u16(frame, off);
  e.iteration = get_u32(frame, off);
  e.payload.assign(frame.begin() + (ptrdiff_t)off, frame.end());
  return e;
}

}  // namespace pcadmm
