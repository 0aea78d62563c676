#pragma once

#include <cstdint>
#include <vector>

#include "pcadmm/admm.hpp"
#include "pcadmm/paillier.hpp"

namespace pcadmm {

// Hard ceiling on one frame. A desk-scale session moves ciphertext vectors
// of a few hundred elements; anything near this limit is a corrupt length
// field, not a real message.
constexpr size_t kFrameCap = (size_t)256 << 20;

enum class MsgType : uint8_t {
  session_init = 1,    // master -> edge: session parameters and key material
  node_share = 2,      // edge -> master: block shape and quantized row sums
  enc_state = 3,       // master -> edge: encrypted z and -v
  enc_update = 4,      // edge -> master: combined encrypted update
  obf_exponents = 5,   // master -> edge: masked exponents for delegation
  delegated_pows = 6,  // edge -> master: finished p^2-side powers
  shutdown = 7,        // master -> edge: session over
};

// Fixed header on every frame: 4-byte big-endian length of everything after
// the length field, then type, session id, iteration.
struct Envelope {
  MsgType type = MsgType::shutdown;
  uint16_t session = 0;
  u32 iteration = 0;
  std::vector<uint8_t> payload;
};

// The encoded form includes the length prefix, so a frame is self-delimiting
// on a byte stream. Throws on frames past kFrameCap.
std::vector<uint8_t> encode_envelope(const Envelope& e);
Envelope decode_envelope(const std::vector<uint8_t>& frame);

// Big-endian field codecs. All getters advance `off` and throw
// std::runtime_error on truncation.
void put_u16(std::vector<uint8_t>& out, uint16_t v);
void put_u32(std::vector<uint8_t>& out, u32 v);
void put_u64(std::vector<uint8_t>& out, u64 v);
uint16_t get_u16(const std::vector<uint8_t>& d, size_t& off);
u32 get_u32(const std::vector<uint8_t>& d, size_t& off);
u64 get_u64(const std::vector<uint8_t>& d, size_t& off);

// IEEE-754 bit pattern, big-endian. Non-finite values are rejected in both
// directions: a NaN that crosses the wire would poison every downstream
// solve without a trace.
void put_f64(std::vector<uint8_t>& out, double v);
double get_f64(const std::vector<uint8_t>& d, size_t& off);

void put_vec_f64(std::vector<uint8_t>& out, const Vec& v);
Vec get_vec_f64(const std::vector<uint8_t>& d, size_t& off);
void put_mat_f64(std::vector<uint8_t>& out, const Mat& m);  // row-major
Mat get_mat_f64(const std::vector<uint8_t>& d, size_t& off);

void put_vec_u64(std::vector<uint8_t>& out, const std::vector<u64>& v);
std::vector<u64> get_vec_u64(const std::vector<uint8_t>& d, size_t& off);

void put_bignat_vec(std::vector<uint8_t>& out, const std::vector<BigNat>& v);
std::vector<BigNat> get_bignat_vec(const std::vector<uint8_t>& d, size_t& off);

void put_cipher_vec(std::vector<uint8_t>& out, const std::vector<Ciphertext>& v);
std::vector<Ciphertext> get_cipher_vec(const std::vector<uint8_t>& d,
                                       size_t& off);

}  // namespace pcadmm
