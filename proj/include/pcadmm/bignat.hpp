#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcadmm {

using u32 = uint32_t;
using u64 = uint64_t;
using u128 = unsigned __int128;

// Arbitrary-size natural number. Little-endian 64-bit limbs, canonical form:
// no high zero limbs, zero is the empty vector. This packed representation is
// the general-arithmetic workhorse (key generation, CRT bookkeeping, the fast
// modular-exponentiation path). The coefficient representation used by the FFT
// multiply lane lives in coeffrep.hpp and converts losslessly to and from this.
class BigNat {
public:
  BigNat() = default;
  explicit BigNat(u64 v);

  static BigNat from_u128(u128 v);
  static BigNat from_limbs(std::vector<u64> limbs);  // normalizes
  static BigNat from_decimal(const std::string& s);  // throws on non-digits
  static BigNat from_bytes_be(const uint8_t* data, size_t len);

  const std::vector<u64>& limbs() const { return limbs_; }
  bool is_zero() const { return limbs_.empty(); }
  bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1); }
  size_t bit_length() const;
  bool bit(size_t i) const;

  u64 to_u64() const;    // requires bit_length() <= 64
  u128 to_u128() const;  // requires bit_length() <= 128
  double to_double() const;
  std::string to_decimal() const;
  std::vector<uint8_t> to_bytes_be() const;  // minimal big-endian magnitude

  friend int cmp(const BigNat& a, const BigNat& b);
  bool operator==(const BigNat& o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigNat& o) const { return limbs_ != o.limbs_; }
  bool operator<(const BigNat& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const BigNat& o) const { return cmp(*this, o) <= 0; }
  bool operator>(const BigNat& o) const { return cmp(*this, o) > 0; }
  bool operator>=(const BigNat& o) const { return cmp(*this, o) >= 0; }

  friend BigNat operator+(const BigNat& a, const BigNat& b);
  friend BigNat operator-(const BigNat& a, const BigNat& b);  // requires a >= b
  friend BigNat operator*(const BigNat& a, const BigNat& b);  // schoolbook
  friend BigNat operator<<(const BigNat& a, size_t bits);
  friend BigNat operator>>(const BigNat& a, size_t bits);

  BigNat& operator+=(const BigNat& o) { return *this = *this + o; }
  BigNat& operator-=(const BigNat& o) { return *this = *this - o; }

private:
  void normalize();
  std::vector<u64> limbs_;
};

struct DivModResult {
  BigNat quot;
  BigNat rem;
};

// Long division (Knuth algorithm D on 64-bit limbs). Throws on zero divisor.
DivModResult divmod(const BigNat& a, const BigNat& b);
BigNat mod(const BigNat& a, const BigNat& m);

BigNat gcd(BigNat a, BigNat b);
BigNat lcm(const BigNat& a, const BigNat& b);

// Inverse of a modulo m, if gcd(a, m) == 1.
std::optional<BigNat> mod_inverse(const BigNat& a, const BigNat& m);

// Word-level Barrett context for a fixed modulus: nu = floor(2^(128k) / m)
// with k = limb count of m. reduce() handles any a < 2^(128k), i.e. anything
// up to a product of two reduced residues.
struct WordBarrett {
  BigNat m;
  size_t k = 0;
  BigNat nu;

  static WordBarrett make(const BigNat& m);
  BigNat reduce(const BigNat& a) const;
  BigNat mul_mod(const BigNat& a, const BigNat& b) const;
};

// 2^w-ary fixed-window exponentiation over a Barrett context. This is the
// production path; the coefficient-lane mod_exp in modexp.hpp is the
// FFT-decomposed variant and the two are equivalence-tested.
BigNat pow_mod(const BigNat& base, const BigNat& exp, const WordBarrett& ctx);
BigNat pow_mod(const BigNat& base, const BigNat& exp, const BigNat& m);

// Wire encoding shared by the transport framing and key files: a 4-byte
// big-endian byte count, then the minimal big-endian magnitude.
void wire_put(std::vector<uint8_t>& out, const BigNat& v);
// Reads one encoded value starting at `off` and advances it. Throws
// std::runtime_error on truncation.
BigNat wire_get(const std::vector<uint8_t>& data, size_t& off);

// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
// needed so that runs are reproducible from a single seed across platforms;
// std::uniform_int_distribution is implementation-defined and avoided.
struct Rng {
  u64 state;
  explicit Rng(u64 seed) : state(seed) {}
  u64 next();
  u64 below(u64 bound);          // uniform in [0, bound), bound > 0
  double unit();                 // uniform in [0, 1)
  double gaussian();             // standard normal (Box-Muller)
};

BigNat random_bits(Rng& rng, size_t bits);          // uniform in [0, 2^bits)
BigNat random_below(Rng& rng, const BigNat& bound); // uniform in [0, bound)

// Miller-Rabin with `rounds` random bases (spec default 40).
bool is_probable_prime(const BigNat& n, Rng& rng, int rounds = 40);

// Random prime with exactly `bits` bits (top bit set).
BigNat random_prime(Rng& rng, size_t bits, int mr_rounds = 40);

}  // namespace pcadmm
