#pragma once

#include <atomic>
#include <vector>

#include "pcadmm/modexp.hpp"

namespace pcadmm {

// Which big-integer lane runs the modular arithmetic. packed is the fast
// word-level path used by default; coeff_fft routes every multiply through
// the coefficient-representation FFT pipeline (the decomposed form that maps
// onto data-parallel hardware). The two are equivalence-tested.
enum class Engine { packed, coeff_fft };

enum class GMode { binomial, random_g };  // g = n + 1 vs a sampled generator

// One modulus behind one call surface, either lane.
struct ModArith {
  Engine engine = Engine::packed;
  BigNat m;
  WordBarrett word;
  BarrettCtx coeff;  // populated only for coeff_fft

  static ModArith make(const BigNat& m, Engine engine);
  BigNat mul(const BigNat& a, const BigNat& b) const;
  BigNat pow(const BigNat& base, const BigNat& e) const;
};

struct PublicKey {
  BigNat n, n2, g;
  size_t key_bits = 0;
  bool binomial_g = true;  // g == n + 1: g^m collapses to 1 + mn mod n^2
};

struct PrivateKey {
  BigNat p, q;
  BigNat epsilon;  // lcm(p-1, q-1)
  BigNat mu;       // (L(g^epsilon mod n^2))^-1 mod n
};

// Working set for the split paths: everything is derived from (p, q, g) once
// at key creation. The reduced exponents are cached because every split
// encryption and decryption would otherwise recompute the same divmods.
struct CrtContext {
  BigNat p2, q2;
  BigNat g_p2, g_q2;      // g mod p^2, g mod q^2
  BigNat phi_p2, phi_q2;  // p(p-1), q(q-1)
  BigNat p2_inv_q2;       // (p^2)^-1 mod q^2, Bezout recombination factor
  BigNat n_mod_phi_p2, n_mod_phi_q2;
  BigNat eps_mod_phi_p2, eps_mod_phi_q2;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey prv;
  CrtContext crt;
};

// The only private-side material an edge node ever receives: enough to do
// delegated p^2-side work, nothing about the q side. Note that holding
// p^2 trivially reveals p; the delegation trades that exposure for offloaded
// master work by design, and the protocol documents it.
struct CrtShare {
  BigNat p2, phi_p2;
};

// value < n^2 plus a running upper bound on the plaintext bit length under
// the homomorphic history, so the accumulation-overflow argument is checked
// at runtime instead of assumed.
struct Ciphertext {
  BigNat value;
  u32 plain_bits = 0;
};

// Precomputed r^n residues for the pooled randomness mode: reusing a factor
// skips the exponentiation entirely (encryption becomes one multiply).
struct RnFactor {
  BigNat r;
  BigNat full;            // r^n mod n^2
  BigNat half_p2, half_q2;  // r^(n mod phi) per side; empty without private key
};

struct OpCount {
  u64 pow_full = 0;  // exponentiations modulo n^2
  u64 pow_half = 0;  // exponentiations modulo p^2 or q^2
};

KeyPair keygen(Rng& rng, size_t key_bits, GMode gmode = GMode::binomial);
// Test hook: build a key pair from given primes (p=5, q=7 makes every
// plaintext in [0,35) exhaustively checkable by hand).
KeyPair keypair_from_primes(const BigNat& p, const BigNat& q,
                            GMode gmode = GMode::binomial, u64 g_seed = 1);

CrtShare crt_share(const KeyPair& keys);

// Versioned binary key record (public and private parts together; the file
// is a local secret).
std::vector<uint8_t> serialize_keypair(const KeyPair& keys);
KeyPair parse_keypair(const std::vector<uint8_t>& bytes);

// A key plus the arithmetic contexts and operation counters of one
// protocol role. Non-copyable: counters identify the role that did the work.
class Paillier {
public:
  Paillier(PublicKey pub, Engine engine = Engine::packed);
  Paillier(const KeyPair& keys, Engine engine = Engine::packed);
  Paillier(const Paillier&) = delete;
  Paillier& operator=(const Paillier&) = delete;

  const PublicKey& pub() const { return pub_; }
  bool has_private() const { return has_prv_; }
  const PrivateKey& prv() const;
  const CrtContext& crt() const;
  Engine engine() const { return engine_; }

  OpCount counters() const;
  void reset_counters();

  BigNat sample_r(Rng& rng) const;  // uniform in [1, n), coprime to n

  Ciphertext encrypt(const BigNat& m, Rng& rng);
  Ciphertext encrypt_with_r(const BigNat& m, const BigNat& r);
  Ciphertext crt_encrypt(const BigNat& m, Rng& rng);
  Ciphertext crt_encrypt_with_r(const BigNat& m, const BigNat& r);
  BigNat decrypt(const Ciphertext& c);
  BigNat crt_decrypt(const Ciphertext& c);

  RnFactor make_rn_factor(const BigNat& r);
  Ciphertext encrypt_with_factor(const BigNat& m, const RnFactor& f);
  Ciphertext crt_encrypt_with_factor(const BigNat& m, const RnFactor& f);

  // Master-side completion of a split encryption: the p^2-side power of g
  // was computed remotely (from an obfuscated exponent), this adds the
  // q^2-side g power plus both r^n halves and recombines.
  Ciphertext finish_split_encrypt(const BigNat& m, const BigNat& p2_g_power,
                                  const BigNat& r);
  Ciphertext finish_split_encrypt_with_factor(const BigNat& m,
                                              const BigNat& p2_g_power,
                                              const RnFactor& f);

  // Counterpart for decryption: the p^2-side power of the ciphertext was
  // computed remotely, only the q^2 side is done here. One half
  // exponentiation instead of two.
  BigNat decrypt_with_half(const Ciphertext& c, const BigNat& p2_power);

  Ciphertext hom_add(const Ciphertext& a, const Ciphertext& b);
  Ciphertext hom_scalar_mul(const BigNat& k, const Ciphertext& c);

  // out_i = alpha_i + sum_j expo[i][j] * m(zv_j) on plaintexts, evaluated as
  // alpha_i * prod_j zv_j^expo[i][j] on ciphertexts with an interleaved
  // windowed multi-exponentiation (per-column power tables shared across
  // rows). Counts one full-width exponentiation per output element.
  std::vector<Ciphertext> hom_matvec(const std::vector<Ciphertext>& alpha,
                                     const std::vector<std::vector<u64>>& expo,
                                     const std::vector<Ciphertext>& zv,
                                     unsigned window = 6);

  // Element-wise vector forms; the OpenMP fan-out with randomness drawn
  // serially up front, so results are thread-count invariant.
  std::vector<Ciphertext> encrypt_vec(const std::vector<BigNat>& ms, Rng& rng,
                                      bool use_crt);
  std::vector<BigNat> decrypt_vec(const std::vector<Ciphertext>& cs,
                                  bool use_crt);

private:
  BigNat half_pow(const BigNat& base, const BigNat& e, bool p_side);
  Ciphertext combine_halves(const BigNat& cp, const BigNat& cq, u32 plain_bits) const;
  BigNat g_power_full(const BigNat& m);
  BigNat g_power_half(const BigNat& m, bool p_side);
  void check_plaintext(const BigNat& m) const;
  void bump_bits_or_throw(u32 bits) const;

  PublicKey pub_;
  bool has_prv_ = false;
  PrivateKey prv_;
  CrtContext crt_;
  Engine engine_;
  ModArith m_n2_, m_p2_, m_q2_;
  std::atomic<u64> pow_full_{0}, pow_half_{0};
};

}  // namespace pcadmm
