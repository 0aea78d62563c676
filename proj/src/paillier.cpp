#include "pcadmm/paillier.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace pcadmm {

ModArith ModArith::make(const BigNat& m, Engine engine) {
  ModArith a;
  a.engine = engine;
  a.m = m;
  if (engine == Engine::packed)
    a.word = WordBarrett::make(m);
  else
    a.coeff = BarrettCtx::make(m, pick_fft_base(m.bit_length()));
  return a;
}

BigNat ModArith::mul(const BigNat& a, const BigNat& b) const {
  if (engine == Engine::packed) return word.mul_mod(a, b);
  CoeffVec r = coeff.mul_mod(to_limbs(a, coeff.base), to_limbs(b, coeff.base));
  return from_limbs(r);
}

BigNat ModArith::pow(const BigNat& base, const BigNat& e) const {
  if (engine == Engine::packed) return pow_mod(base, e, word);
  BigNat b = cmp(base, m) >= 0 ? mod(base, m) : base;
  return from_limbs(mod_exp(to_limbs(b, coeff.base), e, coeff).value);
}

// L(x) = (x - 1) / n, defined only when x = 1 mod n. Anything else means the
// input was not a power of a unit and the ciphertext is garbage.
static BigNat l_function(const BigNat& x, const BigNat& n) {
  if (x.is_zero())
    throw std::runtime_error("ciphertext outside the multiplicative group");
  DivModResult d = divmod(x - BigNat(1), n);
  if (!d.rem.is_zero())
    throw std::runtime_error("ciphertext outside the multiplicative group");
  return d.quot;
}

static CrtContext make_crt(const BigNat& p, const BigNat& q, const BigNat& g,
                           const BigNat& n, const BigNat& eps) {
  CrtContext c;
  c.p2 = p * p;
  c.q2 = q * q;
  c.g_p2 = mod(g, c.p2);
  c.g_q2 = mod(g, c.q2);
  c.phi_p2 = c.p2 - p;
  c.phi_q2 = c.q2 - q;
  auto inv = mod_inverse(mod(c.p2, c.q2), c.q2);
  if (!inv) throw std::invalid_argument("p and q share a factor");
  c.p2_inv_q2 = *inv;
  c.n_mod_phi_p2 = mod(n, c.phi_p2);
  c.n_mod_phi_q2 = mod(n, c.phi_q2);
  c.eps_mod_phi_p2 = mod(eps, c.phi_p2);
  c.eps_mod_phi_q2 = mod(eps, c.phi_q2);
  return c;
}

// Shared tail of keygen and keypair_from_primes: pick g, derive mu, assemble.
static KeyPair finish_keys(const BigNat& p, const BigNat& q, GMode gmode,
                           u64 g_seed, size_t key_bits) {
  BigNat n = p * q;
  BigNat n2 = n * n;
  BigNat eps = lcm(p - BigNat(1), q - BigNat(1));

  KeyPair kp;
  kp.pub.n = n;
  kp.pub.n2 = n2;
  kp.pub.key_bits = key_bits;

  if (gmode == GMode::binomial) {
    // g = n + 1: L(g^eps mod n^2) = eps mod n, no exponentiation needed.
    kp.pub.g = n + BigNat(1);
    kp.pub.binomial_g = true;
    auto mu = mod_inverse(mod(eps, n), n);
    if (!mu) throw std::invalid_argument("lcm(p-1, q-1) shares a factor with n");
    kp.prv.mu = *mu;
  } else {
    kp.pub.binomial_g = false;
    Rng gr(g_seed);
    WordBarrett ctx = WordBarrett::make(n2);
    int budget = 256;
    while (true) {
      if (budget-- == 0) throw std::runtime_error("generator search exhausted");
      BigNat g = random_below(gr, n2);
      if (g.bit_length() < 2 || gcd(g, n) != BigNat(1)) continue;
      BigNat l = l_function(pow_mod(g, eps, ctx), n);
      auto mu = mod_inverse(l, n);
      if (!mu) continue;  // order of g too small, resample
      kp.pub.g = g;
      kp.prv.mu = *mu;
      break;
    }
  }

  kp.prv.p = p;
  kp.prv.q = q;
  kp.prv.epsilon = eps;
  kp.crt = make_crt(p, q, kp.pub.g, n, eps);
  return kp;
}

KeyPair keygen(Rng& rng, size_t key_bits, GMode gmode) {
  if (key_bits != 64 && key_bits != 1024 && key_bits != 2048 &&
      key_bits != 4096)
    throw std::invalid_argument("key_bits must be 64, 1024, 2048 or 4096");
  size_t half = key_bits / 2;
  for (int attempt = 0; attempt < 64; attempt++) {
    BigNat p = random_prime(rng, half);
    BigNat q = random_prime(rng, half);
    if (p == q) continue;
    // Keep the primes apart: |p - q| >= 2^(half - 8) blocks Fermat-style
    // factoring of n from a near-square split.
    BigNat diff = p > q ? p - q : q - p;
    if (diff.bit_length() < half - 7) continue;
    if ((p * q).bit_length() != key_bits) continue;
    return finish_keys(p, q, gmode, rng.next(), key_bits);
  }
  throw std::runtime_error("key generation attempt budget exhausted");
}

KeyPair keypair_from_primes(const BigNat& p, const BigNat& q, GMode gmode,
                            u64 g_seed) {
  if (p == q || p < BigNat(2) || q < BigNat(2))
    throw std::invalid_argument("need two distinct primes");
  return finish_keys(p, q, gmode, g_seed, (p * q).bit_length());
}

CrtShare crt_share(const KeyPair& keys) {
  return CrtShare{keys.crt.p2, keys.crt.phi_p2};
}

static void put_u32_be(std::vector<uint8_t>& out, u32 v) {
  out.push_back((uint8_t)(v >> 24));
  out.push_back((uint8_t)(v >> 16));
  out.push_back((uint8_t)(v >> 8));
  out.push_back((uint8_t)v);
}

static u32 get_u32_be(const std::vector<uint8_t>& data, size_t& off) {
  if (data.size() - off < 4 || off > data.size())
    throw std::runtime_error("truncated key record");
  u32 v = ((u32)data[off] << 24) | ((u32)data[off + 1] << 16) |
          ((u32)data[off + 2] << 8) | (u32)data[off + 3];
  off += 4;
  return v;
}

std::vector<uint8_t> serialize_keypair(const KeyPair& keys) {
  std::vector<uint8_t> out;
  out.push_back('p');
  out.push_back('k');
  out.push_back(1);  // format version
  out.push_back(keys.pub.binomial_g ? 1 : 0);
  put_u32_be(out, (u32)keys.pub.key_bits);
  wire_put(out, keys.pub.n);
  wire_put(out, keys.pub.g);
  wire_put(out, keys.prv.p);
  wire_put(out, keys.prv.q);
  wire_put(out, keys.prv.epsilon);
  wire_put(out, keys.prv.mu);
  return out;
}

KeyPair parse_keypair(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 4 || bytes[0] != 'p' || bytes[1] != 'k')
    throw std::runtime_error("not a key record");
  if (bytes[2] != 1) throw std::runtime_error("unknown key record version");
  bool binomial = bytes[3] != 0;
  size_t off = 4;
  u32 key_bits = get_u32_be(bytes, off);
  KeyPair kp;
  kp.pub.n = wire_get(bytes, off);
  kp.pub.g = wire_get(bytes, off);
  kp.prv.p = wire_get(bytes, off);
  kp.prv.q = wire_get(bytes, off);
  kp.prv.epsilon = wire_get(bytes, off);
  kp.prv.mu = wire_get(bytes, off);
  if (kp.prv.p * kp.prv.q != kp.pub.n)
    throw std::runtime_error("corrupt key record: n != p*q");
  if (binomial && kp.pub.g != kp.pub.n + BigNat(1))
    throw std::runtime_error("corrupt key record: g mismatch");
  kp.pub.n2 = kp.pub.n * kp.pub.n;
  kp.pub.key_bits = key_bits;
  kp.pub.binomial_g = binomial;
  kp.crt = make_crt(kp.prv.p, kp.prv.q, kp.pub.g, kp.pub.n, kp.prv.epsilon);
  return kp;
}

Paillier::Paillier(PublicKey pub, Engine engine) {
  pub_ = std::move(pub);
  if (pub_.n.is_zero()) throw std::invalid_argument("empty public key");
  if (pub_.n2.is_zero()) pub_.n2 = pub_.n * pub_.n;
  engine_ = engine;
  m_n2_ = ModArith::make(pub_.n2, engine_);
}

Paillier::Paillier(const KeyPair& keys, Engine engine) {
  pub_ = keys.pub;
  if (pub_.n.is_zero()) throw std::invalid_argument("empty public key");
  if (pub_.n2.is_zero()) pub_.n2 = pub_.n * pub_.n;
  prv_ = keys.prv;
  crt_ = keys.crt;
  has_prv_ = true;
  engine_ = engine;
  m_n2_ = ModArith::make(pub_.n2, engine_);
  m_p2_ = ModArith::make(crt_.p2, engine_);
  m_q2_ = ModArith::make(crt_.q2, engine_);
}

const PrivateKey& Paillier::prv() const {
  if (!has_prv_) throw std::logic_error("no private key loaded");
  return prv_;
}

const CrtContext& Paillier::crt() const {
  if (!has_prv_) throw std::logic_error("no private key loaded");
  return crt_;
}

OpCount Paillier::counters() const {
  return OpCount{pow_full_.load(), pow_half_.load()};
}

void Paillier::reset_counters() {
  pow_full_.store(0);
  pow_half_.store(0);
}

BigNat Paillier::sample_r(Rng& rng) const {
  while (true) {
    BigNat r = random_below(rng, pub_.n);
    if (r.is_zero()) continue;
    if (gcd(r, pub_.n) == BigNat(1)) return r;
  }
}

void Paillier::check_plaintext(const BigNat& m) const {
  if (m >= pub_.n) throw std::invalid_argument("plaintext not below n");
}

void Paillier::bump_bits_or_throw(u32 bits) const {
  // plain_bits is an upper bound on the accumulated plaintext; once it can
  // reach n the decryption wraps and every downstream number is silently
  // wrong, so fail loudly instead.
  if (bits >= pub_.n.bit_length())
    throw std::overflow_error("homomorphic accumulation exceeds plaintext space");
}

BigNat Paillier::g_power_full(const BigNat& m) {
  if (pub_.binomial_g) return mod(BigNat(1) + m * pub_.n, pub_.n2);
  pow_full_.fetch_add(1, std::memory_order_relaxed);
  return m_n2_.pow(pub_.g, m);
}

BigNat Paillier::g_power_half(const BigNat& m, bool p_side) {
  // The binomial collapse survives the CRT split: (1 + mn) mod p^2 is still
  // the right residue because n = 0 mod p never holds here.
  const BigNat& m2 = p_side ? crt_.p2 : crt_.q2;
  if (pub_.binomial_g) return mod(BigNat(1) + m * pub_.n, m2);
  const BigNat& g = p_side ? crt_.g_p2 : crt_.g_q2;
  const BigNat& phi = p_side ? crt_.phi_p2 : crt_.phi_q2;
  return half_pow(g, mod(m, phi), p_side);
}

// One exponentiation modulo p^2 (or q^2). The packed lane splits the
// exponent as E = u(p-1) + w: r^(p-1) lands in the 1 + pZ subgroup where
// raising to the u-th power is a single multiply via (1 + pt)^u = 1 + ptu
// mod p^2, and r^(p-1) and r^w share one squaring chain. That prices the
// call at roughly |p| squarings plus |p| multiplies instead of the 1.5|E|
// of plain square-and-multiply with |E| = 2|p|.
BigNat Paillier::half_pow(const BigNat& base, const BigNat& e, bool p_side) {
  pow_half_.fetch_add(1, std::memory_order_relaxed);
  const ModArith& ctx = p_side ? m_p2_ : m_q2_;
  if (engine_ != Engine::packed) return ctx.pow(base, e);

  const BigNat& prime = p_side ? prv_.p : prv_.q;
  BigNat pm1 = prime - BigNat(1);
  BigNat b = cmp(base, ctx.m) >= 0 ? mod(base, ctx.m) : base;
  // Small exponents gain nothing, and a base divisible by p escapes the
  // unit-group argument entirely; both take the plain path.
  if (e < pm1 || b.is_zero() || mod(b, prime).is_zero())
    return pow_mod(b, e, ctx.word);

  DivModResult d = divmod(e, pm1);  // e = quot * (p - 1) + rem
  size_t nbits = pm1.bit_length();
  std::vector<BigNat> chain(nbits);
  chain[0] = b;
  for (size_t i = 1; i < nbits; i++)
    chain[i] = ctx.word.mul_mod(chain[i - 1], chain[i - 1]);

  BigNat s(1), y(1);
  for (size_t i = 0; i < nbits; i++) {
    if (pm1.bit(i)) s = ctx.word.mul_mod(s, chain[i]);
    if (d.rem.bit(i)) y = ctx.word.mul_mod(y, chain[i]);
  }
  // s = b^(p-1) = 1 + pt mod p^2, so s^u = 1 + p(tu mod p).
  BigNat t = divmod(s - BigNat(1), prime).quot;
  BigNat tu = mod(t * mod(d.quot, prime), prime);
  BigNat su = BigNat(1) + prime * tu;
  return ctx.word.mul_mod(su, y);
}

Ciphertext Paillier::combine_halves(const BigNat& cp, const BigNat& cq,
                                    u32 plain_bits) const {
  // x = cp mod p^2, x = cq mod q^2: x = cp + p^2 * ((cq - cp) / p^2 mod q^2).
  BigNat cpq = mod(cp, crt_.q2);
  BigNat diff = cq >= cpq ? cq - cpq : cq + crt_.q2 - cpq;
  BigNat t = m_q2_.mul(diff, crt_.p2_inv_q2);
  return Ciphertext{cp + t * crt_.p2, plain_bits};
}

Ciphertext Paillier::encrypt(const BigNat& m, Rng& rng) {
  return encrypt_with_r(m, sample_r(rng));
}

Ciphertext Paillier::encrypt_with_r(const BigNat& m, const BigNat& r) {
  check_plaintext(m);
  if (r.is_zero() || r >= pub_.n)
    throw std::invalid_argument("randomness not in [1, n)");
  BigNat gm = g_power_full(m);
  pow_full_.fetch_add(1, std::memory_order_relaxed);
  BigNat rn = m_n2_.pow(r, pub_.n);
  return Ciphertext{m_n2_.mul(gm, rn), (u32)m.bit_length()};
}

Ciphertext Paillier::crt_encrypt(const BigNat& m, Rng& rng) {
  return crt_encrypt_with_r(m, sample_r(rng));
}

Ciphertext Paillier::crt_encrypt_with_r(const BigNat& m, const BigNat& r) {
  if (!has_prv_) throw std::logic_error("split encryption needs p and q");
  check_plaintext(m);
  if (r.is_zero() || r >= pub_.n)
    throw std::invalid_argument("randomness not in [1, n)");
  BigNat cp = m_p2_.mul(g_power_half(m, true),
                        half_pow(mod(r, crt_.p2), crt_.n_mod_phi_p2, true));
  BigNat cq = m_q2_.mul(g_power_half(m, false),
                        half_pow(mod(r, crt_.q2), crt_.n_mod_phi_q2, false));
  return combine_halves(cp, cq, (u32)m.bit_length());
}

BigNat Paillier::decrypt(const Ciphertext& c) {
  if (!has_prv_) throw std::logic_error("no private key loaded");
  if (c.value >= pub_.n2) throw std::invalid_argument("ciphertext not below n^2");
  pow_full_.fetch_add(1, std::memory_order_relaxed);
  BigNat x = m_n2_.pow(c.value, prv_.epsilon);
  return mod(l_function(x, pub_.n) * prv_.mu, pub_.n);
}

BigNat Paillier::crt_decrypt(const Ciphertext& c) {
  if (!has_prv_) throw std::logic_error("no private key loaded");
  if (c.value >= pub_.n2) throw std::invalid_argument("ciphertext not below n^2");
  BigNat xp = half_pow(mod(c.value, crt_.p2), crt_.eps_mod_phi_p2, true);
  BigNat xq = half_pow(mod(c.value, crt_.q2), crt_.eps_mod_phi_q2, false);
  BigNat x = combine_halves(xp, xq, 0).value;  // c^eps mod n^2, bit-exact
  return mod(l_function(x, pub_.n) * prv_.mu, pub_.n);
}

BigNat Paillier::decrypt_with_half(const Ciphertext& c, const BigNat& p2_power) {
  if (!has_prv_) throw std::logic_error("no private key loaded");
  if (c.value >= pub_.n2) throw std::invalid_argument("ciphertext not below n^2");
  BigNat xq = half_pow(mod(c.value, crt_.q2), crt_.eps_mod_phi_q2, false);
  BigNat x = combine_halves(mod(p2_power, crt_.p2), xq, 0).value;
  return mod(l_function(x, pub_.n) * prv_.mu, pub_.n);
}

RnFactor Paillier::make_rn_factor(const BigNat& r) {
  if (r.is_zero() || r >= pub_.n)
    throw std::invalid_argument("randomness not in [1, n)");
  RnFactor f;
  f.r = r;
  pow_full_.fetch_add(1, std::memory_order_relaxed);
  f.full = m_n2_.pow(r, pub_.n);
  if (has_prv_) {
    f.half_p2 = half_pow(mod(r, crt_.p2), crt_.n_mod_phi_p2, true);
    f.half_q2 = half_pow(mod(r, crt_.q2), crt_.n_mod_phi_q2, false);
  }
  return f;
}

Ciphertext Paillier::encrypt_with_factor(const BigNat& m, const RnFactor& f) {
  check_plaintext(m);
  if (f.full.is_zero()) throw std::invalid_argument("factor missing r^n");
  return Ciphertext{m_n2_.mul(g_power_full(m), f.full), (u32)m.bit_length()};
}

Ciphertext Paillier::crt_encrypt_with_factor(const BigNat& m,
                                             const RnFactor& f) {
  if (!has_prv_) throw std::logic_error("split encryption needs p and q");
  check_plaintext(m);
  if (f.half_p2.is_zero() || f.half_q2.is_zero())
    throw std::invalid_argument("factor missing split residues");
  BigNat cp = m_p2_.mul(g_power_half(m, true), f.half_p2);
  BigNat cq = m_q2_.mul(g_power_half(m, false), f.half_q2);
  return combine_halves(cp, cq, (u32)m.bit_length());
}

Ciphertext Paillier::finish_split_encrypt(const BigNat& m,
                                          const BigNat& p2_g_power,
                                          const BigNat& r) {
  if (!has_prv_) throw std::logic_error("split encryption needs p and q");
  check_plaintext(m);
  if (r.is_zero() || r >= pub_.n)
    throw std::invalid_argument("randomness not in [1, n)");
  BigNat cp = m_p2_.mul(mod(p2_g_power, crt_.p2),
                        half_pow(mod(r, crt_.p2), crt_.n_mod_phi_p2, true));
  BigNat cq = m_q2_.mul(g_power_half(m, false),
                        half_pow(mod(r, crt_.q2), crt_.n_mod_phi_q2, false));
  return combine_halves(cp, cq, (u32)m.bit_length());
}

Ciphertext Paillier::finish_split_encrypt_with_factor(const BigNat& m,
                                                      const BigNat& p2_g_power,
                                                      const RnFactor& f) {
  if (!has_prv_) throw std::logic_error("split encryption needs p and q");
  check_plaintext(m);
  if (f.half_p2.is_zero() || f.half_q2.is_zero())
    throw std::invalid_argument("factor missing split residues");
  BigNat cp = m_p2_.mul(mod(p2_g_power, crt_.p2), f.half_p2);
  BigNat cq = m_q2_.mul(g_power_half(m, false), f.half_q2);
  return combine_halves(cp, cq, (u32)m.bit_length());
}

Ciphertext Paillier::hom_add(const Ciphertext& a, const Ciphertext& b) {
  u32 bits = (a.plain_bits > b.plain_bits ? a.plain_bits : b.plain_bits) + 1;
  bump_bits_or_throw(bits);
  return Ciphertext{m_n2_.mul(a.value, b.value), bits};
}

Ciphertext Paillier::hom_scalar_mul(const BigNat& k, const Ciphertext& c) {
  u32 bits = k.is_zero() ? 0 : c.plain_bits + (u32)k.bit_length();
  bump_bits_or_throw(bits);
  pow_full_.fetch_add(1, std::memory_order_relaxed);
  return Ciphertext{m_n2_.pow(c.value, k), bits};
}

std::vector<Ciphertext> Paillier::hom_matvec(
    const std::vector<Ciphertext>& alpha,
    const std::vector<std::vector<u64>>& expo,
    const std::vector<Ciphertext>& zv, unsigned window) {
  size_t rows = alpha.size(), cols = zv.size();
  if (expo.size() != rows) throw std::invalid_argument("exponent row count");
  for (const auto& row : expo)
    if (row.size() != cols) throw std::invalid_argument("exponent row width");
  if (window < 1 || window > 8) throw std::invalid_argument("window in [1,8]");

  // Widest scalar across the whole matrix fixes the window count for every
  // row; that keeps the table reuse pattern uniform.
  size_t max_bits = 0;
  for (const auto& row : expo)
    for (u64 k : row)
      if ((size_t)std::bit_width(k) > max_bits) max_bits = std::bit_width(k);

  u32 zv_bits = 0, k_bits = (u32)max_bits;
  for (const auto& c : zv)
    if (c.plain_bits > zv_bits) zv_bits = c.plain_bits;
  u32 sum_bits = cols ? k_bits + zv_bits + (u32)std::bit_width(cols) : 0;

  // Per-column power tables zv_j^d for d < 2^window, shared by all rows.
  size_t tab = (size_t)1 << window;
  std::vector<std::vector<BigNat>> table(cols);
  for (size_t j = 0; j < cols; j++) {
    table[j].resize(tab);
    table[j][0] = BigNat(1);
    if (tab > 1) table[j][1] = zv[j].value;
    for (size_t d = 2; d < tab; d++)
      table[j][d] = m_n2_.mul(table[j][d - 1], zv[j].value);
  }

  size_t nwin = max_bits ? (max_bits + window - 1) / window : 0;
  std::vector<Ciphertext> out(rows);
  pow_full_.fetch_add((u64)rows, std::memory_order_relaxed);
  #pragma omp parallel for schedule(dynamic)
  for (ptrdiff_t i = 0; i < (ptrdiff_t)rows; i++) {
    BigNat acc(1);
    for (size_t w = nwin; w-- > 0;) {
      if (w != nwin - 1)
        for (unsigned s = 0; s < window; s++) acc = m_n2_.mul(acc, acc);
      for (size_t j = 0; j < cols; j++) {
        u64 d = (expo[i][j] >> (w * window)) & (tab - 1);
        if (d) acc = m_n2_.mul(acc, table[j][d]);
      }
    }
    u32 bits = (alpha[i].plain_bits > sum_bits ? alpha[i].plain_bits : sum_bits) + 1;
    bump_bits_or_throw(bits);
    out[i] = Ciphertext{m_n2_.mul(alpha[i].value, acc), bits};
  }
  return out;
}

std::vector<Ciphertext> Paillier::encrypt_vec(const std::vector<BigNat>& ms,
                                              Rng& rng, bool use_crt) {
  // Randomness is drawn serially so the ciphertexts do not depend on the
  // OpenMP schedule.
  std::vector<BigNat> rs(ms.size());
  for (size_t i = 0; i < ms.size(); i++) rs[i] = sample_r(rng);
  std::vector<Ciphertext> out(ms.size());
  #pragma omp parallel for schedule(dynamic)
  for (ptrdiff_t i = 0; i < (ptrdiff_t)ms.size(); i++)
    out[i] = use_crt ? crt_encrypt_with_r(ms[i], rs[i])
                     : encrypt_with_r(ms[i], rs[i]);
  return out;
}

std::vector<BigNat> Paillier::decrypt_vec(const std::vector<Ciphertext>& cs,
                                          bool use_crt) {
  std::vector<BigNat> out(cs.size());
  #pragma omp parallel for schedule(dynamic)
  for (ptrdiff_t i = 0; i < (ptrdiff_t)cs.size(); i++)
    out[i] = use_crt ? crt_decrypt(cs[i]) : decrypt(cs[i]);
  return out;
}

}  // namespace pcadmm
