#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pcadmm/paillier.hpp"

using namespace pcadmm;

// Word-sized modular power, the independent oracle for toy keys (p=5, q=7:
// everything fits in u64 with room to spare).
static u64 upow(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

static KeyPair toy_keys(GMode gmode = GMode::binomial) {
  return keypair_from_primes(BigNat(5), BigNat(7), gmode, 11);
}

TEST_CASE("toy key material matches the hand-computed values") {
  KeyPair kp = toy_keys();
  CHECK(kp.pub.n == BigNat(35));
  CHECK(kp.pub.n2 == BigNat(1225));
  CHECK(kp.pub.g == BigNat(36));
  CHECK(kp.prv.epsilon == BigNat(12));  // lcm(4, 6)
  CHECK(kp.prv.mu == BigNat(3));        // 12 * 3 = 36 = 1 mod 35
  CHECK(kp.crt.p2 == BigNat(25));
  CHECK(kp.crt.q2 == BigNat(49));
  CHECK(kp.crt.phi_p2 == BigNat(20));
  CHECK(kp.crt.phi_q2 == BigNat(42));
  CHECK(kp.crt.p2_inv_q2 == BigNat(2));  // 25 * 2 = 50 = 1 mod 49
  CHECK(kp.crt.n_mod_phi_p2 == BigNat(15));
  CHECK(kp.crt.eps_mod_phi_p2 == BigNat(12));

  CrtShare share = crt_share(kp);
  CHECK(share.p2 == BigNat(25));
  CHECK(share.phi_p2 == BigNat(20));
}

TEST_CASE("toy encrypt matches g^m r^n mod n^2 for every plaintext") {
  KeyPair kp = toy_keys();
  Paillier ph(kp);
  const u64 units[] = {1, 2, 4, 11, 23, 34};
  for (u64 m = 0; m < 35; m++) {
    for (u64 r : units) {
      Ciphertext c = ph.encrypt_with_r(BigNat(m), BigNat(r));
      u64 want = upow(36, m, 1225) * upow(r, 35, 1225) % 1225;
      CHECK(c.value == BigNat(want));
      CHECK(ph.decrypt(c) == BigNat(m));
    }
  }
  // m = 0, r = 1 is the identity ciphertext.
  CHECK(ph.encrypt_with_r(BigNat((u64)0), BigNat(1)).value == BigNat(1));
}

TEST_CASE("toy split paths are bit-identical to the direct ones") {
  for (GMode gm : {GMode::binomial, GMode::random_g}) {
    KeyPair kp = toy_keys(gm);
    Paillier ph(kp);
    const u64 units[] = {1, 3, 12, 34};
    for (u64 m = 0; m < 35; m++) {
      for (u64 r : units) {
        Ciphertext a = ph.encrypt_with_r(BigNat(m), BigNat(r));
        Ciphertext b = ph.crt_encrypt_with_r(BigNat(m), BigNat(r));
        CHECK(a.value == b.value);
        CHECK(ph.crt_decrypt(a) == ph.decrypt(a));
        CHECK(ph.crt_decrypt(a) == BigNat(m));
      }
    }
  }
}

TEST_CASE("toy homomorphic add over the full plaintext table") {
  KeyPair kp = toy_keys();
  Paillier ph(kp);
  Rng rng(7);
  std::vector<Ciphertext> enc;
  for (u64 m = 0; m < 35; m++) enc.push_back(ph.encrypt(BigNat(m), rng));

  // Ciphertext product decrypts to the modular sum; checked exhaustively
  // with the product taken in word arithmetic to stay independent of hom_add.
  for (u64 a = 0; a < 35; a++)
    for (u64 b = 0; b < 35; b++) {
      u64 prod = enc[a].value.to_u64() * enc[b].value.to_u64() % 1225;
      CHECK(ph.decrypt(Ciphertext{BigNat(prod), 0}) == BigNat((a + b) % 35));
    }

  // The API form tracks plaintext growth, so it covers the pairs whose bound
  // stays inside the space and throws beyond it.
  CHECK(ph.decrypt(ph.hom_add(enc[13], enc[9])) == BigNat(22));
  CHECK(ph.decrypt(ph.hom_add(enc[0], enc[15])) == BigNat(15));
  CHECK_THROWS_AS(ph.hom_add(enc[16], enc[16]), std::overflow_error);
}

TEST_CASE("toy homomorphic scalar multiply") {
  KeyPair kp = toy_keys();
  Paillier ph(kp);
  Rng rng(19);
  for (u64 m : {0ull, 1ull, 2ull, 5ull, 11ull}) {
    Ciphertext c = ph.encrypt(BigNat(m), rng);
    for (u64 k : {0ull, 1ull, 2ull, 3ull}) {
      if (k * m >= 35 || (m >= 8 && k >= 2)) continue;  // bound would trip
      CHECK(ph.decrypt(ph.hom_scalar_mul(BigNat(k), c)) == BigNat(k * m));
    }
  }
  Ciphertext c = ph.encrypt(BigNat(30), rng);
  CHECK_THROWS_AS(ph.hom_scalar_mul(BigNat(64), c), std::overflow_error);
}

TEST_CASE("toy split encryption finished from a delegated g power") {
  KeyPair kp = toy_keys(GMode::random_g);
  Paillier ph(kp);
  u64 g_p2 = mod(kp.pub.g, kp.crt.p2).to_u64();
  for (u64 m = 0; m < 35; m++) {
    for (u64 r : {2ull, 17ull}) {
      // What the delegate would return: g^(m mod phi(p^2)) mod p^2.
      u64 gp_pow = upow(g_p2, m % 20, 25);
      Ciphertext got = ph.finish_split_encrypt(BigNat(m), BigNat(gp_pow), BigNat(r));
      CHECK(got.value == ph.crt_encrypt_with_r(BigNat(m), BigNat(r)).value);
      CHECK(ph.decrypt(got) == BigNat(m));
    }
  }
}

TEST_CASE("toy decryption finished from a delegated ciphertext power") {
  KeyPair kp = toy_keys(GMode::random_g);
  Paillier ph(kp);
  u64 eps_p = mod(kp.prv.epsilon, kp.crt.phi_p2).to_u64();
  Rng rng(9);
  for (u64 m = 0; m < 35; m += 2) {
    Ciphertext c = ph.encrypt(BigNat(m), rng);
    // What the delegate would return: c^(eps mod phi(p^2)) mod p^2.
    u64 cp_pow = upow(mod(c.value, kp.crt.p2).to_u64(), eps_p, 25);
    CHECK(ph.decrypt_with_half(c, BigNat(cp_pow)) == BigNat(m));
  }
  CHECK_THROWS_AS(ph.decrypt_with_half(Ciphertext{BigNat(1300), 0}, BigNat(1)),
                  std::invalid_argument);
}

TEST_CASE("tampered or malformed ciphertexts are rejected") {
  KeyPair kp = toy_keys();
  Paillier ph(kp);
  // 0 and multiples of n are outside the unit group mod n^2.
  CHECK_THROWS_AS(ph.decrypt(Ciphertext{BigNat(), 0}), std::runtime_error);
  CHECK_THROWS_AS(ph.decrypt(Ciphertext{BigNat(35), 0}), std::runtime_error);
  CHECK_THROWS_AS(ph.decrypt(Ciphertext{BigNat(1230), 0}), std::invalid_argument);
  CHECK_THROWS_AS(ph.crt_decrypt(Ciphertext{BigNat(1300), 0}), std::invalid_argument);

  CHECK_THROWS_AS(ph.encrypt_with_r(BigNat(35), BigNat(2)), std::invalid_argument);
  CHECK_THROWS_AS(ph.encrypt_with_r(BigNat(3), BigNat()), std::invalid_argument);
  CHECK_THROWS_AS(ph.encrypt_with_r(BigNat(3), BigNat(35)), std::invalid_argument);

  Paillier pub_only(kp.pub);
  Rng rng(1);
  Ciphertext c = pub_only.encrypt(BigNat(5), rng);
  CHECK_THROWS_AS(pub_only.decrypt(c), std::logic_error);
  CHECK_THROWS_AS(pub_only.crt_encrypt(BigNat(5), rng), std::logic_error);
  CHECK_THROWS_AS(pub_only.prv(), std::logic_error);
}

TEST_CASE("key construction rejects bad inputs") {
  CHECK_THROWS_AS(keypair_from_primes(BigNat(5), BigNat(5)), std::invalid_argument);
  Rng rng(3);
  CHECK_THROWS_AS(keygen(rng, 512), std::invalid_argument);
}

TEST_CASE("exponentiation counters match the operation tally") {
  KeyPair kp = toy_keys(GMode::random_g);

  // random g: one g^m and one r^n per direct encryption.
  Paillier ph(kp);
  ph.encrypt_with_r(BigNat(3), BigNat(2));
  CHECK(ph.counters().pow_full == 2);
  CHECK(ph.counters().pow_half == 0);

  ph.reset_counters();
  ph.crt_encrypt_with_r(BigNat(3), BigNat(2));
  CHECK(ph.counters().pow_full == 0);
  CHECK(ph.counters().pow_half == 4);  // g and r on both sides

  ph.reset_counters();
  ph.decrypt(ph.crt_encrypt_with_r(BigNat(3), BigNat(2)));
  CHECK(ph.counters().pow_full == 1);
  CHECK(ph.counters().pow_half == 4);

  ph.reset_counters();
  ph.crt_decrypt(Ciphertext{BigNat(8), 0});
  CHECK(ph.counters().pow_half == 2);

  ph.reset_counters();
  ph.finish_split_encrypt(BigNat(3), BigNat(4), BigNat(2));
  CHECK(ph.counters().pow_full == 0);
  CHECK(ph.counters().pow_half == 3);  // q-side g plus both r halves

  ph.reset_counters();
  RnFactor f = ph.make_rn_factor(BigNat(2));
  CHECK(ph.counters().pow_full == 1);
  CHECK(ph.counters().pow_half == 2);

  // Pooled randomness: the r work is gone, g powers remain.
  ph.reset_counters();
  ph.crt_encrypt_with_factor(BigNat(3), f);
  CHECK(ph.counters().pow_full == 0);
  CHECK(ph.counters().pow_half == 2);
  ph.reset_counters();
  ph.finish_split_encrypt_with_factor(BigNat(3), BigNat(4), f);
  CHECK(ph.counters().pow_half == 1);

  // binomial g: the g-side exponentiation disappears entirely.
  KeyPair kb = toy_keys(GMode::binomial);
  Paillier pb(kb);
  pb.encrypt_with_r(BigNat(3), BigNat(2));
  CHECK(pb.counters().pow_full == 1);
  pb.reset_counters();
  pb.crt_encrypt_with_r(BigNat(3), BigNat(2));
  CHECK(pb.counters().pow_half == 2);
}

TEST_CASE("pooled factors reproduce the fresh-randomness ciphertexts") {
  for (GMode gm : {GMode::binomial, GMode::random_g}) {
    KeyPair kp = toy_keys(gm);
    Paillier ph(kp);
    for (u64 r : {2ull, 13ull}) {
      RnFactor f = ph.make_rn_factor(BigNat(r));
      for (u64 m : {0ull, 1ull, 9ull, 34ull}) {
        CHECK(ph.encrypt_with_factor(BigNat(m), f).value ==
              ph.encrypt_with_r(BigNat(m), BigNat(r)).value);
        CHECK(ph.crt_encrypt_with_factor(BigNat(m), f).value ==
              ph.crt_encrypt_with_r(BigNat(m), BigNat(r)).value);
      }
    }
  }
}

TEST_CASE("coefficient-lane engine produces identical ciphertexts") {
  KeyPair kp = toy_keys(GMode::random_g);
  Paillier fast(kp, Engine::packed);
  Paillier slow(kp, Engine::coeff_fft);
  for (u64 m : {0ull, 1ull, 17ull, 34ull}) {
    for (u64 r : {2ull, 23ull}) {
      CHECK(fast.encrypt_with_r(BigNat(m), BigNat(r)).value ==
            slow.encrypt_with_r(BigNat(m), BigNat(r)).value);
      CHECK(fast.crt_encrypt_with_r(BigNat(m), BigNat(r)).value ==
            slow.crt_encrypt_with_r(BigNat(m), BigNat(r)).value);
      Ciphertext c = fast.encrypt_with_r(BigNat(m), BigNat(r));
      CHECK(slow.decrypt(c) == BigNat(m));
      CHECK(slow.crt_decrypt(c) == BigNat(m));
    }
  }
}

TEST_CASE("64-bit keys: round trips, vector forms, both engines") {
  Rng rng(42);
  KeyPair kp = keygen(rng, 64, GMode::random_g);
  CHECK(kp.pub.n.bit_length() == 64);
  Paillier ph(kp);

  std::vector<BigNat> ms;
  for (int i = 0; i < 24; i++) ms.push_back(random_below(rng, kp.pub.n));
  for (bool use_crt : {false, true}) {
    std::vector<Ciphertext> cs = ph.encrypt_vec(ms, rng, use_crt);
    std::vector<BigNat> back = ph.decrypt_vec(cs, use_crt);
    for (size_t i = 0; i < ms.size(); i++) CHECK(back[i] == ms[i]);
  }

  // Same seed, same ciphertexts: the vector form draws randomness serially.
  Rng ra(9), rb(9);
  std::vector<Ciphertext> ca = ph.encrypt_vec(ms, ra, true);
  std::vector<Ciphertext> cb = ph.encrypt_vec(ms, rb, true);
  for (size_t i = 0; i < ms.size(); i++) CHECK(ca[i].value == cb[i].value);

  Paillier slow(kp, Engine::coeff_fft);
  BigNat r = ph.sample_r(rng);
  CHECK(slow.encrypt_with_r(ms[0], r).value == ph.encrypt_with_r(ms[0], r).value);
  CHECK(slow.crt_decrypt(ca[0]) == ms[0]);
}

TEST_CASE("windowed multi-exponentiation matches the plaintext recurrence") {
  Rng rng(77);
  KeyPair kp = keygen(rng, 64);
  Paillier ph(kp);
  u64 n = kp.pub.n.to_u64();

  const size_t rows = 5, cols = 4;
  std::vector<BigNat> alpha_m, zv_m;
  for (size_t i = 0; i < rows; i++) alpha_m.push_back(BigNat(rng.below(1u << 20)));
  for (size_t j = 0; j < cols; j++) zv_m.push_back(BigNat(rng.below(1u << 16)));
  std::vector<std::vector<u64>> expo(rows, std::vector<u64>(cols));
  for (auto& row : expo)
    for (auto& k : row) k = rng.below(1u << 14);
  expo[2][1] = 0;
  expo[4] = {0, 0, 0, 0};  // row with no matrix term at all

  std::vector<Ciphertext> alpha = ph.encrypt_vec(alpha_m, rng, true);
  std::vector<Ciphertext> zv = ph.encrypt_vec(zv_m, rng, true);

  for (unsigned window : {1u, 3u, 6u}) {
    ph.reset_counters();
    std::vector<Ciphertext> out = ph.hom_matvec(alpha, expo, zv, window);
    CHECK(ph.counters().pow_full == rows);
    for (size_t i = 0; i < rows; i++) {
      u64 want = alpha_m[i].to_u64();
      for (size_t j = 0; j < cols; j++)
        want = (want + (u128)expo[i][j] * zv_m[j].to_u64() % n) % n;
      CHECK(ph.decrypt(out[i]) == BigNat(want));
      CHECK(out[i].plain_bits < kp.pub.n.bit_length());
    }
  }

  std::vector<std::vector<u64>> ragged = expo;
  ragged[1].pop_back();
  CHECK_THROWS_AS(ph.hom_matvec(alpha, ragged, zv), std::invalid_argument);
  CHECK_THROWS_AS(ph.hom_matvec(alpha, expo, zv, 9), std::invalid_argument);
}

TEST_CASE("1024-bit keys: all four paths agree") {
  Rng rng(20260825);
  KeyPair kp = keygen(rng, 1024);
  CHECK(kp.pub.n.bit_length() == 1024);
  CHECK(kp.prv.p != kp.prv.q);
  // the prime gap floor that keygen enforces
  BigNat diff = kp.prv.p > kp.prv.q ? kp.prv.p - kp.prv.q : kp.prv.q - kp.prv.p;
  CHECK(diff.bit_length() >= 512 - 7);

  Paillier ph(kp);
  for (int i = 0; i < 8; i++) {
    BigNat m = random_below(rng, kp.pub.n);
    BigNat r = ph.sample_r(rng);
    Ciphertext a = ph.encrypt_with_r(m, r);
    Ciphertext b = ph.crt_encrypt_with_r(m, r);
    CHECK(a.value == b.value);
    CHECK(ph.decrypt(a) == m);
    CHECK(ph.crt_decrypt(a) == m);
  }

  // additive homomorphism at full scale
  Rng rr(5);
  BigNat m1 = random_below(rr, kp.pub.n >> 2);
  BigNat m2 = random_below(rr, kp.pub.n >> 2);
  Ciphertext c = ph.hom_add(ph.encrypt(m1, rr), ph.encrypt(m2, rr));
  CHECK(ph.crt_decrypt(c) == m1 + m2);
}

TEST_CASE("key records round-trip through the wire format") {
  Rng rng(6);
  for (GMode gm : {GMode::binomial, GMode::random_g}) {
    KeyPair kp = keygen(rng, 64, gm);
    std::vector<uint8_t> bytes = serialize_keypair(kp);
    KeyPair back = parse_keypair(bytes);
    CHECK(back.pub.n == kp.pub.n);
    CHECK(back.pub.n2 == kp.pub.n2);
    CHECK(back.pub.g == kp.pub.g);
    CHECK(back.pub.key_bits == kp.pub.key_bits);
    CHECK(back.pub.binomial_g == kp.pub.binomial_g);
    CHECK(back.prv.p == kp.prv.p);
    CHECK(back.prv.q == kp.prv.q);
    CHECK(back.prv.epsilon == kp.prv.epsilon);
    CHECK(back.prv.mu == kp.prv.mu);
    CHECK(back.crt.p2_inv_q2 == kp.crt.p2_inv_q2);

    // A parsed key must behave identically, not just compare equal.
    Paillier pa(kp), pb(back);
    BigNat m = random_below(rng, kp.pub.n);
    BigNat r = pa.sample_r(rng);
    CHECK(pa.crt_encrypt_with_r(m, r).value == pb.crt_encrypt_with_r(m, r).value);

    std::vector<uint8_t> bad = bytes;
    bad[0] = 'x';
    CHECK_THROWS_AS(parse_keypair(bad), std::runtime_error);
    bad = bytes;
    bad.resize(bytes.size() / 2);
    CHECK_THROWS_AS(parse_keypair(bad), std::runtime_error);
    bad = bytes;
    bad[2] = 9;
    CHECK_THROWS_AS(parse_keypair(bad), std::runtime_error);
  }
}
