// Kernel comparison bench: the OpenMP fan-outs against their serial
// references, the fft multiply against the schoolbook convolution, the
// packed word lane against the coefficient lane, and split-form encryption
// against the direct form. Every timed pair is first checked for equal
// results; a fast wrong kernel would otherwise look like a win.

#include <chrono>
#include <cstdio>
#include <omp.h>
#include <string>
#include <vector>

#include "pcadmm/modexp.hpp"
#include "pcadmm/paillier.hpp"

using namespace pcadmm;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* kernel, const char* config, const char* a_name,
         double a_s, const char* b_name, double b_s, int ops) {
  printf("%-26s %-22s %10s %9.1f/s %10s %9.1f/s  ratio %.2f\n", kernel,
         config, a_name, ops / a_s, b_name, ops / b_s, a_s / b_s);
}

void die(const char* what) {
  fprintf(stderr, "result mismatch: %s\n", what);
  exit(1);
}

// Sequential vs OpenMP map of the coefficient-lane exponentiation.
void bench_exp_map() {
  Rng rng(11);
  size_t mbits = 512;
  BigNat modulus = random_bits(rng, mbits - 1);
  modulus = (modulus << 1) + BigNat(1) + (BigNat(1) << (mbits - 1));
  BarrettCtx ctx = BarrettCtx::make(modulus, pick_fft_base(mbits));

  int count = 48;
  std::vector<CoeffVec> bases((size_t)count);
  std::vector<BigNat> exps((size_t)count);
  for (int i = 0; i < count; i++) {
    bases[(size_t)i] = to_limbs(random_below(rng, modulus), ctx.base);
    exps[(size_t)i] = random_bits(rng, 192);
  }

  auto t0 = Clock::now();
  std::vector<ModExpResult> ser = sequential_mod_exp(bases, exps, ctx);
  double ts = secs_since(t0);
  t0 = Clock::now();
  std::vector<ModExpResult> par = parallel_mod_exp(bases, exps, ctx);
  double tp = secs_since(t0);

  for (int i = 0; i < count; i++)
    if (cmp_coeff(ser[(size_t)i].value, par[(size_t)i].value) != 0)
      die("parallel exponentiation map");
  row("exponentiation map", "512-bit, 48 items", "serial", ts, "openmp", tp,
      count);
}

// Vector encryption: the OpenMP fan-out against one-at-a-time calls.
void bench_encrypt_vec() {
  Rng rng(12);
  KeyPair keys = keygen(rng, 1024, GMode::binomial);
  Paillier ph(keys);

  int count = 64;
  std::vector<BigNat> ms((size_t)count);
  for (int i = 0; i < count; i++) ms[(size_t)i] = random_below(rng, keys.pub.n);

  // Same r stream both ways so the ciphertexts must agree exactly.
  Rng r_ser(77), r_par(77);
  auto t0 = Clock::now();
  std::vector<Ciphertext> ser;
  for (int i = 0; i < count; i++)
    ser.push_back(ph.crt_encrypt(ms[(size_t)i], r_ser));
  double ts = secs_since(t0);
  t0 = Clock::now();
  std::vector<Ciphertext> par = ph.encrypt_vec(ms, r_par, true);
  double tp = secs_since(t0);

  for (int i = 0; i < count; i++)
    if (ser[(size_t)i].value != par[(size_t)i].value) die("vector encryption");
  row("vector encryption", "1024-bit keys, 64 items", "serial", ts, "openmp",
      tp, count);
}

// fft multiply against the schoolbook convolution at production widths.
void bench_multiply() {
  Rng rng(13);
  for (size_t bits : {1024u, 4096u}) {
    u32 base = pick_fft_base(bits);
    size_t len = 2;
    while (len < (bits / base_bits(base)) * 2) len *= 2;
    FftPlan plan = FftPlan::make(len);

    int count = 200;
    std::vector<CoeffVec> as((size_t)count), bs((size_t)count);
    for (int i = 0; i < count; i++) {
      as[(size_t)i] = to_limbs(random_bits(rng, bits), base);
      bs[(size_t)i] = to_limbs(random_bits(rng, bits), base);
    }

    auto t0 = Clock::now();
    std::vector<CoeffVec> slow((size_t)count);
    for (int i = 0; i < count; i++)
      slow[(size_t)i] = schoolbook_mul(as[(size_t)i], bs[(size_t)i]);
    double ts = secs_since(t0);
    t0 = Clock::now();
    u64 fallbacks = 0;
    std::vector<CoeffVec> fast((size_t)count);
    for (int i = 0; i < count; i++)
      fast[(size_t)i] =
          checked_mul(as[(size_t)i], bs[(size_t)i], plan, 0.25, &fallbacks);
    double tf = secs_since(t0);

    for (int i = 0; i < count; i++)
      if (cmp_coeff(slow[(size_t)i], fast[(size_t)i]) != 0) die("fft multiply");
    std::string cfg = std::to_string(bits) + "-bit operands";
    row("multiply", cfg.c_str(), "schoolbook", ts, "fft", tf, count);
    if (fallbacks) printf("  (%llu precision fallbacks)\n",
                          (unsigned long long)fallbacks);
  }
}

// Packed word lane against the coefficient lane, same modulus and inputs.
void bench_lanes() {
  Rng rng(14);
  size_t mbits = 2048;
  BigNat modulus = random_bits(rng, mbits - 1);
  modulus = (modulus << 1) + BigNat(1) + (BigNat(1) << (mbits - 1));
  WordBarrett word = WordBarrett::make(modulus);
  BarrettCtx coeff = BarrettCtx::make(modulus, pick_fft_base(mbits));

  int count = 2000;
  std::vector<BigNat> as((size_t)count), bs((size_t)count);
  for (int i = 0; i < count; i++) {
    as[(size_t)i] = random_below(rng, modulus);
    bs[(size_t)i] = random_below(rng, modulus);
  }

  auto t0 = Clock::now();
  std::vector<BigNat> pw((size_t)count);
  for (int i = 0; i < count; i++)
    pw[(size_t)i] = word.mul_mod(as[(size_t)i], bs[(size_t)i]);
  double tw = secs_since(t0);
  t0 = Clock::now();
  std::vector<BigNat> pc((size_t)count);
  for (int i = 0; i < count; i++)
    pc[(size_t)i] = from_limbs(coeff.mul_mod(to_limbs(as[(size_t)i], coeff.base),
                                             to_limbs(bs[(size_t)i], coeff.base)));
  double tc = secs_since(t0);
  for (int i = 0; i < count; i++)
    if (pw[(size_t)i] != pc[(size_t)i]) die("lane multiply");
  row("modular multiply", "2048-bit modulus", "coeff-fft", tc, "packed", tw,
      count);

  int pcount = 8;
  BigNat e = random_bits(rng, 256);
  t0 = Clock::now();
  std::vector<BigNat> ew((size_t)pcount);
  for (int i = 0; i < pcount; i++) ew[(size_t)i] = pow_mod(as[(size_t)i], e, word);
  double tew = secs_since(t0);
  t0 = Clock::now();
  for (int i = 0; i < pcount; i++) {
    ModExpResult r = mod_exp(to_limbs(as[(size_t)i], coeff.base), e, coeff);
    if (from_limbs(r.value) != ew[(size_t)i]) die("lane exponentiation");
  }
  double tec = secs_since(t0);
  row("modular power", "2048-bit, 256-bit exp", "coeff-fft", tec, "packed",
      tew, pcount);
}

// Split-form encryption against the direct form at production key size.
void bench_split_encrypt() {
  Rng rng(15);
  KeyPair keys = keygen(rng, 2048, GMode::binomial);
  Paillier ph(keys);

  int count = 10;
  std::vector<BigNat> ms((size_t)count), rs((size_t)count);
  for (int i = 0; i < count; i++) {
    ms[(size_t)i] = random_below(rng, keys.pub.n);
    rs[(size_t)i] = ph.sample_r(rng);
  }

  auto t0 = Clock::now();
  std::vector<Ciphertext> direct;
  for (int i = 0; i < count; i++)
    direct.push_back(ph.encrypt_with_r(ms[(size_t)i], rs[(size_t)i]));
  double td = secs_since(t0);
  t0 = Clock::now();
  for (int i = 0; i < count; i++) {
    Ciphertext c = ph.crt_encrypt_with_r(ms[(size_t)i], rs[(size_t)i]);
    if (c.value != direct[(size_t)i].value) die("split encryption");
  }
  double tc = secs_since(t0);
  row("encryption", "2048-bit keys", "direct", td, "split", tc, count);
}

}  // namespace

int main() {
  printf("kernel bench, %d omp thread(s)\n", omp_get_max_threads());
  bench_exp_map();
  bench_encrypt_vec();
  bench_multiply();
  bench_lanes();
  bench_split_encrypt();
  return 0;
}
