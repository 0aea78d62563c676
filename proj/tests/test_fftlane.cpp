#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pcadmm/modexp.hpp"

using namespace pcadmm;

static const u32 kBases[] = {2, 4, 16, 256, 65536};

static BigNat ref_pow_mod(const BigNat& b, const BigNat& e, const BigNat& m) {
  BigNat result = mod(BigNat(1), m);
  BigNat base = mod(b, m);
  for (size_t i = e.bit_length(); i-- > 0;) {
    result = mod(result * result, m);
    if (e.bit(i)) result = mod(result * base, m);
  }
  return result;
}

static size_t next_pow2(size_t v) {
  size_t p = 2;
  while (p < v) p <<= 1;
  return p;
}

TEST_CASE("digit conversion round-trips in every base") {
  Rng rng(21);
  for (u32 base : kBases) {
    for (int i = 0; i < 60; i++) {
      BigNat v = random_bits(rng, rng.below(600));
      CoeffVec c = to_limbs(v, base);
      for (u32 d : c.digits) CHECK(d < base);
      if (!c.digits.empty()) CHECK(c.digits.back() != 0);
      CHECK(from_limbs(c) == v);
    }
    CHECK(to_limbs(BigNat(), base).is_zero());
  }
  CHECK_THROWS_AS(to_limbs(BigNat(5), 10), std::invalid_argument);
}

TEST_CASE("coefficient add sub shift compare") {
  Rng rng(22);
  for (u32 base : kBases) {
    for (int i = 0; i < 40; i++) {
      BigNat a = random_bits(rng, rng.below(300));
      BigNat b = random_bits(rng, rng.below(300));
      CoeffVec ca = to_limbs(a, base), cb = to_limbs(b, base);
      CHECK(from_limbs(add_coeff(ca, cb)) == a + b);
      if (a >= b) CHECK(from_limbs(sub_coeff(ca, cb)) == a - b);
      else CHECK_THROWS_AS(sub_coeff(ca, cb), std::underflow_error);
      int expect = a < b ? -1 : (a == b ? 0 : 1);
      CHECK(cmp_coeff(ca, cb) == expect);
      size_t sh = (size_t)rng.below(5);
      CHECK(from_limbs(shift_right_digits(ca, sh)) == (a >> (sh * base_bits(base))));
    }
  }
}

TEST_CASE("schoolbook convolution matches packed multiply") {
  Rng rng(23);
  for (u32 base : kBases) {
    for (int i = 0; i < 50; i++) {
      BigNat a = random_bits(rng, rng.below(500));
      BigNat b = random_bits(rng, rng.below(500));
      CHECK(from_limbs(schoolbook_mul(to_limbs(a, base), to_limbs(b, base))) == a * b);
    }
  }
}

TEST_CASE("fft multiply agrees with schoolbook in every base") {
  Rng rng(24);
  for (u32 base : kBases) {
    // Base 2 digit strings get long quickly; cap widths so the test stays
    // snappy while the wider bases still see multi-thousand-bit operands.
    size_t max_bits = base <= 4 ? 800 : 4200;
    FftPlan plan = FftPlan::make(next_pow2(2 * (max_bits / base_bits(base) + 2)));
    for (int i = 0; i < 60; i++) {
      BigNat a = random_bits(rng, 1 + rng.below(max_bits));
      BigNat b = random_bits(rng, 1 + rng.below(max_bits));
      CoeffVec ca = to_limbs(a, base), cb = to_limbs(b, base);
      CoeffVec ref = schoolbook_mul(ca, cb);
      CoeffVec got = fft_mul(ca, cb, plan);
      CHECK(cmp_coeff(got, ref) == 0);
    }
    CHECK(fft_mul(to_limbs(BigNat(), base), to_limbs(BigNat(7), base), plan).is_zero());
  }
}

TEST_CASE("fft multiply raises precision faults and checked_mul falls back") {
  Rng rng(25);
  BigNat a = random_bits(rng, 2000);
  BigNat b = random_bits(rng, 2000);
  FftPlan plan = FftPlan::make(512);
  CoeffVec ca = to_limbs(a, 65536), cb = to_limbs(b, 65536);
  // A negative threshold trips on the very first coefficient, which makes
  // the fault path deterministic.
  CHECK_THROWS_AS(fft_mul(ca, cb, plan, -1.0), PrecisionFault);
  u64 fallbacks = 0;
  CoeffVec got = checked_mul(ca, cb, plan, -1.0, &fallbacks);
  CHECK(fallbacks == 1);
  CHECK(from_limbs(got) == a * b);
  // Oversized operands are a usage error, not a fault.
  FftPlan tiny = FftPlan::make(64);
  CHECK_THROWS_AS(fft_mul(ca, cb, tiny), std::invalid_argument);
}

TEST_CASE("barrett reduce matches wide division") {
  Rng rng(26);
  for (u32 base : kBases) {
    size_t mod_bits = base <= 4 ? 96 : 1200;
    for (int i = 0; i < 6; i++) {
      BigNat m = random_bits(rng, 40 + rng.below(mod_bits));
      if (m < BigNat(2)) m = BigNat(2);
      BarrettCtx ctx = BarrettCtx::make(m, base);
      for (int j = 0; j < 10; j++) {
        BigNat va = random_below(rng, m * m);
        CHECK(from_limbs(ctx.reduce(to_limbs(va, base))) == mod(va, m));
        BigNat x = random_below(rng, m), y = random_below(rng, m);
        CHECK(from_limbs(ctx.mul_mod(to_limbs(x, base), to_limbs(y, base))) ==
              mod(x * y, m));
      }
    }
  }
  CHECK_THROWS_AS(BarrettCtx::make(BigNat(1), 256), std::invalid_argument);
}

TEST_CASE("decomposed mod_exp matches square-and-multiply reference") {
  Rng rng(27);
  for (u32 base : {16u, 256u, 65536u}) {
    for (int i = 0; i < 8; i++) {
      BigNat m = random_bits(rng, 40 + rng.below(700));
      if (m < BigNat(2)) m = BigNat(2);
      BarrettCtx ctx = BarrettCtx::make(m, base);
      for (int j = 0; j < 4; j++) {
        BigNat g = random_below(rng, m);
        BigNat e = random_bits(rng, rng.below(120));
        ModExpResult r = mod_exp(to_limbs(g, base), e, ctx);
        CHECK(from_limbs(r.value) == ref_pow_mod(g, e, m));
        CHECK(r.multiplies <= 2 * e.bit_length());
        CHECK(r.fallbacks == 0);
      }
    }
  }
}

TEST_CASE("mod_exp under forced fallback still gets the right answer") {
  Rng rng(28);
  BigNat m = random_bits(rng, 300);
  if (m < BigNat(2)) m = BigNat(2);
  BarrettCtx ctx = BarrettCtx::make(m, 256, -1.0);
  BigNat g = random_below(rng, m);
  BigNat e = random_bits(rng, 40);
  ModExpResult r = mod_exp(to_limbs(g, 256), e, ctx);
  CHECK(from_limbs(r.value) == ref_pow_mod(g, e, m));
  if (!e.is_zero()) CHECK(r.fallbacks > 0);
}

TEST_CASE("parallel map matches the sequential map") {
  Rng rng(29);
  BigNat m = random_bits(rng, 512);
  if (m < BigNat(2)) m = BigNat(2);
  BarrettCtx ctx = BarrettCtx::make(m, 65536);
  std::vector<CoeffVec> bases;
  std::vector<BigNat> exps;
  for (int i = 0; i < 24; i++) {
    bases.push_back(to_limbs(random_below(rng, m), 65536));
    exps.push_back(random_bits(rng, rng.below(90)));
  }
  auto seq = sequential_mod_exp(bases, exps, ctx);
  auto par = parallel_mod_exp(bases, exps, ctx);
  REQUIRE(seq.size() == par.size());
  for (size_t i = 0; i < seq.size(); i++) {
    CHECK(cmp_coeff(seq[i].value, par[i].value) == 0);
    CHECK(seq[i].multiplies == par[i].multiplies);
  }
  CHECK_THROWS_AS(parallel_mod_exp(bases, {}, ctx), std::invalid_argument);
}

TEST_CASE("base picker prefers narrow digits for wide moduli") {
  CHECK(pick_fft_base(1024) == 65536);
  CHECK(pick_fft_base(4096) == 65536);
  CHECK(pick_fft_base(8192) == 256);
}
