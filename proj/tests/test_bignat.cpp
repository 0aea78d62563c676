#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <boost/multiprecision/cpp_int.hpp>

#include "pcadmm/bignat.hpp"

using namespace pcadmm;
using boost::multiprecision::cpp_int;

// Bridge through the byte encoding so the decimal code is not part of the
// reference path (it gets its own checks below).
static cpp_int to_ref(const BigNat& v) {
  cpp_int r = 0;
  for (uint8_t b : v.to_bytes_be()) {
    r <<= 8;
    r += b;
  }
  return r;
}

static BigNat from_ref(const cpp_int& v) {
  std::vector<uint8_t> bytes;
  cpp_int t = v;
  while (t > 0) {
    bytes.push_back((uint8_t)(unsigned)(t & 0xff));
    t >>= 8;
  }
  std::reverse(bytes.begin(), bytes.end());
  return BigNat::from_bytes_be(bytes.data(), bytes.size());
}

// Left-to-right square-and-multiply on plain divmod. Structurally different
// from both production exponentiation paths, so it can referee them.
static BigNat ref_pow_mod(const BigNat& b, const BigNat& e, const BigNat& m) {
  BigNat result = mod(BigNat(1), m);
  BigNat base = mod(b, m);
  for (size_t i = e.bit_length(); i-- > 0;) {
    result = mod(result * result, m);
    if (e.bit(i)) result = mod(result * base, m);
  }
  return result;
}

// Mix of random widths and carry-heavy shapes (all-ones, powers of two).
static std::vector<BigNat> sample_values(Rng& rng, size_t count, size_t max_bits) {
  std::vector<BigNat> out;
  out.push_back(BigNat());
  out.push_back(BigNat(1));
  for (size_t k = 1; k <= max_bits; k = k * 2 + 1) {
    out.push_back((BigNat(1) << k) - BigNat(1));
    out.push_back(BigNat(1) << k);
    out.push_back((BigNat(1) << k) + BigNat(1));
  }
  while (out.size() < count) out.push_back(random_bits(rng, 1 + rng.below(max_bits)));
  return out;
}

TEST_CASE("byte encoding round-trips and is minimal") {
  Rng rng(11);
  for (const BigNat& v : sample_values(rng, 200, 520)) {
    auto bytes = v.to_bytes_be();
    if (!v.is_zero()) CHECK(bytes.front() != 0);
    CHECK(BigNat::from_bytes_be(bytes.data(), bytes.size()) == v);
  }
  CHECK(BigNat().to_bytes_be().empty());
}

TEST_CASE("decimal io round-trips and matches the reference printer") {
  Rng rng(12);
  for (const BigNat& v : sample_values(rng, 150, 700)) {
    std::string s = v.to_decimal();
    CHECK(s == to_ref(v).str());
    CHECK(BigNat::from_decimal(s) == v);
  }
  CHECK(BigNat().to_decimal() == "0");
  CHECK(BigNat::from_decimal("0") == BigNat());
  CHECK(BigNat::from_decimal("00123") == BigNat(123));
  CHECK_THROWS_AS(BigNat::from_decimal(""), std::invalid_argument);
  CHECK_THROWS_AS(BigNat::from_decimal("12a3"), std::invalid_argument);
}

TEST_CASE("add sub mul shift against reference") {
  Rng rng(13);
  auto vals = sample_values(rng, 120, 600);
  for (size_t i = 0; i < vals.size(); i++) {
    const BigNat& a = vals[i];
    const BigNat& b = vals[(i * 7 + 3) % vals.size()];
    cpp_int ra = to_ref(a), rb = to_ref(b);
    CHECK(to_ref(a + b) == ra + rb);
    CHECK(to_ref(a * b) == ra * rb);
    if (a >= b) CHECK(to_ref(a - b) == ra - rb);
    size_t sh = (size_t)rng.below(130);
    CHECK(to_ref(a << sh) == ra << (unsigned)sh);
    CHECK(to_ref(a >> sh) == ra >> (unsigned)sh);
  }
}

TEST_CASE("divmod against reference with quotient correction shapes") {
  Rng rng(14);
  auto check_div = [](const BigNat& a, const BigNat& b) {
    auto r = divmod(a, b);
    CHECK(to_ref(r.quot) == to_ref(a) / to_ref(b));
    CHECK(to_ref(r.rem) == to_ref(a) % to_ref(b));
    CHECK(r.rem < b);
    CHECK(r.quot * b + r.rem == a);
  };
  // Limb patterns that force qhat overestimates and the add-back branch.
  u64 edge[] = {0, 1, 2, (u64)1 << 63, ((u64)1 << 63) + 1, ~(u64)0, ~(u64)0 - 1};
  for (u64 a1 : edge)
    for (u64 a0 : edge)
      for (u64 b1 : edge)
        for (u64 b0 : edge) {
          BigNat a = BigNat::from_limbs({a0, a1, 1});
          BigNat b = BigNat::from_limbs({b0, b1});
          if (b.is_zero()) continue;
          check_div(a, b);
        }
  for (int i = 0; i < 300; i++) {
    BigNat a = random_bits(rng, 1 + rng.below(700));
    BigNat b = random_bits(rng, 1 + rng.below(400));
    if (b.is_zero()) b = BigNat(1);
    check_div(a, b);
  }
  CHECK_THROWS_AS(divmod(BigNat(5), BigNat()), std::domain_error);
}

TEST_CASE("gcd lcm mod_inverse") {
  Rng rng(15);
  for (int i = 0; i < 120; i++) {
    BigNat a = random_bits(rng, 1 + rng.below(200));
    BigNat b = random_bits(rng, 1 + rng.below(200));
    CHECK(to_ref(gcd(a, b)) == boost::multiprecision::gcd(to_ref(a), to_ref(b)));
    CHECK(to_ref(lcm(a, b)) == boost::multiprecision::lcm(to_ref(a), to_ref(b)));
  }
  BigNat m = BigNat::from_decimal("170141183460469231731687303715884105727");  // 2^127 - 1
  for (int i = 0; i < 40; i++) {
    BigNat a = random_below(rng, m);
    if (a.is_zero()) continue;
    auto inv = mod_inverse(a, m);
    REQUIRE(inv.has_value());
    CHECK(mod(a * *inv, m) == BigNat(1));
  }
  CHECK(!mod_inverse(BigNat(6), BigNat(9)).has_value());
  CHECK(!mod_inverse(BigNat(), BigNat(9)).has_value());
  CHECK(mod_inverse(BigNat(3), BigNat(10)).value() == BigNat(7));
}

TEST_CASE("word barrett reduce matches divmod") {
  Rng rng(16);
  for (int i = 0; i < 60; i++) {
    BigNat m = random_bits(rng, 65 + rng.below(450));
    if (m < BigNat(2)) m = BigNat(2);
    auto ctx = WordBarrett::make(m);
    for (int j = 0; j < 20; j++) {
      BigNat a = random_below(rng, m * m);
      CHECK(ctx.reduce(a) == mod(a, m));
      BigNat x = random_below(rng, m), y = random_below(rng, m);
      CHECK(ctx.mul_mod(x, y) == mod(x * y, m));
    }
  }
}

TEST_CASE("windowed pow_mod matches square-and-multiply reference") {
  Rng rng(17);
  for (int i = 0; i < 25; i++) {
    BigNat m = random_bits(rng, 65 + rng.below(250));
    if (m < BigNat(2)) m = BigNat(2);
    for (int j = 0; j < 6; j++) {
      BigNat g = random_below(rng, m);
      BigNat e = random_bits(rng, rng.below(180));
      CHECK(pow_mod(g, e, m) == ref_pow_mod(g, e, m));
    }
  }
  // Small closed-form checks.
  CHECK(pow_mod(BigNat(2), BigNat(10), BigNat(1000)) == BigNat(24));
  CHECK(pow_mod(BigNat(7), BigNat(), BigNat(13)) == BigNat(1));
  CHECK(pow_mod(BigNat(), BigNat(5), BigNat(13)) == BigNat());
}

TEST_CASE("rng is reproducible and below() respects bounds") {
  Rng a(42), b(42), c(43);
  bool same = true, diff = false;
  for (int i = 0; i < 100; i++) {
    u64 x = a.next();
    same = same && (x == b.next());
    diff = diff || (x != c.next());
  }
  CHECK(same);
  CHECK(diff);
  Rng r(7);
  for (int i = 0; i < 2000; i++) {
    CHECK(r.below(10) < 10);
    double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("primality testing") {
  Rng rng(18);
  const char* primes[] = {"2", "3", "5", "97", "2305843009213693951",
                          "170141183460469231731687303715884105727"};
  for (const char* p : primes) CHECK(is_probable_prime(BigNat::from_decimal(p), rng));
  // Carmichael numbers and a strong pseudoprime to several small bases.
  const char* composites[] = {"1", "561", "41041", "3215031751", "25326001",
                              "2305843009213693953"};
  for (const char* c : composites) CHECK(!is_probable_prime(BigNat::from_decimal(c), rng));
  for (size_t bits : {16, 33, 64, 96}) {
    BigNat p = random_prime(rng, bits);
    CHECK(p.bit_length() == bits);
    Rng other(999);
    CHECK(is_probable_prime(p, other));
  }
}

TEST_CASE("to_double and small conversions") {
  CHECK(BigNat().to_double() == 0.0);
  CHECK(BigNat(123).to_double() == 123.0);
  CHECK(BigNat(123).to_u64() == 123);
  BigNat big = BigNat(1) << 100;
  CHECK(big.to_double() == doctest::Approx(std::pow(2.0, 100)).epsilon(1e-12));
  CHECK(BigNat::from_u128(((u128)1 << 100) + 55).to_u128() == ((u128)1 << 100) + 55);
}
