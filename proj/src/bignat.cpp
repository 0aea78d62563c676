#include "pcadmm/bignat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace pcadmm {

BigNat::BigNat(u64 v) {
  if (v) limbs_.push_back(v);
}

BigNat BigNat::from_u128(u128 v) {
  BigNat r;
  if (v) r.limbs_.push_back((u64)v);
  if (v >> 64) r.limbs_.push_back((u64)(v >> 64));
  return r;
}

BigNat BigNat::from_limbs(std::vector<u64> limbs) {
  BigNat r;
  r.limbs_ = std::move(limbs);
  r.normalize();
  return r;
}

void BigNat::normalize() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

size_t BigNat::bit_length() const {
  if (limbs_.empty()) return 0;
  return 64 * (limbs_.size() - 1) + (64 - __builtin_clzll(limbs_.back()));
}

bool BigNat::bit(size_t i) const {
  size_t w = i / 64;
  if (w >= limbs_.size()) return false;
  return (limbs_[w] >> (i % 64)) & 1;
}

u64 BigNat::to_u64() const {
  if (bit_length() > 64) throw std::overflow_error("BigNat::to_u64: too large");
  return limbs_.empty() ? 0 : limbs_[0];
}

u128 BigNat::to_u128() const {
  if (bit_length() > 128) throw std::overflow_error("BigNat::to_u128: too large");
  u128 v = 0;
  if (limbs_.size() > 1) v = ((u128)limbs_[1]) << 64;
  if (!limbs_.empty()) v |= limbs_[0];
  return v;
}

double BigNat::to_double() const {
  double v = 0;
  for (size_t i = limbs_.size(); i-- > 0;) v = v * 18446744073709551616.0 + (double)limbs_[i];
  return v;
}

int cmp(const BigNat& a, const BigNat& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

BigNat operator+(const BigNat& a, const BigNat& b) {
  BigNat r;
  const auto& x = a.limbs_;
  const auto& y = b.limbs_;
  size_t n = std::max(x.size(), y.size());
  r.limbs_.resize(n);
  u64 carry = 0;
  for (size_t i = 0; i < n; i++) {
    u128 s = (u128)carry;
    if (i < x.size()) s += x[i];
    if (i < y.size()) s += y[i];
    r.limbs_[i] = (u64)s;
    carry = (u64)(s >> 64);
  }
  if (carry) r.limbs_.push_back(carry);
  return r;
}

BigNat operator-(const BigNat& a, const BigNat& b) {
  if (cmp(a, b) < 0) throw std::underflow_error("BigNat subtraction underflow");
  BigNat r;
  r.limbs_.resize(a.limbs_.size());
  u64 borrow = 0;
  for (size_t i = 0; i < a.limbs_.size(); i++) {
    u128 bi = (i < b.limbs_.size() ? b.limbs_[i] : 0) + (u128)borrow;
    u128 ai = a.limbs_[i];
    if (ai >= bi) {
      r.limbs_[i] = (u64)(ai - bi);
      borrow = 0;
    } else {
      r.limbs_[i] = (u64)((((u128)1 << 64) + ai) - bi);
      borrow = 1;
    }
  }
  r.normalize();
  return r;
}

BigNat operator*(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return BigNat();
  BigNat r;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (size_t i = 0; i < a.limbs_.size(); i++) {
    u64 carry = 0;
    u64 ai = a.limbs_[i];
    for (size_t j = 0; j < b.limbs_.size(); j++) {
      u128 t = (u128)ai * b.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = (u64)t;
      carry = (u64)(t >> 64);
    }
    r.limbs_[i + b.limbs_.size()] += carry;
  }
  r.normalize();
  return r;
}

BigNat operator<<(const BigNat& a, size_t bits) {
  if (a.is_zero()) return BigNat();
  size_t words = bits / 64, rem = bits % 64;
  BigNat r;
  r.limbs_.assign(a.limbs_.size() + words + 1, 0);
  for (size_t i = 0; i < a.limbs_.size(); i++) {
    r.limbs_[i + words] |= rem ? (a.limbs_[i] << rem) : a.limbs_[i];
    if (rem) r.limbs_[i + words + 1] |= a.limbs_[i] >> (64 - rem);
  }
  r.normalize();
  return r;
}

BigNat operator>>(const BigNat& a, size_t bits) {
  size_t words = bits / 64, rem = bits % 64;
  if (words >= a.limbs_.size()) return BigNat();
  BigNat r;
  r.limbs_.assign(a.limbs_.size() - words, 0);
  for (size_t i = 0; i < r.limbs_.size(); i++) {
    r.limbs_[i] = rem ? (a.limbs_[i + words] >> rem) : a.limbs_[i + words];
    if (rem && i + words + 1 < a.limbs_.size())
      r.limbs_[i] |= a.limbs_[i + words + 1] << (64 - rem);
  }
  r.normalize();
  return r;
}

// Knuth algorithm D with 64-bit limbs and 128-bit trial quotients.
DivModResult divmod(const BigNat& a, const BigNat& b) {
  if (b.is_zero()) throw std::domain_error("BigNat division by zero");
  if (cmp(a, b) < 0) return {BigNat(), a};
  if (b.limbs().size() == 1) {
    u64 d = b.limbs()[0];
    std::vector<u64> q(a.limbs().size());
    u128 rem = 0;
    for (size_t i = a.limbs().size(); i-- > 0;) {
      u128 cur = (rem << 64) | a.limbs()[i];
      q[i] = (u64)(cur / d);
      rem = cur % d;
    }
    return {BigNat::from_limbs(std::move(q)), BigNat((u64)rem)};
  }

  // Normalize so the top divisor limb has its high bit set.
  size_t shift = __builtin_clzll(b.limbs().back());
  BigNat u = a << shift;
  BigNat v = b << shift;
  size_t n = v.limbs().size();
  size_t m = u.limbs().size() - n;
  std::vector<u64> un(u.limbs());
  un.push_back(0);  // u has m+n+1 limbs during the loop
  const std::vector<u64>& vn = v.limbs();
  std::vector<u64> q(m + 1, 0);

  for (size_t j = m + 1; j-- > 0;) {
    u128 top = ((u128)un[j + n] << 64) | un[j + n - 1];
    u128 qhat = top / vn[n - 1];
    u128 rhat = top % vn[n - 1];
    while (qhat >= ((u128)1 << 64) ||
           qhat * vn[n - 2] > ((rhat << 64) | un[j + n - 2])) {
      qhat--;
      rhat += vn[n - 1];
      if (rhat >= ((u128)1 << 64)) break;
    }
    // Multiply and subtract qhat * v from u[j .. j+n].
    u128 borrow = 0, carry = 0;
    for (size_t i = 0; i < n; i++) {
      u128 p = qhat * vn[i] + carry;
      carry = p >> 64;
      u128 sub = (u128)un[i + j] - (u64)p - borrow;
      un[i + j] = (u64)sub;
      borrow = (sub >> 64) ? 1 : 0;
    }
    u128 sub = (u128)un[j + n] - carry - borrow;
    un[j + n] = (u64)sub;
    if (sub >> 64) {
      // qhat was one too large: add v back.
      qhat--;
      u128 c2 = 0;
      for (size_t i = 0; i < n; i++) {
        u128 s = (u128)un[i + j] + vn[i] + c2;
        un[i + j] = (u64)s;
        c2 = s >> 64;
      }
      un[j + n] = (u64)(un[j + n] + c2);
    }
    q[j] = (u64)qhat;
  }

  un.resize(n);
  BigNat rem = BigNat::from_limbs(std::move(un)) >> shift;
  return {BigNat::from_limbs(std::move(q)), rem};
}

BigNat mod(const BigNat& a, const BigNat& m) { return divmod(a, m).rem; }

BigNat gcd(BigNat a, BigNat b) {
  while (!b.is_zero()) {
    BigNat r = mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

BigNat lcm(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return BigNat();
  return divmod(a * b, gcd(a, b)).quot;
}

std::optional<BigNat> mod_inverse(const BigNat& a, const BigNat& m) {
  // Extended Euclid tracking only the coefficient of a, with signs handled
  // explicitly since BigNat is unsigned.
  BigNat r0 = m, r1 = mod(a, m);
  BigNat t0, t1(1);
  bool neg0 = false, neg1 = false;
  while (!r1.is_zero()) {
    auto dm = divmod(r0, r1);
    BigNat qt = dm.quot * t1;
    // t2 = t0 - q*t1 in signed arithmetic
    BigNat t2;
    bool neg2;
    if (neg0 == neg1) {
      if (cmp(t0, qt) >= 0) {
        t2 = t0 - qt;
        neg2 = neg0;
      } else {
        t2 = qt - t0;
        neg2 = !neg0;
      }
    } else {
      t2 = t0 + qt;
      neg2 = neg0;
    }
    r0 = r1;
    r1 = dm.rem;
    t0 = t1;
    neg0 = neg1;
    t1 = t2;
    neg1 = neg2;
  }
  if (!(r0 == BigNat(1))) return std::nullopt;
  if (neg0) return m - mod(t0, m);
  return mod(t0, m);
}

WordBarrett WordBarrett::make(const BigNat& m) {
  if (m.is_zero()) throw std::domain_error("Barrett modulus is zero");
  WordBarrett ctx;
  ctx.m = m;
  ctx.k = m.limbs().size();
  ctx.nu = divmod(BigNat(1) << (128 * ctx.k), m).quot;
  return ctx;
}

BigNat WordBarrett::reduce(const BigNat& a) const {
  if (a.limbs().size() > 2 * k) throw std::domain_error("Barrett input too wide");
  if (cmp(a, m) < 0) return a;
  BigNat q = (a * nu) >> (128 * k);
  BigNat r = a - q * m;
  while (cmp(r, m) >= 0) r = r - m;
  return r;
}

BigNat WordBarrett::mul_mod(const BigNat& a, const BigNat& b) const {
  return reduce(a * b);
}

BigNat pow_mod(const BigNat& base, const BigNat& exp, const WordBarrett& ctx) {
  if (ctx.m == BigNat(1)) return BigNat();
  BigNat b = cmp(base, ctx.m) >= 0 ? mod(base, ctx.m) : base;
  size_t ebits = exp.bit_length();
  if (ebits == 0) return BigNat(1);

  // Fixed 4-bit windows, scanned from the top.
  constexpr size_t W = 4;
  BigNat table[1u << W];
  table[0] = BigNat(1);
  table[1] = b;
  for (size_t i = 2; i < (1u << W); i++) table[i] = ctx.mul_mod(table[i - 1], b);

  size_t nwin = (ebits + W - 1) / W;
  BigNat acc(1);
  for (size_t w = nwin; w-- > 0;) {
    if (w != nwin - 1)
      for (size_t s = 0; s < W; s++) acc = ctx.mul_mod(acc, acc);
    u32 chunk = 0;
    for (size_t s = 0; s < W; s++) {
      size_t idx = w * W + s;
      if (idx < ebits && exp.bit(idx)) chunk |= 1u << s;
    }
    if (chunk) acc = ctx.mul_mod(acc, table[chunk]);
  }
  return acc;
}

BigNat pow_mod(const BigNat& base, const BigNat& exp, const BigNat& m) {
  return pow_mod(base, exp, WordBarrett::make(m));
}

BigNat BigNat::from_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal string");
  BigNat r;
  size_t i = 0;
  // Chunks of 19 digits fit a u64 multiplier of 10^19.
  while (i < s.size()) {
    size_t take = std::min<size_t>(19, s.size() - i);
    u64 chunk = 0, scale = 1;
    for (size_t j = 0; j < take; j++) {
      char c = s[i + j];
      if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
      chunk = chunk * 10 + (c - '0');
      scale *= 10;
    }
    r = r * BigNat(scale) + BigNat(chunk);
    i += take;
  }
  return r;
}

std::string BigNat::to_decimal() const {
  if (is_zero()) return "0";
  std::string out;
  BigNat cur = *this;
  BigNat base((u64)10000000000000000000ull);  // 10^19
  while (!cur.is_zero()) {
    auto dm = divmod(cur, base);
    u64 chunk = dm.rem.is_zero() ? 0 : dm.rem.limbs()[0];
    cur = dm.quot;
    for (int j = 0; j < 19; j++) {
      out.push_back('0' + (char)(chunk % 10));
      chunk /= 10;
    }
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  std::reverse(out.begin(), out.end());
  return out;
}

BigNat BigNat::from_bytes_be(const uint8_t* data, size_t len) {
  BigNat r;
  r.limbs_.assign((len + 7) / 8, 0);
  for (size_t i = 0; i < len; i++) {
    size_t bit = 8 * (len - 1 - i);
    r.limbs_[bit / 64] |= (u64)data[i] << (bit % 64);
  }
  r.normalize();
  return r;
}

std::vector<uint8_t> BigNat::to_bytes_be() const {
  if (is_zero()) return {};
  size_t nbytes = (bit_length() + 7) / 8;
  std::vector<uint8_t> out(nbytes);
  for (size_t i = 0; i < nbytes; i++) {
    size_t bit = 8 * (nbytes - 1 - i);
    out[i] = (uint8_t)(limbs_[bit / 64] >> (bit % 64));
  }
  return out;
}

u64 Rng::next() {
  // splitmix64
  u64 z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

u64 Rng::below(u64 bound) {
  // Rejection sampling on the top bits to avoid modulo bias.
  u64 mask = bound <= 1 ? 0 : (~0ull >> __builtin_clzll(bound - 1));
  if (bound <= 1) return 0;
  for (;;) {
    u64 v = next() & mask;
    if (v < bound) return v;
  }
}

double Rng::unit() { return (double)(next() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  double u1 = unit(), u2 = unit();
  while (u1 <= 0) u1 = unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

void wire_put(std::vector<uint8_t>& out, const BigNat& v) {
  std::vector<uint8_t> bytes = v.to_bytes_be();
  for (int s = 24; s >= 0; s -= 8) out.push_back((uint8_t)(bytes.size() >> s));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

BigNat wire_get(const std::vector<uint8_t>& data, size_t& off) {
  if (off + 4 > data.size()) throw std::runtime_error("truncated integer field");
  size_t len = 0;
  for (int i = 0; i < 4; i++) len = (len << 8) | data[off + i];
  off += 4;
  if (len > data.size() - off) throw std::runtime_error("truncated integer field");
  BigNat v = BigNat::from_bytes_be(data.data() + off, len);
  off += len;
  return v;
}

BigNat random_bits(Rng& rng, size_t bits) {
  std::vector<u64> limbs((bits + 63) / 64);
  for (auto& l : limbs) l = rng.next();
  if (bits % 64) limbs.back() &= ~0ull >> (64 - bits % 64);
  return BigNat::from_limbs(std::move(limbs));
}

BigNat random_below(Rng& rng, const BigNat& bound) {
  if (bound.is_zero()) throw std::domain_error("random_below: zero bound");
  size_t bits = bound.bit_length();
  for (;;) {
    BigNat v = random_bits(rng, bits);
    if (cmp(v, bound) < 0) return v;
  }
}

namespace {
constexpr u32 kSmallPrimes[] = {
    3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127,
    131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
    211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283,
    293, 307, 311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383,
    389, 397, 401, 409, 419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467,
    479, 487, 491, 499, 503, 509, 521, 523, 541};
}

bool is_probable_prime(const BigNat& n, Rng& rng, int rounds) {
  if (n.bit_length() <= 6) {
    u64 v = n.is_zero() ? 0 : n.to_u64();
    if (v < 2) return false;
    for (u64 d = 2; d * d <= v; d++)
      if (v % d == 0) return false;
    return true;
  }
  if (!n.is_odd()) return false;
  for (u32 p : kSmallPrimes) {
    if (mod(n, BigNat(p)).is_zero()) return n == BigNat(p);
  }
  // n - 1 = d * 2^s
  BigNat nm1 = n - BigNat(1);
  size_t s = 0;
  BigNat d = nm1;
  while (!d.is_odd()) {
    d = d >> 1;
    s++;
  }
  WordBarrett ctx = WordBarrett::make(n);
  BigNat two(2);
  for (int r = 0; r < rounds; r++) {
    BigNat a = random_below(rng, n - BigNat(3)) + two;  // a in [2, n-2]
    BigNat x = pow_mod(a, d, ctx);
    if (x == BigNat(1) || x == nm1) continue;
    bool witness = true;
    for (size_t i = 0; i + 1 < s; i++) {
      x = ctx.mul_mod(x, x);
      if (x == nm1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

BigNat random_prime(Rng& rng, size_t bits, int mr_rounds) {
  if (bits < 2) throw std::domain_error("random_prime: need >= 2 bits");
  for (;;) {
    BigNat cand = random_bits(rng, bits);
    // Force top bit (exact width) and bottom bit (odd).
    std::vector<u64> limbs = cand.limbs();
    limbs.resize((bits + 63) / 64, 0);
    limbs[(bits - 1) / 64] |= 1ull << ((bits - 1) % 64);
    limbs[0] |= 1;
    cand = BigNat::from_limbs(std::move(limbs));
    // March upward in steps of 2 for a while before redrawing; keeps the
    // search deterministic for a given rng state.
    for (int step = 0; step < 64; step++) {
      if (is_probable_prime(cand, rng, mr_rounds)) return cand;
      cand += BigNat(2);
      if (cand.bit_length() != bits) break;
    }
  }
}

}  // namespace pcadmm
