#pragma once

#include <stdexcept>
#include <vector>

#include "pcadmm/admm.hpp"
#include "pcadmm/paillier.hpp"
#include "pcadmm/quantize.hpp"
#include "pcadmm/transport.hpp"

namespace pcadmm {

// basic: the master encrypts and decrypts everything itself (split CRT form
// when use_crt is set). collaborative: the edges additionally compute the
// p^2-side powers for the master, from masked exponents, so the master does
// only the q^2 sides and the recombinations.
enum class ProtocolVariant { basic, collaborative };

// fresh: new randomness r per encryption. pooled: a small set of r^n
// residues is precomputed once and cycled, which trades randomness reuse
// for skipping the r exponentiations entirely.
enum class RandomnessMode { fresh, pooled };

struct SessionConfig {
  ProtocolVariant variant = ProtocolVariant::basic;
  YScaling y_scaling = YScaling::full;
  RandomnessMode r_mode = RandomnessMode::fresh;
  int nodes = 3;
  int iters = 100;
  double rho = 1.0;
  double lambda = 1.0;
  QuantSpec quant;                // session window, set from a bounds prerun
  Engine engine = Engine::packed;
  bool use_crt = true;            // master arithmetic in the basic variant
  unsigned matvec_window = 6;     // edge-side multi-exponentiation window
  unsigned mask_bits = 64;        // exponent mask width; 0 disables masking
  int pool_size = 16;             // precomputed r^n residues in pooled mode
  double timeout_s = 30.0;
  uint16_t session_id = 1;
  u64 seed = 1;
};

struct RoleStats {
  OpCount ops;              // Paillier exponentiation counters for the role
  u64 delegated_pows = 0;   // edge-side masked exponentiations (collab only)
};

struct SessionResult {
  Vec x, z, v;                    // final iterates, concatenated block order
  std::vector<double> objective;  // on z per iteration, full problem
  std::vector<Vec> x_trace;       // decrypted x per iteration
  RoleStats master;
  std::vector<RoleStats> edges;         // index: edge id - 1
  u64 clamps = 0;                       // quantizer clamp events, all roles
  u64 frames = 0, bytes = 0;            // total traffic
  double wall_s = 0.0;
  // Master-side phase accounting. The pre phase runs from loop entry through
  // the randomness pool; each iteration splits into time blocked on the
  // carrier and the local remainder. t_master_s spans the whole loop, so
  // t_pre_s + sum(t_loc_s + t_comm_s) reproduces it up to allocator noise.
  double t_pre_s = 0.0;
  double t_master_s = 0.0;
  std::vector<double> t_loc_s, t_comm_s;
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Masked exponent for delegation: value + mask * (n * eps). Any multiple of
// n * eps is killed both by g^x mod n^2 (the order of the unit group divides
// n * eps) and by reduction mod phi(p^2) (which divides n * eps), so the
// delegated power is exact. The same divisibility means the mask hides the
// value only from parties without the p^2 share: reducing mod phi(p^2), or
// even mod n, recovers it. That residual exposure is inherent to the
// additive mask and is asserted in tests rather than glossed over.
BigNat obfuscate_exponent(const BigNat& value, const BigNat& n_eps, u64 mask);

// Edge-side worker for one delegated power: base^(obf mod phi_p2) mod p^2.
BigNat delegated_power(const BigNat& base, const BigNat& obf,
                       const CrtShare& share, const WordBarrett& p2_ctx);

// Master-side gate on a decrypted combined update. A value past the largest
// integer the quantized recurrence can produce means a corrupted or forged
// ciphertext; it must not reach the double conversion.
void check_update_range(const BigNat& q, const QuantSpec& s, size_t cols);

// Plaintext rehearsal that picks the session window: runs the block
// recurrence in the clear and widens the observed extremes of everything the
// session will quantize (node factors, z, -v; zero is always included for
// the initial state).
QuantSpec session_bounds(const Mat& a, const Vec& y, const AdmmOptions& opt,
                         const std::vector<int>& cols_per_node,
                         YScaling scaling, double margin, double delta);

// Runs one full session over the carrier: master on the calling thread as
// endpoint 0, one thread per edge as endpoints 1..K. The column blocks of A
// stay on their edges; the master only ever sees ciphertexts, integer row
// sums and block shapes. Throws TimeoutError or ProtocolError on failure,
// after the worker threads are joined.
SessionResult run_session(const Mat& a, const Vec& y, const KeyPair& keys,
                          const SessionConfig& cfg, Carrier& carrier,
                          MessageLog* log = nullptr);

}  // namespace pcadmm
