#pragma once

#include <string>
#include <vector>

#include "pcadmm/powergrid.hpp"

namespace pcadmm {

enum class ExpKind {
  quant_loss,      // update loss against the resolution sweep
  mse_compare,     // encrypted vs plaintext distributed error curves
  sparsity_sweep,  // error ordering across sparsity and node counts
  throughput,      // modular-arithmetic operation rates vs key length
  latency,         // phase breakdown and per-iteration waits
  power_grid,      // line detection, clear vs encrypted
};

enum class CarrierKind { sim, tcp };

struct Experiment {
  ExpKind kind = ExpKind::quant_loss;
  int m = 100, n = 900, k = 3;
  double sparsity = 0.1;  // nonzero fraction of the planted truth
  double delta = 1e15;
  size_t key_bits = 2048;
  u64 seed = 1;
  int iters = 100;
  ProtocolVariant variant = ProtocolVariant::basic;
  CarrierKind carrier = CarrierKind::sim;
  double link_ms = 10.0;  // injected one-way delay, latency runs only
  std::string out_dir;    // empty: compute only, write nothing
};

struct Problem {
  Mat a;
  Vec y;
};

// Standard-normal design, planted standard-normal truth with
// ceil(sparsity * n) nonzero entries at distinct positions, y = A x_true
// exactly (noise is the caller's business).
Problem gen_gaussian_problem(int m, int n, double sparsity, u64 seed,
                             Vec* x_true = nullptr);

// One table per experiment: a series label per row plus named double cells.
struct MetricTable {
  std::vector<std::string> columns;  // cell names, the label column excluded
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::string manifest;  // the exact config as JSON, nothing clock-derived
};

MetricTable run_experiment(const Experiment& e);

// Operation rates for one key length, each number the mean over `repeats`
// timed batches of `samples` operations. Plaintexts are uniform below n,
// arithmetic is modulo n^2; serialization is outside every timed region.
struct OpsRate {
  double mod_mult = 0.0;   // products per second
  double mod_exp = 0.0;    // full-width exponentiations per second
  double ep_direct = 0.0;  // encryptions per second, direct form
  double ep_crt = 0.0;     // encryptions per second, split form
};
OpsRate throughput_rates(size_t key_bits, int samples, int repeats, u64 seed);

// Writes <stem>.csv and <stem>.json under dir, creating it if missing;
// returns the CSV path. Cells print as %.17g, so equal tables give equal
// bytes.
std::string write_table(const MetricTable& t, const std::string& dir,
                        const std::string& stem);

}  // namespace pcadmm
