#pragma once

#include <vector>

#include "pcadmm/admm.hpp"
#include "pcadmm/bignat.hpp"
#include "pcadmm/protocol.hpp"

namespace pcadmm {

// Area under the ROC curve for scored binary labels, trapezoid rule with
// tied scores collapsed into a single step. Throws unless both classes
// occur; a one-class ranking has no curve.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

// Average precision (step interpolation), ties collapsed the same way.
// Throws when there is no positive label to rank.
double auprc(const std::vector<double>& scores, const std::vector<int>& labels);

// Synthetic monitoring scene: buses on a rewired ring lattice, one positive
// conductance per line, i.i.d. standard-normal voltage samples and the bus
// injection series they induce.
struct GridCase {
  int buses = 0;
  Mat conductance;  // buses x buses, symmetric, zero diagonal and off lines
  Mat volts;        // samples x buses
  Mat inject;       // samples x buses, row t from volts row t
};

// degree nearest neighbours on the ring (odd values round up to the next
// even lattice), each link re-aimed with probability rewire_p; draws again
// until the network is connected. noise_sd perturbs the injections only.
GridCase make_grid(int buses, int degree, double rewire_p, int samples,
                   double noise_sd, Rng& rng);

// The regression the monitor at bus i faces: column j is the voltage drop
// series toward bus j (identically zero at j = i), the target is the
// injection series at i.
Mat drop_matrix(const GridCase& g, int bus);

// Sparse recovery of every conductance row in the clear, one column-split
// solve per bus. Row i of the result estimates conductance row i.
Mat recover_rows(const GridCase& g, const AdmmOptions& opt, int nodes);

// Same recovery with each per-bus solve running as an encrypted session on
// a fresh in-process carrier. The quantization window is rehearsed per bus;
// base supplies everything else (delta, nodes, variant, keys aside).
Mat recover_rows_encrypted(const GridCase& g, const AdmmOptions& opt,
                           const KeyPair& keys, const SessionConfig& base);

// One score per bus pair i < j: the two directed estimates averaged after
// absolute value. labels marks the pairs that are real lines.
void pair_scores(const GridCase& g, const Mat& rows, std::vector<double>& out,
                 std::vector<int>& labels);

}  // namespace pcadmm
