#include "pcadmm/powergrid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pcadmm/transport.hpp"

namespace pcadmm {

namespace {

// Descending score order with tied scores adjacent.
std::vector<size_t> rank_order(const std::vector<double>& scores,
                               const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("score and label lengths differ");
  if (scores.empty()) throw std::invalid_argument("empty ranking");
  std::vector<size_t> ord(scores.size());
  std::iota(ord.begin(), ord.end(), (size_t)0);
  std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });
  return ord;
}

}  // namespace

double auroc(const std::vector<double>& scores,
             const std::vector<int>& labels) {
  std::vector<size_t> ord = rank_order(scores, labels);
  u64 pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  u64 neg = (u64)labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("ranking needs both classes");

  double area = 0.0;  // in units of (true pos) x (false pos)
  u64 tp = 0;
  size_t i = 0;
  while (i < ord.size()) {
    size_t j = i;
    u64 dt = 0, df = 0;
    while (j < ord.size() && scores[ord[j]] == scores[ord[i]]) {
      (labels[ord[j]] ? dt : df)++;
      j++;
    }
    area += (double)df * ((double)tp + (double)dt / 2.0);
    tp += dt;
    i = j;
  }
  return area / ((double)pos * (double)neg);
}

double auprc(const std::vector<double>& scores,
             const std::vector<int>& labels) {
  std::vector<size_t> ord = rank_order(scores, labels);
  u64 pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  if (pos == 0) throw std::invalid_argument("ranking needs a positive label");

  double ap = 0.0;
  u64 tp = 0, fp = 0;
  size_t i = 0;
  while (i < ord.size()) {
    size_t j = i;
    u64 dt = 0, df = 0;
    while (j < ord.size() && scores[ord[j]] == scores[ord[i]]) {
      (labels[ord[j]] ? dt : df)++;
      j++;
    }
    tp += dt;
    fp += df;
    if (dt) ap += ((double)dt / (double)pos) * ((double)tp / (double)(tp + fp));
    i = j;
  }
  return ap;
}

GridCase make_grid(int buses, int degree, double rewire_p, int samples,
                   double noise_sd, Rng& rng) {
  if (buses < 3) throw std::invalid_argument("need at least three buses");
  if (degree < 2 || degree >= buses)
    throw std::invalid_argument("degree out of range");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (rewire_p < 0.0 || rewire_p > 1.0)
    throw std::invalid_argument("rewire probability out of range");
  int half = (degree + 1) / 2;  // lattice neighbours per side

  for (int attempt = 0; attempt < 64; attempt++) {
    std::vector<std::vector<char>> adj(
        (size_t)buses, std::vector<char>((size_t)buses, 0));
    for (int i = 0; i < buses; i++) {
      for (int d = 1; d <= half; d++) {
        int to = (i + d) % buses;
        if (rng.unit() < rewire_p) {
          // Re-aim at a uniform bus; a full neighbourhood just keeps the
          // lattice link.
          for (int tries = 0; tries < 32; tries++) {
            int cand = (int)rng.below((u64)buses);
            if (cand != i && !adj[(size_t)i][(size_t)cand]) {
              to = cand;
              break;
            }
          }
        }
        if (to != i && !adj[(size_t)i][(size_t)to])
          adj[(size_t)i][(size_t)to] = adj[(size_t)to][(size_t)i] = 1;
      }
    }

    // Rewiring can strand a component; a disconnected draw is discarded.
    std::vector<char> seen((size_t)buses, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int at = stack.back();
      stack.pop_back();
      for (int j = 0; j < buses; j++)
        if (adj[(size_t)at][(size_t)j] && !seen[(size_t)j]) {
          seen[(size_t)j] = 1;
          reached++;
          stack.push_back(j);
        }
    }
    if (reached < buses) continue;

    GridCase g;
    g.buses = buses;
    g.conductance = Mat::Zero(buses, buses);
    for (int i = 0; i < buses; i++)
      for (int j = i + 1; j < buses; j++)
        if (adj[(size_t)i][(size_t)j])
          g.conductance(i, j) = g.conductance(j, i) = 0.5 + 1.5 * rng.unit();

    g.volts = Mat(samples, buses);
    for (int t = 0; t < samples; t++)
      for (int i = 0; i < buses; i++) g.volts(t, i) = rng.gaussian();

    // Injections are the weighted Laplacian image of the voltages.
    Mat lap = Mat(g.conductance.rowwise().sum().asDiagonal()) - g.conductance;
    g.inject = g.volts * lap;
    if (noise_sd > 0.0)
      for (int t = 0; t < samples; t++)
        for (int i = 0; i < buses; i++)
          g.inject(t, i) += noise_sd * rng.gaussian();
    return g;
  }
  throw std::runtime_error("could not draw a connected network");
}

Mat drop_matrix(const GridCase& g, int bus) {
  if (bus < 0 || bus >= g.buses) throw std::invalid_argument("no such bus");
  Mat phi(g.volts.rows(), g.buses);
  for (int j = 0; j < g.buses; j++)
    phi.col(j) = g.volts.col(bus) - g.volts.col(j);
  return phi;
}

Mat recover_rows(const GridCase& g, const AdmmOptions& opt, int nodes) {
  Mat rows(g.buses, g.buses);
  std::vector<int> sizes = split_columns(g.buses, nodes);
  for (int i = 0; i < g.buses; i++) {
    AdmmResult r =
        lasso_admm_split(drop_matrix(g, i), Vec(g.inject.col(i)), opt, sizes);
    rows.row(i) = r.z.transpose();
  }
  return rows;
}

Mat recover_rows_encrypted(const GridCase& g, const AdmmOptions& opt,
                           const KeyPair& keys, const SessionConfig& base) {
  Mat rows(g.buses, g.buses);
  std::vector<int> sizes = split_columns(g.buses, base.nodes);
  for (int i = 0; i < g.buses; i++) {
    Mat a = drop_matrix(g, i);
    Vec y = g.inject.col(i);
    SessionConfig cfg = base;
    cfg.rho = opt.rho;
    cfg.lambda = opt.lambda;
    cfg.iters = opt.iters;
    cfg.quant = session_bounds(a, y, opt, sizes, cfg.y_scaling, 1.5,
                               base.quant.delta);
    cfg.session_id = (uint16_t)(base.session_id + i);
    cfg.seed = base.seed ^ (0x677269646275736cull * (u64)(i + 1));
    SimCarrier net(cfg.nodes + 1);
    rows.row(i) = run_session(a, y, keys, cfg, net).z.transpose();
  }
  return rows;
}

void pair_scores(const GridCase& g, const Mat& rows, std::vector<double>& out,
                 std::vector<int>& labels) {
  out.clear();
  labels.clear();
  for (int i = 0; i < g.buses; i++)
    for (int j = i + 1; j < g.buses; j++) {
      out.push_back(0.5 * (std::abs(rows(i, j)) + std::abs(rows(j, i))));
      labels.push_back(g.conductance(i, j) != 0.0 ? 1 : 0);
    }
}

}  // namespace pcadmm
