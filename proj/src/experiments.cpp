#include "pcadmm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pcadmm {

namespace {

using SClock = std::chrono::steady_clock;

double secs_since(SClock::time_point t0) {
  return std::chrono::duration<double>(SClock::now() - t0).count();
}

const char* kind_name(ExpKind k) {
  switch (k) {
    case ExpKind::quant_loss: return "quant_loss";
    case ExpKind::mse_compare: return "mse_compare";
    case ExpKind::sparsity_sweep: return "sparsity_sweep";
    case ExpKind::throughput: return "throughput";
    case ExpKind::latency: return "latency";
    case ExpKind::power_grid: return "power_grid";
  }
  return "?";
}

std::string manifest_json(const Experiment& e) {
  nlohmann::json j;
  j["kind"] = kind_name(e.kind);
  j["m"] = e.m;
  j["n"] = e.n;
  j["k"] = e.k;
  j["sparsity"] = e.sparsity;
  j["delta"] = e.delta;
  j["key_bits"] = e.key_bits;
  j["seed"] = e.seed;
  j["iters"] = e.iters;
  j["variant"] =
      e.variant == ProtocolVariant::collaborative ? "collab" : "basic";
  j["carrier"] = e.carrier == CarrierKind::tcp ? "tcp" : "sim";
  j["link_ms"] = e.link_ms;
  j["out_dir"] = e.out_dir;
  return j.dump(2);
}

void require_dims(const Experiment& e) {
  if (e.m < 1 || e.n < 1 || e.k < 1)
    throw std::invalid_argument("dimensions must be positive");
  if (e.iters < 1) throw std::invalid_argument("need at least one iteration");
  if (!(e.sparsity > 0.0) || e.sparsity > 1.0)
    throw std::invalid_argument("sparsity must be in (0, 1]");
}

KeyPair exp_keys(const Experiment& e, GMode gmode) {
  Rng rng(e.seed ^ 0x6b657967656e2e2eull);
  return keygen(rng, e.key_bits, gmode);
}

// Per-iteration update loss of the quantized integer path against the exact
// recurrence it shadows: both see the same z and v each step, so the
// quantizer is the only error source. The reference math runs in long
// double; at delta = 1e15 the loss sits at the double rounding floor and a
// double-precision reference would measure its own noise instead.
struct LossStats {
  double mean = 0.0, max = 0.0;
};

LossStats update_loss(const Problem& pr, const QuantSpec& spec,
                      const AdmmOptions& opt) {
  int n = (int)pr.a.cols();
  NodeFactor fac = node_factor(pr.a, pr.y, opt, 1, YScaling::full);
  std::vector<double> alpha(fac.alpha.data(), fac.alpha.data() + n);
  std::vector<u128> q_alpha = gamma1_vec(alpha, spec);
  std::vector<std::vector<u64>> q_b((size_t)n);
  std::vector<u64> rowsum((size_t)n, 0);
  for (int i = 0; i < n; i++) {
    std::vector<double> row((size_t)n);
    for (int j = 0; j < n; j++) row[(size_t)j] = fac.b_bar(i, j);
    q_b[(size_t)i] = gamma2_vec(row, spec);
    for (u64 c : q_b[(size_t)i]) rowsum[(size_t)i] += c;
  }

  long double step = (long double)spec.range() / (long double)spec.delta;
  long double step2 = step * step;
  long double zmin = (long double)spec.z_min;
  long double kappa = (long double)(opt.lambda / opt.rho);

  std::vector<long double> z((size_t)n, 0.0L), v((size_t)n, 0.0L);
  std::vector<long double> xd((size_t)n);
  LossStats ls;
  u64 count = 0;
  for (int t = 0; t < opt.iters; t++) {
    // The quantizer sees doubles, exactly as the session would.
    std::vector<double> zd((size_t)n), nvd((size_t)n);
    for (int i = 0; i < n; i++) {
      zd[(size_t)i] = (double)z[(size_t)i];
      nvd[(size_t)i] = (double)-v[(size_t)i];
    }
    std::vector<u64> q_z = gamma2_vec(zd, spec);
    std::vector<u64> q_nv = gamma2_vec(nvd, spec);
    std::vector<u128> q = combined_quantized_update(q_alpha, q_b, q_z, q_nv);

    long double sum_zv = 0.0L;
    for (int j = 0; j < n; j++)
      sum_zv += 2.0L * zmin +
                step * (long double)(q_z[(size_t)j] + q_nv[(size_t)j]);

    for (int i = 0; i < n; i++) {
      xd[(size_t)i] = (long double)fac.alpha[i];
      for (int j = 0; j < n; j++)
        xd[(size_t)i] += (long double)fac.b_bar(i, j) *
                         (z[(size_t)j] - v[(size_t)j]);
      long double rowsum_b =
          (long double)n * zmin + step * (long double)rowsum[(size_t)i];
      long double xq = (long double)q[(size_t)i] * step2 +
                       zmin * (1.0L + 2.0L * rowsum_b + sum_zv) -
                       2.0L * zmin * zmin * (long double)n;
      double d = (double)fabsl(xq - xd[(size_t)i]);
      ls.mean += d;
      if (d > ls.max) ls.max = d;
      count++;
    }
    for (int i = 0; i < n; i++) {
      long double xv = xd[(size_t)i] + v[(size_t)i];
      long double zn =
          xv > kappa ? xv - kappa : (xv < -kappa ? xv + kappa : 0.0L);
      v[(size_t)i] = xv - zn;
      z[(size_t)i] = zn;
    }
  }
  ls.mean /= (double)count;
  return ls;
}

MetricTable run_quant_loss(const Experiment& e) {
  MetricTable t;
  t.columns = {"delta",    "model_loss", "mean_loss",
               "max_loss", "window",     "norm_ratio"};
  AdmmOptions opt{1.0, 1.0, 20};
  Problem pr = gen_gaussian_problem(3, 3, 1.0, e.seed, nullptr);
  for (double delta : {1e5, 1e7, 1e9, 1e11, 1e13, 1e15}) {
    QuantSpec spec =
        session_bounds(pr.a, pr.y, opt, {3}, YScaling::full, 1.5, delta);
    LossStats ls = update_loss(pr, spec, opt);
    double model = 1.0 / (10.0 * delta);
    // Loss scales with the session window; per window unit it tracks the
    // 1/(10 delta) decade line.
    t.labels.push_back("loss");
    t.rows.push_back({delta, model, ls.mean, ls.max, spec.range(),
                      ls.mean / spec.range() / model});
  }
  return t;
}

MetricTable run_mse_compare(const Experiment& e) {
  Vec x_true;
  Problem pr = gen_gaussian_problem(e.m, e.n, e.sparsity, e.seed, &x_true);
  std::vector<int> sizes = split_columns(e.n, e.k);
  AdmmOptions opt{1.0, 1.0, e.iters};

  AdmmResult plain = lasso_admm_split(pr.a, pr.y, opt, sizes);

  SessionConfig cfg;
  cfg.variant = e.variant;
  cfg.nodes = e.k;
  cfg.iters = e.iters;
  cfg.seed = e.seed;
  cfg.timeout_s = 3600.0;  // desk-scale full-key iterations are slow
  cfg.quant =
      session_bounds(pr.a, pr.y, opt, sizes, YScaling::full, 1.5, e.delta);
  KeyPair keys = exp_keys(e, GMode::binomial);

  SessionResult enc;
  if (e.carrier == CarrierKind::tcp) {
    auto net = TcpCarrier::loopback(e.k);
    enc = run_session(pr.a, pr.y, keys, cfg, *net);
  } else {
    SimCarrier net(e.k + 1);
    enc = run_session(pr.a, pr.y, keys, cfg, net);
  }

  MetricTable t;
  t.columns = {"iter", "mse_plain", "mse_enc", "mse_gap", "x_gap_max"};
  for (int it = 0; it < e.iters; it++) {
    double mp = mse(plain.x_trace[(size_t)it], x_true);
    double me = mse(enc.x_trace[(size_t)it], x_true);
    double xg =
        (plain.x_trace[(size_t)it] - enc.x_trace[(size_t)it]).cwiseAbs()
            .maxCoeff();
    t.labels.push_back("iter");
    t.rows.push_back({(double)it, mp, me, std::abs(mp - me), xg});
  }
  return t;
}

MetricTable run_sparsity_sweep(const Experiment& e) {
  MetricTable t;
  t.columns = {"nodes", "sparsity_pct", "nonzero_frac", "mse_at_50"};
  int at_iter = std::min(e.iters, 50);
  AdmmOptions opt{1.0, 1.0, at_iter};
  for (int k : {3, 10}) {
    for (double nz : {0.9, 0.5, 0.1}) {
      Vec x_true;
      Problem pr = gen_gaussian_problem(e.m, e.n, nz, e.seed, &x_true);
      AdmmResult r =
          lasso_admm_split(pr.a, pr.y, opt, split_columns(e.n, k));
      t.labels.push_back("K=" + std::to_string(k));
      t.rows.push_back({(double)k, 100.0 * (1.0 - nz), nz,
                        mse(r.x_trace.back(), x_true)});
    }
  }
  return t;
}

MetricTable run_throughput(const Experiment& e) {
  MetricTable t;
  t.columns = {"key_bits", "mod_mult_ops", "mod_exp_ops", "ep_direct_ops",
               "ep_crt_ops", "ep_crt_speedup"};
  struct Plan {
    size_t bits;
    int samples;
  };
  for (Plan p : {Plan{1024, 16}, Plan{2048, 8}, Plan{4096, 4}}) {
    OpsRate r = throughput_rates(p.bits, p.samples, 10, e.seed);
    t.labels.push_back(std::to_string(p.bits) + "-bit");
    t.rows.push_back({(double)p.bits, r.mod_mult, r.mod_exp, r.ep_direct,
                      r.ep_crt, r.ep_crt / r.ep_direct});
  }
  return t;
}

MetricTable run_latency(const Experiment& e) {
  MetricTable t;
  t.columns = {"nodes",   "iter",       "t_loc_s",    "t_comm_s", "wait_s",
               "t_pre_s", "t_master_s", "sum_phases_s", "identity_rel"};
  Problem pr = gen_gaussian_problem(e.m, e.n, e.sparsity, e.seed, nullptr);
  AdmmOptions opt{1.0, 1.0, e.iters};
  KeyPair keys = exp_keys(e, GMode::binomial);

  for (int k : {3, 10}) {
    std::vector<int> sizes = split_columns(e.n, k);
    SessionConfig cfg;
    cfg.variant = e.variant;
    cfg.nodes = k;
    cfg.iters = e.iters;
    cfg.seed = e.seed;
    cfg.timeout_s = 300.0;
    cfg.quant =
        session_bounds(pr.a, pr.y, opt, sizes, YScaling::full, 1.5, e.delta);
    SimCarrier net(k + 1, LatencyModel{e.link_ms, 0.0});
    MessageLog log(true);
    SessionResult r = run_session(pr.a, pr.y, keys, cfg, net, &log);

    // Arrival spread of the per-node updates within one iteration, off the
    // timestamped traffic records.
    std::vector<double> lo((size_t)e.iters, 0.0), hi((size_t)e.iters, 0.0);
    std::vector<char> seen((size_t)e.iters, 0);
    for (const MessageRecord& rec : log.records()) {
      if (rec.type != MsgType::enc_update || rec.iteration >= (u32)e.iters)
        continue;
      size_t it = rec.iteration;
      lo[it] = seen[it] ? std::min(lo[it], rec.at_s) : rec.at_s;
      hi[it] = seen[it] ? std::max(hi[it], rec.at_s) : rec.at_s;
      seen[it] = 1;
    }

    std::string tag = "K=" + std::to_string(k);
    double sum_parts = r.t_pre_s;
    for (int it = 0; it < e.iters; it++) {
      sum_parts += r.t_loc_s[(size_t)it] + r.t_comm_s[(size_t)it];
      t.labels.push_back(tag);
      t.rows.push_back({(double)k, (double)it, r.t_loc_s[(size_t)it],
                        r.t_comm_s[(size_t)it],
                        seen[(size_t)it] ? hi[(size_t)it] - lo[(size_t)it]
                                         : 0.0,
                        0.0, 0.0, 0.0, 0.0});
    }
    t.labels.push_back(tag + " phases");
    t.rows.push_back({(double)k, -1.0, 0.0, 0.0, 0.0, r.t_pre_s,
                      r.t_master_s, sum_parts,
                      std::abs(r.t_master_s - sum_parts) / r.t_master_s});
  }
  return t;
}

MetricTable run_power_grid(const Experiment& e) {
  if (e.n < 4) throw std::invalid_argument("need at least four buses");
  Rng rng(e.seed);
  GridCase g = make_grid(e.n, 4, 0.1, e.m, 0.01, rng);
  AdmmOptions opt{1.0, 0.05, e.iters};

  Mat plain = recover_rows(g, opt, e.k);
  KeyPair keys = exp_keys(e, GMode::binomial);
  SessionConfig base;
  base.variant = e.variant;
  base.nodes = e.k;
  base.seed = e.seed;
  base.quant.delta = e.delta;
  Mat enc = recover_rows_encrypted(g, opt, keys, base);

  std::vector<double> sp, se;
  std::vector<int> lp, le;
  pair_scores(g, plain, sp, lp);
  pair_scores(g, enc, se, le);

  MetricTable t;
  t.columns = {"auroc", "auprc"};
  t.labels = {"plain", "encrypted", "abs_diff"};
  double ap = auroc(sp, lp), pp = auprc(sp, lp);
  double ae = auroc(se, le), pe = auprc(se, le);
  t.rows = {{ap, pp}, {ae, pe}, {std::abs(ap - ae), std::abs(pp - pe)}};
  return t;
}

}  // namespace

Problem gen_gaussian_problem(int m, int n, double sparsity, u64 seed,
                             Vec* x_true) {
  if (m < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
  if (!(sparsity > 0.0) || sparsity > 1.0)
    throw std::invalid_argument("sparsity must be in (0, 1]");
  Rng rng(seed);
  Problem pr;
  pr.a = Mat(m, n);
  for (int i = 0; i < m; i++)
    for (int j = 0; j < n; j++) pr.a(i, j) = rng.gaussian();

  int nnz = (int)std::ceil(sparsity * (double)n);
  // Partial shuffle: the first nnz slots end up a uniform distinct draw.
  std::vector<int> idx((size_t)n);
  for (int i = 0; i < n; i++) idx[(size_t)i] = i;
  for (int i = 0; i < nnz; i++)
    std::swap(idx[(size_t)i],
              idx[(size_t)i + (size_t)rng.below((u64)(n - i))]);
  Vec x = Vec::Zero(n);
  for (int i = 0; i < nnz; i++) x[idx[(size_t)i]] = rng.gaussian();

  pr.y = pr.a * x;
  if (x_true) *x_true = x;
  return pr;
}

MetricTable run_experiment(const Experiment& e) {
  require_dims(e);
  MetricTable t;
  switch (e.kind) {
    case ExpKind::quant_loss: t = run_quant_loss(e); break;
    case ExpKind::mse_compare: t = run_mse_compare(e); break;
    case ExpKind::sparsity_sweep: t = run_sparsity_sweep(e); break;
    case ExpKind::throughput: t = run_throughput(e); break;
    case ExpKind::latency: t = run_latency(e); break;
    case ExpKind::power_grid: t = run_power_grid(e); break;
  }
  t.manifest = manifest_json(e);
  if (!e.out_dir.empty()) write_table(t, e.out_dir, kind_name(e.kind));
  return t;
}

OpsRate throughput_rates(size_t key_bits, int samples, int repeats, u64 seed) {
  if (samples < 1 || repeats < 1)
    throw std::invalid_argument("need positive sample and repeat counts");
  Rng rng(seed);
  KeyPair keys = keygen(rng, key_bits, GMode::random_g);
  Paillier ph(keys);
  ModArith n2 = ModArith::make(keys.pub.n2, Engine::packed);

  size_t s = (size_t)samples;
  std::vector<BigNat> as(s), bs(s), es(s), rs(s);
  for (size_t i = 0; i < s; i++) {
    as[i] = random_below(rng, keys.pub.n);
    bs[i] = random_below(rng, keys.pub.n);
    es[i] = random_below(rng, keys.pub.n);
    rs[i] = ph.sample_r(rng);
  }

  u64 sink = 0;  // consumes every result so no timed loop is dead code
  OpsRate out;
  // Multiplies are far below timer resolution one at a time; batch them.
  size_t mul_reps = 256;
  for (int rep = 0; rep < repeats; rep++) {
    auto t0 = SClock::now();
    for (size_t i = 0; i < s * mul_reps; i++)
      sink += n2.mul(as[i % s], bs[i % s]).bit_length();
    out.mod_mult += (double)(s * mul_reps) / secs_since(t0);

    t0 = SClock::now();
    for (size_t i = 0; i < s; i++) sink += n2.pow(as[i], es[i]).bit_length();
    out.mod_exp += (double)s / secs_since(t0);

    t0 = SClock::now();
    for (size_t i = 0; i < s; i++)
      sink += ph.encrypt_with_r(as[i], rs[i]).value.bit_length();
    out.ep_direct += (double)s / secs_since(t0);

    t0 = SClock::now();
    for (size_t i = 0; i < s; i++)
      sink += ph.crt_encrypt_with_r(as[i], rs[i]).value.bit_length();
    out.ep_crt += (double)s / secs_since(t0);
  }
  if (sink == 0) throw std::logic_error("timed loops produced nothing");
  out.mod_mult /= repeats;
  out.mod_exp /= repeats;
  out.ep_direct /= repeats;
  out.ep_crt /= repeats;
  return out;
}

std::string write_table(const MetricTable& t, const std::string& dir,
                        const std::string& stem) {
  if (t.labels.size() != t.rows.size())
    throw std::invalid_argument("label and row counts differ");
  std::filesystem::create_directories(dir);
  std::string csv_path = dir + "/" + stem + ".csv";

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "label";
  for (const std::string& c : t.columns) csv << "," << c;
  csv << "\n";
  char buf[64];
  for (size_t i = 0; i < t.rows.size(); i++) {
    if (t.rows[i].size() != t.columns.size())
      throw std::invalid_argument("row width does not match the header");
    csv << t.labels[i];
    for (double v : t.rows[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      csv << "," << buf;
    }
    csv << "\n";
  }
  csv.close();

  std::ofstream mf(dir + "/" + stem + ".json", std::ios::trunc);
  if (!mf) throw std::runtime_error("cannot write the manifest");
  mf << t.manifest << "\n";
  return csv_path;
}

}  // namespace pcadmm
