#include "pcadmm/protocol.hpp"

#include <chrono>
#include <string>
#include <thread>

#include "pcadmm/wire.hpp"

namespace pcadmm {

BigNat obfuscate_exponent(const BigNat& value, const BigNat& n_eps, u64 mask) {
  return value + BigNat(mask) * n_eps;
}

BigNat delegated_power(const BigNat& base, const BigNat& obf,
                       const CrtShare& share, const WordBarrett& p2_ctx) {
  return pow_mod(mod(base, share.p2), mod(obf, share.phi_p2), p2_ctx);
}

void check_update_range(const BigNat& q, const QuantSpec& s, size_t cols) {
  // Largest integer the quantized recurrence can produce: the fine offset
  // ceiling plus cols products of a coarse factor and a coarse pair sum.
  double cap = s.delta * s.delta / s.range() +
               (double)cols * s.delta * 2.0 * s.delta;
  if (q.bit_length() > 127 || q.to_double() > cap * 1.000001 + 4.0)
    throw ProtocolError("combined update out of range");
}

QuantSpec session_bounds(const Mat& a, const Vec& y, const AdmmOptions& opt,
                         const std::vector<int>& cols_per_node,
                         YScaling scaling, double margin, double delta) {
  int k_total = (int)cols_per_node.size();
  double lo = 0.0, hi = 0.0;  // initial z and v are zero, keep it in window
  auto track = [&](double v) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };

  std::vector<NodeFactor> fac;
  int at = 0;
  for (int c : cols_per_node) {
    fac.push_back(node_factor(a.middleCols(at, c), y, opt, k_total, scaling));
    const NodeFactor& f = fac.back();
    for (Eigen::Index i = 0; i < f.alpha.size(); i++) track(f.alpha[i]);
    for (Eigen::Index i = 0; i < f.b_bar.rows(); i++)
      for (Eigen::Index j = 0; j < f.b_bar.cols(); j++) track(f.b_bar(i, j));
    at += c;
  }

  // Plaintext rehearsal of the block recurrence; z and -v are what the
  // session will quantize each iteration.
  Vec z = Vec::Zero(a.cols()), v = Vec::Zero(a.cols());
  for (int it = 0; it < opt.iters; it++) {
    at = 0;
    for (int k = 0; k < k_total; k++) {
      int c = cols_per_node[k];
      auto zk = z.segment(at, c);
      auto vk = v.segment(at, c);
      Vec xk = fac[k].alpha + fac[k].b_bar * (zk - vk);
      zk = soft_threshold(Vec(xk + vk), opt.lambda / opt.rho);
      vk += xk - zk;
      for (int i = 0; i < c; i++) {
        track(zk[i]);
        track(-vk[i]);
      }
      at += c;
    }
  }
  return widen_bounds(lo, hi, margin, delta);
}

namespace {

constexpr u64 kEdgeSeedMix = 0x9e3779b97f4a7c15ull;

uint8_t get_u8(const std::vector<uint8_t>& d, size_t& off) {
  if (off >= d.size()) throw std::runtime_error("truncated frame");
  return d[off++];
}

void expect(const Envelope& e, MsgType t, u32 iteration, uint16_t session) {
  if (e.type != t || e.iteration != iteration || e.session != session)
    throw ProtocolError("out-of-order message");
}

u64 draw_mask(Rng& rng, unsigned bits) {
  if (bits == 0) return 0;  // test hook: exponents go out bare
  if (bits > 64) throw std::invalid_argument("mask width above 64");
  for (;;) {
    u64 m = bits == 64 ? rng.next() : rng.next() >> (64 - bits);
    if (m) return m;
  }
}

// Everything an edge learns from the wire before touching its block.
struct InitMsg {
  uint8_t variant = 0, scaling = 0, engine = 0;
  u32 iters = 0, k_total = 0, window = 6;
  double rho = 1.0, lambda = 1.0;
  double z_min = 0.0, z_max = 0.0, delta = 0.0;
  u64 edge_seed = 1;
  PublicKey pub;
  bool has_share = false;
  CrtShare share;
  BigNat obf_dec;  // masked decryption exponent, constant for the session
};

std::vector<uint8_t> encode_init(const InitMsg& m) {
  std::vector<uint8_t> p;
  p.push_back(m.variant);
  p.push_back(m.scaling);
  p.push_back(m.engine);
  put_u32(p, m.iters);
  put_u32(p, m.k_total);
  put_u32(p, m.window);
  put_f64(p, m.rho);
  put_f64(p, m.lambda);
  put_f64(p, m.z_min);
  put_f64(p, m.z_max);
  put_f64(p, m.delta);
  put_u64(p, m.edge_seed);
  p.push_back(m.pub.binomial_g ? 1 : 0);
  put_u32(p, (u32)m.pub.key_bits);
  wire_put(p, m.pub.n);
  wire_put(p, m.pub.g);
  p.push_back(m.has_share ? 1 : 0);
  if (m.has_share) {
    wire_put(p, m.share.p2);
    wire_put(p, m.share.phi_p2);
    wire_put(p, m.obf_dec);
  }
  return p;
}

InitMsg decode_init(const std::vector<uint8_t>& p) {
  InitMsg m;
  size_t off = 0;
  m.variant = get_u8(p, off);
  m.scaling = get_u8(p, off);
  m.engine = get_u8(p, off);
  if (m.variant > 1 || m.scaling > 1 || m.engine > 1)
    throw ProtocolError("bad session parameters");
  m.iters = get_u32(p, off);
  m.k_total = get_u32(p, off);
  m.window = get_u32(p, off);
  if (m.iters < 1 || m.k_total < 1 || m.window < 1 || m.window > 8)
    throw ProtocolError("bad session parameters");
  m.rho = get_f64(p, off);
  m.lambda = get_f64(p, off);
  m.z_min = get_f64(p, off);
  m.z_max = get_f64(p, off);
  m.delta = get_f64(p, off);
  m.edge_seed = get_u64(p, off);
  m.pub.binomial_g = get_u8(p, off) != 0;
  m.pub.key_bits = get_u32(p, off);
  m.pub.n = wire_get(p, off);
  m.pub.g = wire_get(p, off);
  if (m.pub.n.is_zero()) throw ProtocolError("bad session parameters");
  m.pub.n2 = m.pub.n * m.pub.n;
  m.has_share = get_u8(p, off) != 0;
  if (m.has_share) {
    m.share.p2 = wire_get(p, off);
    m.share.phi_p2 = wire_get(p, off);
    m.obf_dec = wire_get(p, off);
  }
  return m;
}

// One edge worker: owns its column block, never sees y beyond what the
// factors bake in, never sees z or v in the clear.
struct EdgeSeat {
  int id = 0;
  Mat block;
  Vec y;
  Carrier* net = nullptr;
  double timeout = 30.0;
  RoleStats stats;
  std::string error;  // nonempty marks a failed worker
};

void edge_run(EdgeSeat& s) {
  Envelope env = decode_envelope(s.net->recv(s.id, 0, s.timeout));
  if (env.type != MsgType::session_init || env.iteration != 0)
    throw ProtocolError("expected session_init");
  uint16_t session = env.session;
  InitMsg init = decode_init(env.payload);

  QuantSpec spec{init.z_min, init.z_max, init.delta};
  AdmmOptions opt{init.rho, init.lambda, (int)init.iters};
  NodeFactor fac = node_factor(s.block, s.y, opt, (int)init.k_total,
                               (YScaling)init.scaling);
  size_t cols = (size_t)s.block.cols();

  ClampStats clamps;
  std::vector<double> alpha(fac.alpha.data(), fac.alpha.data() + cols);
  std::vector<u128> q_alpha = gamma1_vec(alpha, spec, &clamps);
  std::vector<std::vector<u64>> q_b(cols);
  std::vector<u64> rowsum(cols, 0);
  for (size_t i = 0; i < cols; i++) {
    std::vector<double> row(cols);
    for (size_t j = 0; j < cols; j++)
      row[j] = fac.b_bar((Eigen::Index)i, (Eigen::Index)j);
    q_b[i] = gamma2_vec(row, spec, &clamps);
    for (u64 c : q_b[i]) rowsum[i] += c;
  }

  Paillier ph(init.pub, (Engine)init.engine);
  Rng rng(init.edge_seed);
  std::vector<BigNat> alpha_ms(cols);
  for (size_t i = 0; i < cols; i++) alpha_ms[i] = BigNat::from_u128(q_alpha[i]);
  // Encrypted once, reused as the accumulator seed every iteration.
  std::vector<Ciphertext> alpha_hat = ph.encrypt_vec(alpha_ms, rng, false);

  {
    Envelope e{MsgType::node_share, session, 0, {}};
    put_u32(e.payload, (u32)cols);
    put_vec_u64(e.payload, rowsum);
    put_u64(e.payload, clamps.total());
    s.net->send(s.id, 0, encode_envelope(e));
  }

  WordBarrett p2_ctx;
  BigNat dec_exp;
  if (init.has_share) {
    p2_ctx = WordBarrett::make(init.share.p2);
    dec_exp = mod(init.obf_dec, init.share.phi_p2);
  }

  for (u32 t = 0; t < init.iters; t++) {
    if (init.has_share) {
      // Delegated half of the master's two encryptions: masked exponents
      // in, p^2-side powers of g out.
      Envelope oz = decode_envelope(s.net->recv(s.id, 0, s.timeout));
      expect(oz, MsgType::obf_exponents, t, session);
      Envelope ov = decode_envelope(s.net->recv(s.id, 0, s.timeout));
      expect(ov, MsgType::obf_exponents, t, session);
      size_t zo = 0, vo = 0;
      if (get_u8(oz.payload, zo) != 0 || get_u8(ov.payload, vo) != 1)
        throw ProtocolError("out-of-order message");
      std::vector<BigNat> mz = get_bignat_vec(oz.payload, zo);
      std::vector<BigNat> mv = get_bignat_vec(ov.payload, vo);
      if (mz.size() != cols || mv.size() != cols)
        throw ProtocolError("state width mismatch");
      Envelope rep{MsgType::delegated_pows, session, t, {}};
      rep.payload.push_back(0);
      std::vector<BigNat> pz(cols), pv(cols);
      for (size_t j = 0; j < cols; j++) {
        pz[j] = delegated_power(init.pub.g, mz[j], init.share, p2_ctx);
        pv[j] = delegated_power(init.pub.g, mv[j], init.share, p2_ctx);
      }
      s.stats.delegated_pows += 2 * (u64)cols;
      put_bignat_vec(rep.payload, pz);
      put_bignat_vec(rep.payload, pv);
      s.net->send(s.id, 0, encode_envelope(rep));
    }

    Envelope st = decode_envelope(s.net->recv(s.id, 0, s.timeout));
    expect(st, MsgType::enc_state, t, session);
    size_t off = 0;
    std::vector<Ciphertext> zc = get_cipher_vec(st.payload, off);
    std::vector<Ciphertext> vc = get_cipher_vec(st.payload, off);
    if (zc.size() != cols || vc.size() != cols)
      throw ProtocolError("state width mismatch");
    for (size_t j = 0; j < cols; j++)
      if (zc[j].value >= ph.pub().n2 || vc[j].value >= ph.pub().n2)
        throw ProtocolError("ciphertext outside the group");

    std::vector<Ciphertext> zv(cols);
    for (size_t j = 0; j < cols; j++) zv[j] = ph.hom_add(zc[j], vc[j]);
    std::vector<Ciphertext> upd =
        ph.hom_matvec(alpha_hat, q_b, zv, init.window);

    Envelope ue{MsgType::enc_update, session, t, {}};
    put_cipher_vec(ue.payload, upd);
    s.net->send(s.id, 0, encode_envelope(ue));

    if (init.has_share) {
      // Delegated half of the decryption the master is about to do.
      Envelope xp{MsgType::delegated_pows, session, t, {}};
      xp.payload.push_back(1);
      std::vector<BigNat> px(cols);
      for (size_t j = 0; j < cols; j++)
        px[j] = pow_mod(mod(upd[j].value, init.share.p2), dec_exp, p2_ctx);
      s.stats.delegated_pows += (u64)cols;
      put_bignat_vec(xp.payload, px);
      s.net->send(s.id, 0, encode_envelope(xp));
    }
  }

  Envelope fin = decode_envelope(s.net->recv(s.id, 0, s.timeout));
  expect(fin, MsgType::shutdown, init.iters, session);
  s.stats.ops = ph.counters();
}

void edge_main(EdgeSeat& s) {
  try {
    edge_run(s);
  } catch (const std::exception& ex) {
    s.error = ex.what();
  }
}

struct EdgeLink {
  int id = 0;
  int offset = 0, cols = 0;
  std::vector<u64> rowsum;
};

void master_loop(const Mat& a, const Vec& y, const KeyPair& keys,
                 const SessionConfig& cfg, Carrier& net,
                 const std::vector<int>& sizes, SessionResult& res) {
  bool collab = cfg.variant == ProtocolVariant::collaborative;
  bool crt = cfg.use_crt || collab;
  bool pooled = cfg.r_mode == RandomnessMode::pooled;
  uint16_t sid = cfg.session_id;
  using SClock = std::chrono::steady_clock;
  auto m0 = SClock::now();
  double comm = 0.0;  // carrier-blocked seconds, reset per iteration
  auto timed_send = [&](int to, std::vector<uint8_t> f) {
    auto c0 = SClock::now();
    net.send(0, to, std::move(f));
    comm += std::chrono::duration<double>(SClock::now() - c0).count();
  };
  auto timed_recv = [&](int from) {
    auto c0 = SClock::now();
    std::vector<uint8_t> f = net.recv(0, from, cfg.timeout_s);
    comm += std::chrono::duration<double>(SClock::now() - c0).count();
    return f;
  };
  Paillier ph(keys, cfg.engine);
  // Separate streams so the r sequence is identical across variants (the
  // collaborative one additionally draws masks).
  Rng rng_r(cfg.seed);
  Rng rng_mask(cfg.seed ^ 0x6d61736b6d61736bull);
  BigNat n_eps = keys.pub.n * keys.prv.epsilon;
  const QuantSpec& spec = cfg.quant;

  for (int k = 1; k <= cfg.nodes; k++) {
    InitMsg m;
    m.variant = (uint8_t)cfg.variant;
    m.scaling = (uint8_t)cfg.y_scaling;
    m.engine = (uint8_t)cfg.engine;
    m.iters = (u32)cfg.iters;
    m.k_total = (u32)cfg.nodes;
    m.window = cfg.matvec_window;
    m.rho = cfg.rho;
    m.lambda = cfg.lambda;
    m.z_min = spec.z_min;
    m.z_max = spec.z_max;
    m.delta = spec.delta;
    m.edge_seed = cfg.seed ^ (kEdgeSeedMix * (u64)k);
    m.pub = keys.pub;
    m.has_share = collab;
    if (collab) {
      m.share = crt_share(keys);
      m.obf_dec = obfuscate_exponent(keys.prv.epsilon, n_eps,
                                     draw_mask(rng_mask, cfg.mask_bits));
    }
    Envelope e{MsgType::session_init, sid, 0, encode_init(m)};
    net.send(0, k, encode_envelope(e));
  }

  std::vector<EdgeLink> links(cfg.nodes);
  int at = 0;
  for (int k = 1; k <= cfg.nodes; k++) {
    Envelope e = decode_envelope(net.recv(0, k, cfg.timeout_s));
    expect(e, MsgType::node_share, 0, sid);
    size_t off = 0;
    u32 cols = get_u32(e.payload, off);
    if ((int)cols != sizes[k - 1])
      throw ProtocolError("block shape mismatch");
    links[k - 1].id = k;
    links[k - 1].offset = at;
    links[k - 1].cols = (int)cols;
    links[k - 1].rowsum = get_vec_u64(e.payload, off);
    if (links[k - 1].rowsum.size() != cols)
      throw ProtocolError("block shape mismatch");
    res.clamps += get_u64(e.payload, off);
    at += (int)cols;
  }

  std::vector<RnFactor> pool;
  if (pooled) {
    if (cfg.pool_size < 1) throw std::invalid_argument("pool size below 1");
    for (int i = 0; i < cfg.pool_size; i++)
      pool.push_back(ph.make_rn_factor(ph.sample_r(rng_r)));
  }
  u64 pool_at = 0;
  auto next_factor = [&]() -> const RnFactor& {
    return pool[pool_at++ % pool.size()];
  };
  res.t_pre_s = std::chrono::duration<double>(SClock::now() - m0).count();

  // Encrypts one quantized state vector the way the session is configured;
  // the collaborative path hands in the delegated g powers.
  auto encrypt_state = [&](const std::vector<u64>& qs,
                           const std::vector<BigNat>* gpows) {
    std::vector<Ciphertext> out(qs.size());
    if (gpows) {
      for (size_t j = 0; j < qs.size(); j++)
        out[j] = pooled ? ph.finish_split_encrypt_with_factor(
                              BigNat(qs[j]), (*gpows)[j], next_factor())
                        : ph.finish_split_encrypt(BigNat(qs[j]), (*gpows)[j],
                                                  ph.sample_r(rng_r));
      return out;
    }
    if (!pooled) {
      std::vector<BigNat> ms(qs.size());
      for (size_t j = 0; j < qs.size(); j++) ms[j] = BigNat(qs[j]);
      return ph.encrypt_vec(ms, rng_r, crt);
    }
    for (size_t j = 0; j < qs.size(); j++)
      out[j] = crt ? ph.crt_encrypt_with_factor(BigNat(qs[j]), next_factor())
                   : ph.encrypt_with_factor(BigNat(qs[j]), next_factor());
    return out;
  };

  res.x = Vec::Zero(a.cols());
  res.z = Vec::Zero(a.cols());
  res.v = Vec::Zero(a.cols());

  for (u32 t = 0; t < (u32)cfg.iters; t++) {
    auto it0 = SClock::now();
    comm = 0.0;
    for (const EdgeLink& lk : links) {
      size_t cols = (size_t)lk.cols;
      std::vector<double> zd(cols), nvd(cols);
      for (size_t i = 0; i < cols; i++) {
        zd[i] = res.z[lk.offset + (int)i];
        nvd[i] = -res.v[lk.offset + (int)i];
      }
      ClampStats cl;
      std::vector<u64> q_z = gamma2_vec(zd, spec, &cl);
      std::vector<u64> q_nv = gamma2_vec(nvd, spec, &cl);
      res.clamps += cl.total();

      std::vector<Ciphertext> zc, vc;
      if (collab) {
        Envelope oz{MsgType::obf_exponents, sid, t, {}};
        Envelope ov{MsgType::obf_exponents, sid, t, {}};
        oz.payload.push_back(0);
        ov.payload.push_back(1);
        std::vector<BigNat> mz(cols), mv(cols);
        for (size_t j = 0; j < cols; j++)
          mz[j] = obfuscate_exponent(BigNat(q_z[j]), n_eps,
                                     draw_mask(rng_mask, cfg.mask_bits));
        for (size_t j = 0; j < cols; j++)
          mv[j] = obfuscate_exponent(BigNat(q_nv[j]), n_eps,
                                     draw_mask(rng_mask, cfg.mask_bits));
        put_bignat_vec(oz.payload, mz);
        put_bignat_vec(ov.payload, mv);
        timed_send(lk.id, encode_envelope(oz));
        timed_send(lk.id, encode_envelope(ov));

        Envelope rep = decode_envelope(timed_recv(lk.id));
        expect(rep, MsgType::delegated_pows, t, sid);
        size_t off = 0;
        if (get_u8(rep.payload, off) != 0)
          throw ProtocolError("out-of-order message");
        std::vector<BigNat> pz = get_bignat_vec(rep.payload, off);
        std::vector<BigNat> pv = get_bignat_vec(rep.payload, off);
        if (pz.size() != cols || pv.size() != cols)
          throw ProtocolError("state width mismatch");
        zc = encrypt_state(q_z, &pz);
        vc = encrypt_state(q_nv, &pv);
      } else {
        zc = encrypt_state(q_z, nullptr);
        vc = encrypt_state(q_nv, nullptr);
      }

      Envelope st{MsgType::enc_state, sid, t, {}};
      put_cipher_vec(st.payload, zc);
      put_cipher_vec(st.payload, vc);
      timed_send(lk.id, encode_envelope(st));

      Envelope ue = decode_envelope(timed_recv(lk.id));
      expect(ue, MsgType::enc_update, t, sid);
      size_t off = 0;
      std::vector<Ciphertext> upd = get_cipher_vec(ue.payload, off);
      if (upd.size() != cols) throw ProtocolError("state width mismatch");

      std::vector<BigNat> qs(cols);
      if (collab) {
        Envelope xp = decode_envelope(timed_recv(lk.id));
        expect(xp, MsgType::delegated_pows, t, sid);
        size_t xo = 0;
        if (get_u8(xp.payload, xo) != 1)
          throw ProtocolError("out-of-order message");
        std::vector<BigNat> px = get_bignat_vec(xp.payload, xo);
        if (px.size() != cols) throw ProtocolError("state width mismatch");
        for (size_t j = 0; j < cols; j++)
          qs[j] = ph.decrypt_with_half(upd[j], px[j]);
      } else {
        qs = ph.decrypt_vec(upd, crt);
      }

      std::vector<u128> qi(cols);
      for (size_t j = 0; j < cols; j++) {
        check_update_range(qs[j], spec, cols);
        qi[j] = qs[j].to_u128();
      }
      std::vector<double> xk =
          inverse_quantize_x(qi, lk.rowsum, q_z, q_nv, spec);
      for (size_t i = 0; i < cols; i++) {
        int g = lk.offset + (int)i;
        res.x[g] = xk[i];
        double xv = xk[i] + res.v[g];
        double z = soft_threshold(xv, cfg.lambda / cfg.rho);
        res.z[g] = z;
        res.v[g] = xv - z;
      }
    }
    res.objective.push_back(lasso_objective(a, y, res.z, cfg.lambda));
    res.x_trace.push_back(res.x);
    res.t_comm_s.push_back(comm);
    res.t_loc_s.push_back(
        std::chrono::duration<double>(SClock::now() - it0).count() - comm);
  }

  for (int k = 1; k <= cfg.nodes; k++) {
    Envelope fin{MsgType::shutdown, sid, (u32)cfg.iters, {}};
    net.send(0, k, encode_envelope(fin));
  }
  res.master.ops = ph.counters();
  res.t_master_s = std::chrono::duration<double>(SClock::now() - m0).count();
}

}  // namespace

SessionResult run_session(const Mat& a, const Vec& y, const KeyPair& keys,
                          const SessionConfig& cfg, Carrier& net,
                          MessageLog* log) {
  if (cfg.nodes < 1) throw std::invalid_argument("need at least one node");
  if (cfg.iters < 1) throw std::invalid_argument("need at least one iteration");
  if (!(cfg.quant.range() > 0.0))
    throw std::invalid_argument("empty quantization window");

  MessageLog internal(false);
  MessageLog* use_log = log ? log : &internal;
  net.attach_log(use_log);
  auto t0 = std::chrono::steady_clock::now();

  std::vector<int> sizes = split_columns((int)a.cols(), cfg.nodes);
  std::vector<EdgeSeat> seats;
  seats.reserve((size_t)cfg.nodes);
  int at = 0;
  for (int k = 0; k < cfg.nodes; k++) {
    EdgeSeat s;
    s.id = k + 1;
    s.block = a.middleCols(at, sizes[k]);
    s.y = y;
    s.net = &net;
    s.timeout = cfg.timeout_s;
    seats.push_back(std::move(s));
    at += sizes[k];
  }
  std::vector<std::thread> workers;
  for (EdgeSeat& s : seats) workers.emplace_back([&s] { edge_main(s); });

  SessionResult res;
  int err_kind = 0;  // 1 timeout, 2 anything else
  std::string err;
  try {
    master_loop(a, y, keys, cfg, net, sizes, res);
  } catch (const TimeoutError& ex) {
    err_kind = 1;
    err = ex.what();
  } catch (const std::exception& ex) {
    err_kind = 2;
    err = ex.what();
  }
  for (std::thread& w : workers) w.join();
  net.attach_log(log);  // the fallback log dies with this frame

  std::string edge_err;
  for (const EdgeSeat& s : seats)
    if (!s.error.empty() && edge_err.empty())
      edge_err = "edge " + std::to_string(s.id) + ": " + s.error;

  // A master timeout caused by a dead edge reports the edge's failure, the
  // actual root cause.
  if (err_kind == 1 && !edge_err.empty()) throw ProtocolError(edge_err);
  if (err_kind == 1) throw TimeoutError(err);
  if (err_kind == 2) throw ProtocolError(err);
  if (!edge_err.empty()) throw ProtocolError(edge_err);

  for (const EdgeSeat& s : seats) res.edges.push_back(s.stats);
  res.frames = use_log->total_frames();
  res.bytes = use_log->total_bytes();
  res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
  return res;
}

}  // namespace pcadmm
