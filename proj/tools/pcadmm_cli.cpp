// Command-line front end: key generation plus the experiment runners.
// Every run prints its table; --out also writes csv + manifest.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "pcadmm/experiments.hpp"

using namespace pcadmm;

namespace {

void print_table(const MetricTable& t) {
  printf("label");
  for (const std::string& c : t.columns) printf(",%s", c.c_str());
  printf("\n");
  for (size_t i = 0; i < t.rows.size(); i++) {
    printf("%s", t.labels[i].c_str());
    for (double v : t.rows[i]) printf(",%.10g", v);
    printf("\n");
  }
}

// JSON config carrying Experiment fields. A run manifest parses back in, so
// rerunning a recorded experiment is `run --config <dir>/<kind>.json`.
void load_config(const std::string& path, Experiment& e) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("m")) e.m = j["m"];
  if (j.contains("n")) e.n = j["n"];
  if (j.contains("k")) e.k = j["k"];
  if (j.contains("sparsity")) e.sparsity = j["sparsity"];
  if (j.contains("delta")) e.delta = j["delta"];
  if (j.contains("key_bits")) e.key_bits = j["key_bits"];
  if (j.contains("seed")) e.seed = j["seed"];
  if (j.contains("iters")) e.iters = j["iters"];
  if (j.contains("link_ms")) e.link_ms = j["link_ms"];
  if (j.contains("out_dir")) e.out_dir = j["out_dir"];
  if (j.contains("variant"))
    e.variant = j["variant"] == "collab" ? ProtocolVariant::collaborative
                                         : ProtocolVariant::basic;
  if (j.contains("carrier"))
    e.carrier = j["carrier"] == "tcp" ? CarrierKind::tcp : CarrierKind::sim;
}

// Raw flag targets. Parsed values land here first and are merged onto the
// config afterwards, so explicit flags always win over the file.
struct ExpArgs {
  Experiment bound;
  std::string config;
  std::string variant_s = "basic";
  std::string carrier_s = "sim";
};

void add_exp_flags(CLI::App* cmd, ExpArgs& a) {
  cmd->add_option("--config", a.config,
                  "JSON file with experiment fields (the kind stays with the "
                  "subcommand); explicit flags win");
  cmd->add_option("-m,--rows", a.bound.m, "measurement count");
  cmd->add_option("-n,--cols", a.bound.n, "coefficient count");
  cmd->add_option("-k,--nodes", a.bound.k, "edge node count");
  cmd->add_option("--sparsity", a.bound.sparsity,
                  "nonzero fraction of the truth")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--delta", a.bound.delta, "quantizer resolution");
  cmd->add_option("--key-bits", a.bound.key_bits, "modulus size in bits");
  cmd->add_option("--seed", a.bound.seed, "run seed");
  cmd->add_option("--iters", a.bound.iters, "iteration count");
  cmd->add_option("--link-ms", a.bound.link_ms, "injected one-way delay");
  cmd->add_option("--variant", a.variant_s, "protocol variant")
      ->check(CLI::IsMember({"basic", "collab"}));
  cmd->add_option("--carrier", a.carrier_s, "message carrier")
      ->check(CLI::IsMember({"sim", "tcp"}));
  cmd->add_option("--out", a.bound.out_dir, "directory for csv + manifest");
}

// defaults (possibly subcommand-specific) < config file < explicit flags.
Experiment resolve_exp(CLI::App* cmd, const ExpArgs& a, Experiment e) {
  if (!a.config.empty()) load_config(a.config, e);
  if (cmd->count("--rows")) e.m = a.bound.m;
  if (cmd->count("--cols")) e.n = a.bound.n;
  if (cmd->count("--nodes")) e.k = a.bound.k;
  if (cmd->count("--sparsity")) e.sparsity = a.bound.sparsity;
  if (cmd->count("--delta")) e.delta = a.bound.delta;
  if (cmd->count("--key-bits")) e.key_bits = a.bound.key_bits;
  if (cmd->count("--seed")) e.seed = a.bound.seed;
  if (cmd->count("--iters")) e.iters = a.bound.iters;
  if (cmd->count("--link-ms")) e.link_ms = a.bound.link_ms;
  if (cmd->count("--variant"))
    e.variant = a.variant_s == "collab" ? ProtocolVariant::collaborative
                                        : ProtocolVariant::basic;
  if (cmd->count("--carrier"))
    e.carrier = a.carrier_s == "tcp" ? CarrierKind::tcp : CarrierKind::sim;
  if (cmd->count("--out")) e.out_dir = a.bound.out_dir;
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"encrypted distributed lasso toolkit"};
  app.require_subcommand(1);

  // keygen: write a serialized keypair for reuse across runs.
  size_t kg_bits = 2048;
  u64 kg_seed = 1;
  std::string kg_mode = "binomial";
  std::string kg_out = "keypair.bin";
  CLI::App* kg = app.add_subcommand("keygen", "generate and store a keypair");
  kg->add_option("--bits", kg_bits, "modulus size in bits");
  kg->add_option("--seed", kg_seed, "prime search seed");
  kg->add_option("--mode", kg_mode, "generator choice")
      ->check(CLI::IsMember({"binomial", "random-g"}));
  kg->add_option("--out", kg_out, "output file");

  ExpArgs a;

  std::string run_kind = "quant_loss";
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--kind", run_kind, "which experiment")
      ->check(CLI::IsMember(
          {"quant_loss", "mse_compare", "sparsity_sweep", "latency"}));
  add_exp_flags(run, a);

  CLI::App* bench =
      app.add_subcommand("bench", "operation throughput vs key length");
  add_exp_flags(bench, a);

  CLI::App* grid =
      app.add_subcommand("grid", "line detection, clear vs encrypted");
  add_exp_flags(grid, a);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kg->parsed()) {
      Rng rng(kg_seed);
      KeyPair keys = keygen(
          rng, kg_bits,
          kg_mode == "random-g" ? GMode::random_g : GMode::binomial);
      std::vector<uint8_t> bytes = serialize_keypair(keys);
      std::ofstream out(kg_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + kg_out);
      out.write((const char*)bytes.data(), (std::streamsize)bytes.size());
      printf("wrote %zu bytes to %s (n: %zu bits)\n", bytes.size(),
             kg_out.c_str(), keys.pub.n.bit_length());
      return 0;
    }

    Experiment defaults;
    CLI::App* cmd = run;
    if (run->parsed()) {
      if (run_kind == "mse_compare") defaults.kind = ExpKind::mse_compare;
      else if (run_kind == "sparsity_sweep")
        defaults.kind = ExpKind::sparsity_sweep;
      else if (run_kind == "latency") defaults.kind = ExpKind::latency;
      else defaults.kind = ExpKind::quant_loss;
    } else if (bench->parsed()) {
      defaults.kind = ExpKind::throughput;
      cmd = bench;
    } else {
      // Grid runs default to test keys and a resolution that fits them.
      defaults.kind = ExpKind::power_grid;
      defaults.key_bits = 64;
      defaults.delta = 1e8;
      defaults.n = 16;
      defaults.m = 48;
      defaults.iters = 40;
      cmd = grid;
    }

    Experiment e = resolve_exp(cmd, a, defaults);
    MetricTable t = run_experiment(e);
    print_table(t);
    if (!e.out_dir.empty()) printf("written under %s\n", e.out_dir.c_str());
  } catch (const std::exception& ex) {
    fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
