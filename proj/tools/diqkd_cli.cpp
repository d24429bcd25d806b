// Copyright 2026 The diqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: keylen, run, ec-bench, extract, hash.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diqkd/diqkd.hpp"

namespace {

using namespace diqkd;

constexpr int kExitAbort = 3;
constexpr int kExitNoKey = 2;
constexpr int kExitUsage = 64;
constexpr int kExitTransport = 70;
constexpr std::uint64_t kEcBenchMaxN = 2000000;

struct Shared {
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string config;
};

void add_shared(CLI::App* sub, Shared& s) {
  sub->add_option("--seed", s.seed, "Master seed");
  sub->add_option("--out", s.out, "Output directory");
  sub->add_option("--config", s.config, "key = value file; flags take precedence");
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Appends "--key=value" for config entries the command line does not set.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "bad line: " + line);
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.starts_with(flag + "=");
    if (!given) extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void print_config(const CLI::App* sub) {
  std::cout << "# diqkd " << sub->get_name() << "\n";
  for (const auto* opt : sub->get_options()) {
    const auto& name = opt->get_lnames();
    if (name.empty() || name[0] == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    std::cout << "# config " << name[0] << "=" << value << "\n";
  }
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

// ---- keylen

struct KeylenArgs {
  std::uint64_t n = 0;
  std::string gamma = "13/256";
  double S = 0, Q = 0;
  double eps_snd = 1e-10;
  std::optional<double> omega_thresh;
  std::optional<std::uint64_t> m;
  int multistarts = 32;
};

int cmd_keylen(const KeylenArgs& a, const Shared& sh) {
  const auto gamma = Rational::parse(a.gamma);
  const double n = static_cast<double>(a.n);
  if (a.n == 0) throw DomainError("n must be positive");
  if (!(a.S > 2.0 && a.S <= kTsirelsonS)) throw DomainError("S outside (2, 2 sqrt 2]");
  const double w_th = a.omega_thresh.value_or(
      completeness_threshold((4.0 + a.S) / 8.0, gamma.value(), n));
  const double m = a.m ? static_cast<double>(*a.m)
                       : static_cast<double>(syndrome_length(n, gamma.value(), a.S, a.Q));
  OptimizerConfig cfg;
  cfg.multistarts = a.multistarts;
  cfg.seed = sh.seed;
  const auto r = optimize(n, gamma.value(), w_th, m, a.eps_snd, cfg);
  const auto& b = r.breakdown;
  const auto& p = r.params;
  const auto& t = b.terms;
  std::cout << std::setprecision(10);
  auto row = [](const char* name, double v) {
    std::cout << "  " << std::left << std::setw(16) << name << std::right << std::setw(20) << v
              << "\n";
  };
  std::cout << "omega_thresh " << w_th << "  m " << m << "\n";
  if (r.feasible) {
    row("entropy_rate", t.entropy_rate);
    row("eat_gap", t.eat_gap);
    row("second_order", t.second_order);
    row("hmax_cost", t.hmax_cost);
    row("renyi_costs", t.renyi_costs);
    row("chain_rule", t.chain_rule);
    row("pa_cost", t.pa_cost);
    row("leakage", t.leakage);
    row("constant", t.constant);
    row("pre_upsilon", b.pre_upsilon);
    row("ell", static_cast<double>(b.ell));
  } else {
    std::cout << "  infeasible: " << r.violated_constraint << "\n";
  }
  std::cout << "n=" << a.n << "\n"
            << "gamma=" << gamma.str() << "\n"
            << "omega_thresh=" << w_th << "\n"
            << "m=" << static_cast<std::uint64_t>(m) << "\n"
            << "feasible=" << (r.feasible ? 1 : 0) << "\n";
  if (!r.feasible) std::cout << "violated=" << r.violated_constraint << "\n";
  if (r.feasible) {
    std::cout << "t=" << p.t << "\nalpha1=" << p.alpha1 << "\nalpha2=" << p.alpha2
              << "\neps_pa=" << p.eps_pa << "\neps_ea=" << p.eps_ea << "\neps_s=" << p.eps_s
              << "\neps_s1=" << p.eps_s1 << "\neps_s2=" << p.eps_s2 << "\neps_h=" << p.eps_h
              << "\nsoundness=" << b.soundness << "\nentropy_rate=" << t.entropy_rate
              << "\neat_gap=" << t.eat_gap << "\nsecond_order=" << t.second_order
              << "\nhmax_cost=" << t.hmax_cost << "\nrenyi_costs=" << t.renyi_costs
              << "\nchain_rule=" << t.chain_rule << "\npa_cost=" << t.pa_cost
              << "\nleakage=" << t.leakage << "\nconstant=" << t.constant
              << "\npre_upsilon=" << b.pre_upsilon << "\n";
  }
  const std::uint64_t ell = r.feasible ? b.ell : 0;
  std::cout << "ell=" << ell << "\nrate=" << static_cast<double>(ell) / n << "\n";
  return ell > 0 ? 0 : kExitNoKey;
}

// ---- run

struct RunArgs {
  std::string role = "both";
  std::string transport = "inproc";
  std::string listen, connect;
  std::string k0;
  std::string fault;
  std::string session;
  std::uint64_t n = 100000;
  std::string gamma = "13/256";
  double S = 2.64, Q = 0.018;
  std::optional<double> device_S, device_Q;
  double eps_snd = 1e-10;
  std::optional<double> omega_thresh;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> ell;
  bool no_budget_check = false;
  std::uint64_t code_seed = 1;
  std::uint32_t coupling_length = 80;
  unsigned workers = 1;
  int max_iters = 200;
  std::int64_t timeout_ms = 60000;
};

ProtocolSetup setup_from(const RunArgs& a) {
  ProtocolSetup s;
  s.n = a.n;
  s.gamma = Rational::parse(a.gamma);
  s.S = a.S;
  s.Q = a.Q;
  s.eps_snd = a.eps_snd;
  s.omega_thresh = a.omega_thresh;
  s.m = a.m;
  s.ell = a.ell;
  s.enforce_key_budget = !a.no_budget_check;
  s.code_seed = a.code_seed;
  s.code.coupling_length = a.coupling_length;
  s.bp.workers = a.workers;
  s.bp.max_iters = a.max_iters;
  s.extract_workers = a.workers;
  s.timeout = std::chrono::milliseconds(a.timeout_ms);
  return s;
}

void write_party(const std::string& dir, const char* who, const PartyResult& r,
                 const BalanceSheet& b, bool success, AbortReason reason) {
  if (success) write_bit_file(join(dir, std::string("key_") + who + ".bin"), r.key);
  std::ofstream t(join(dir, std::string("transcript_") + who + ".txt"));
  write_transcript(t, r.transcript, b, success, reason);
}

int report(bool success, AbortReason reason, const BalanceSheet& b, std::uint64_t leakage,
           std::uint64_t key_bits) {
  std::cout << "status=" << (success ? "success" : "abort") << "\n"
            << "reason=" << abort_reason_name(reason) << "\n"
            << "leakage_bits=" << leakage << "\n"
            << "consumed=" << b.consumed << "\n"
            << "reusable=" << b.reusable << "\n"
            << "generated=" << b.generated << "\n"
            << "net=" << b.net << "\n"
            << "key_bits=" << key_bits << "\n";
  return success ? 0 : kExitAbort;
}

int cmd_run(const RunArgs& a, const Shared& sh) {
  std::optional<FaultSpec> fault;
  if (!a.fault.empty()) fault = FaultSpec::parse(a.fault);
  const auto params = make_protocol_params(setup_from(a));
  const auto model = DeviceModel::parametric(a.device_S.value_or(a.S), a.device_Q.value_or(a.Q));
  ensure_dir(sh.out);
  SharedKeyK0 k0 = [&] {
    if (!a.k0.empty()) return SharedKeyK0::load(a.k0);
    Rng kr(splitmix64(sh.seed ^ 0x6b30ULL));
    auto k = SharedKeyK0::generate(kr, params.seed_bits());
    k.save(join(sh.out, "k0.bin"));
    return k;
  }();
  std::cout << "m=" << params.m << "\nomega_thresh=" << std::setprecision(10)
            << params.omega_thresh << "\nell=" << params.ell << "\n";

  if (a.transport == "inproc") {
    if (a.role != "both") throw DomainError("inproc transport runs both roles");
    RunOptions opt;
    opt.fault = fault;
    const auto o = run_protocol(params, model, k0, sh.seed, opt);
    write_party(sh.out, "alice", o.alice, o.balance, o.success, o.reason);
    write_party(sh.out, "bob", o.bob, o.balance, o.success, o.reason);
    std::cout << "keys_equal=" << (o.success && o.k_a == o.k_b ? 1 : 0) << "\n"
              << "omega_pe=" << o.events.omega_pe << "\nomega_h=" << o.events.omega_h
              << "\nomega_a=" << o.events.omega_a << "\n";
    if (!o.success) std::cout << "detail=" << (o.bob.detected_locally ? o.bob.detail : o.alice.detail) << "\n";
    return report(o.success, o.reason, o.balance, o.leakage_bits(), o.k_a.size());
  }
  if (a.transport != "tcp") throw DomainError("transport must be inproc or tcp");
  if (a.role != "alice" && a.role != "bob") throw DomainError("tcp needs --role alice|bob");
  if (a.listen.empty() == a.connect.empty()) {
    throw DomainError("tcp needs exactly one of --listen / --connect");
  }
  const std::string token =
      a.session.empty() ? "diqkd-" + std::to_string(sh.seed) : a.session;
  std::unique_ptr<Transport> ch, link;
  try {
    const auto timeout = params.timeout;
    if (!a.listen.empty()) {
      TcpListener l(parse_address(a.listen), timeout);
      ch = l.accept();
      handshake(*ch, token);
      link = l.accept();
      handshake(*link, token);
    } else {
      const auto addr = parse_address(a.connect);
      ch = tcp_connect(addr, timeout);
      handshake(*ch, token);
      link = tcp_connect(addr, timeout);
      handshake(*link, token);
    }
  } catch (const ChannelError& e) {
    std::cerr << "transport setup failed: " << e.what() << "\n";
    return kExitTransport;
  }
  if (fault) ch = std::make_unique<FaultyTransport>(std::move(ch), *fault);
  PartyResult r;
  const char* who = a.role == "alice" ? "alice" : "bob";
  if (a.role == "alice") {
    AliceDevice dev(*link);
    r = run_alice(params, k0, *ch, dev, party_rng(sh.seed, Role::kAlice));
  } else {
    BobDevice dev(model, *link, device_rng(sh.seed));
    r = run_bob(params, k0, *ch, dev, party_rng(sh.seed, Role::kBob));
  }
  ch->close();
  link->close();
  const auto b = balance_sheet(r.pads_spent, k0.reusable_bits(), r.success ? params.ell : 0);
  write_party(sh.out, who, r, b, r.success, r.reason);
  if (!r.success) std::cout << "detail=" << r.detail << "\n";
  return report(r.success, r.reason, b, r.transcript.leakage_bits(), r.key.size());
}

// ---- ec-bench

struct EcBenchArgs {
  std::uint64_t n = 100000;
  std::string gamma = "13/256";
  double S = 2.6507, Q = 0.0239;
  std::string eta_grid;
  int trials = 10;
  std::uint32_t coupling_length = 80;
  unsigned workers = 1;
  int max_iters = 200;
};

int cmd_ec_bench(const EcBenchArgs& a, const Shared& sh) {
  if (a.n == 0 || a.n > kEcBenchMaxN) {
    throw DomainError("n must be in [1, " + std::to_string(kEcBenchMaxN) + "]");
  }
  if (a.trials < 0) throw DomainError("trials must be non-negative");
  const auto gamma = Rational::parse(a.gamma);
  const double n = static_cast<double>(a.n);
  std::vector<std::uint64_t> ms;
  if (a.eta_grid.empty()) {
    ms.push_back(syndrome_length(n, gamma.value(), a.S, a.Q));
  } else {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(a.eta_grid);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) ||
        !(lo > 0) || hi < lo || hi >= 1) {
      throw DomainError("--eta-grid must be lo:hi:step with 0 < lo <= hi < 1");
    }
    for (int k = 0; lo + k * step <= hi + 1e-12; ++k) {
      ms.push_back(static_cast<std::uint64_t>(std::ceil(n * (lo + k * step))));
    }
  }
  const auto model = DeviceModel::parametric(a.S, a.Q);
  const auto priors = DecoderPriors::from_parametric(a.S, a.Q);
  const InputPolicy policy(gamma);
  BpOptions bp;
  bp.workers = a.workers;
  bp.max_iters = a.max_iters;
  std::cout << "eta_inf="
            << gamma.value() * binary_entropy((4.0 - a.S) / 8.0) +
                   (1.0 - gamma.value()) * binary_entropy(a.Q)
            << "\n";
  std::cout << std::left << std::setw(12) << "eta" << std::setw(10) << "m" << std::setw(10)
            << "success" << std::setw(8) << "trials" << "rate\n";
  for (std::size_t g = 0; g < ms.size() && a.trials > 0; ++g) {
    const auto m = ms[g];
    Rng code_rng(splitmix64(sh.seed + g));
    CodeConfig cc;
    cc.coupling_length = a.coupling_length;
    const auto code = build_code(static_cast<std::uint32_t>(a.n), static_cast<std::uint32_t>(m),
                                 cc, code_rng, splitmix64(sh.seed ^ (g + 1)));
    int ok = 0;
    for (int tr = 0; tr < a.trials; ++tr) {
      Rng rng(splitmix64((sh.seed << 20) ^ (g << 10) ^ static_cast<std::uint64_t>(tr)));
      BitVector av(a.n), bv(a.n);
      std::vector<SettingPair> settings(a.n);
      for (std::uint64_t i = 0; i < a.n; ++i) {
        const auto r = sample_round(model, policy, rng, i);
        av.set(i, r.a);
        bv.set(i, r.b);
        settings[i] = {r.x, r.y};
      }
      const auto res = decode(code, bv, settings, priors, encode(code, av), bp);
      ok += res.success && res.a_hat == av;
    }
    const double eta = static_cast<double>(m) / n;
    std::cout << std::left << std::setw(12) << std::setprecision(6) << eta << std::setw(10) << m
              << std::setw(10) << ok << std::setw(8) << a.trials
              << static_cast<double>(ok) / a.trials << "\n";
    std::cout << "point=" << g << " eta=" << eta << " m=" << m << " success=" << ok
              << " trials=" << a.trials << "\n";
  }
  return 0;
}

// ---- extract

struct ExtractArgs {
  std::string source, source_hex;
  std::string seed_file, seed_hex;
  std::uint64_t ell = 0;
  double eps_pa = 1e-10;
  unsigned workers = 1;
};

BitVector bits_from(const std::string& file, const std::string& hex, const char* what) {
  if (!file.empty() && !hex.empty()) {
    throw DomainError(std::string("give either a file or hex for ") + what);
  }
  if (!file.empty()) return read_bit_file(file);
  const auto bytes = from_hex(hex);
  return BitVector::from_bytes(bytes, bytes.size() * 8);
}

int cmd_extract(const ExtractArgs& a, const Shared& sh) {
  if (a.source.empty() && a.source_hex.empty()) throw DomainError("--source is required");
  const auto source = bits_from(a.source, a.source_hex, "the source");
  const auto p = plan(source.size(), a.ell, a.eps_pa);
  ensure_dir(sh.out);
  BitVector seed;
  if (a.seed_file.empty() && a.seed_hex.empty()) {
    Rng rng(sh.seed);
    seed = BitVector(p.s);
    for (std::uint64_t i = 0; i < p.s; ++i) seed.set(i, rng.bit());
    write_bit_file(join(sh.out, "seed.bin"), seed);
  } else {
    seed = bits_from(a.seed_file, a.seed_hex, "the seed");
    if (!a.seed_hex.empty() && seed.size() > p.s) seed = seed.slice(0, p.s);
  }
  if (seed.size() != p.s) {
    throw DomainError("seed has " + std::to_string(seed.size()) + " bits, need " +
                      std::to_string(p.s));
  }
  const auto key = extract(source, seed, p, a.workers);
  write_bit_file(join(sh.out, "key.bin"), key);
  std::cout << "n=" << p.n << "\nell=" << p.ell << "\neps1=" << p.eps1 << "\nt=" << p.t
            << "\nt_plus=" << p.t_plus << "\nblocks=" << p.blocks << "\ns=" << p.s << "\n";
  if (key.size() <= 4096) std::cout << "key_hex=" << to_hex(key.bytes()) << "\n";
  return 0;
}

// ---- hash

struct HashArgs {
  std::string message, message_hex;
  std::string hash_seed_file, hash_seed_hex;
  std::string pad_hex;
};

int cmd_hash(const HashArgs& a, const Shared& sh) {
  std::vector<std::uint8_t> msg;
  if (!a.message.empty() && !a.message_hex.empty()) {
    throw DomainError("give either --message or --message-hex");
  }
  if (!a.message.empty()) msg = read_file_bytes(a.message);
  if (!a.message_hex.empty()) msg = from_hex(a.message_hex);
  HashSeed seed = [&] {
    if (a.hash_seed_file.empty() && a.hash_seed_hex.empty()) {
      Rng rng(sh.seed);
      return HashSeed::random(rng);
    }
    const auto bits = bits_from(a.hash_seed_file, a.hash_seed_hex, "the hash seed");
    if (bits.size() != kHashSeedBits) {
      throw DomainError("hash seed must have " + std::to_string(kHashSeedBits) + " bits");
    }
    return HashSeed::from_bits(bits);
  }();
  std::uint64_t pad = 0;
  if (!a.pad_hex.empty()) {
    const auto b = from_hex(a.pad_hex);
    if (b.size() != 8) throw DomainError("--pad must be 16 hex digits");
    pad = get_u64_le(b);
  }
  const auto tag = wc_tag(seed, pad, msg);
  std::vector<std::uint8_t> tb;
  put_u64_le(tb, tag.value);
  std::cout << "message_bytes=" << msg.size() << "\ntag=" << to_hex(tb)
            << "\nepsilon=" << au_hash_epsilon(msg.size()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diqkd: DIQKD post-processing toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Shared sh;
  KeylenArgs kl;
  auto* keylen = app.add_subcommand("keylen", "Finite-size key length and breakdown");
  add_shared(keylen, sh);
  keylen->add_option("--n", kl.n, "Rounds")->required();
  keylen->add_option("--gamma", kl.gamma, "Test probability NUM/DEN");
  keylen->add_option("--S", kl.S, "Expected CHSH score")->required();
  keylen->add_option("--Q", kl.Q, "Expected QBER")->required();
  keylen->add_option("--eps-snd", kl.eps_snd, "Soundness target");
  keylen->add_option("--omega-thresh", kl.omega_thresh, "Override the threshold");
  keylen->add_option("--m", kl.m, "Override the syndrome length");
  keylen->add_option("--multistarts", kl.multistarts, "Optimizer starts");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Simulate the full protocol");
  add_shared(run, sh);
  run->add_option("--role", ra.role, "alice, bob, or both (inproc)");
  run->add_option("--transport", ra.transport, "inproc or tcp");
  run->add_option("--listen", ra.listen, "host:port to listen on (tcp)");
  run->add_option("--connect", ra.connect, "host:port to connect to (tcp)");
  run->add_option("--session", ra.session, "Session token shared by both processes");
  run->add_option("--k0", ra.k0, "Pre-shared key file; generated from --seed if absent");
  run->add_option("--fault", ra.fault, "flip-<frame>-bit:K or drop-<frame>");
  run->add_option("--n", ra.n, "Rounds");
  run->add_option("--gamma", ra.gamma, "Test probability NUM/DEN");
  run->add_option("--S", ra.S, "Expected CHSH score");
  run->add_option("--Q", ra.Q, "Expected QBER");
  run->add_option("--device-S", ra.device_S, "Simulated device score (default --S)");
  run->add_option("--device-Q", ra.device_Q, "Simulated device QBER (default --Q)");
  run->add_option("--eps-snd", ra.eps_snd, "Soundness target");
  run->add_option("--omega-thresh", ra.omega_thresh, "Override the threshold");
  run->add_option("--m", ra.m, "Override the syndrome length");
  run->add_option("--ell", ra.ell, "Key length (default: optimizer budget)");
  run->add_flag("--no-budget-check", ra.no_budget_check,
                "Accept --ell above the budget (pipeline testing only)");
  run->add_option("--code-seed", ra.code_seed, "Code construction seed");
  run->add_option("--coupling-length", ra.coupling_length, "Spatial coupling length L");
  run->add_option("--workers", ra.workers, "Decoder and extractor threads");
  run->add_option("--max-iters", ra.max_iters, "BP iteration cap");
  run->add_option("--timeout-ms", ra.timeout_ms, "Receive timeout");

  EcBenchArgs eb;
  auto* ec = app.add_subcommand("ec-bench", "Decoding success versus overhead");
  add_shared(ec, sh);
  ec->add_option("--n", eb.n, "Block length");
  ec->add_option("--gamma", eb.gamma, "Test probability NUM/DEN");
  ec->add_option("--S", eb.S, "CHSH score");
  ec->add_option("--Q", eb.Q, "QBER");
  ec->add_option("--eta-grid", eb.eta_grid, "lo:hi:step over m/n (default: syndrome_length)");
  ec->add_option("--trials", eb.trials, "Trials per point");
  ec->add_option("--coupling-length", eb.coupling_length, "Spatial coupling length L");
  ec->add_option("--workers", eb.workers, "Decoder threads");
  ec->add_option("--max-iters", eb.max_iters, "BP iteration cap");

  ExtractArgs ea;
  auto* ex = app.add_subcommand("extract", "Trevisan extraction");
  add_shared(ex, sh);
  ex->add_option("--source", ea.source, "Source bit file");
  ex->add_option("--source-hex", ea.source_hex, "Source as hex");
  ex->add_option("--seed-file", ea.seed_file, "Seed bit file (random from --seed if absent)");
  ex->add_option("--seed-hex", ea.seed_hex, "Seed as hex");
  ex->add_option("--ell", ea.ell, "Output bits")->required();
  ex->add_option("--eps-pa", ea.eps_pa, "Extractor error");
  ex->add_option("--workers", ea.workers, "Threads");

  HashArgs ha;
  auto* hs = app.add_subcommand("hash", "Wegman-Carter tag of a message");
  add_shared(hs, sh);
  hs->add_option("--message", ha.message, "Message file");
  hs->add_option("--message-hex", ha.message_hex, "Message as hex");
  hs->add_option("--hash-seed-file", ha.hash_seed_file, "1280-bit seed file");
  hs->add_option("--hash-seed-hex", ha.hash_seed_hex, "1280-bit seed as hex");
  hs->add_option("--pad", ha.pad_hex, "64-bit pad as hex (default zero)");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  print_config(sub);
  try {
    if (sub == keylen) return cmd_keylen(kl, sh);
    if (sub == run) return cmd_run(ra, sh);
    if (sub == ec) return cmd_ec_bench(eb, sh);
    if (sub == ex) return cmd_extract(ea, sh);
    return cmd_hash(ha, sh);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ChannelError& e) {
    std::cerr << "channel error: " << e.what() << "\n";
    return kExitTransport;
  }
}
