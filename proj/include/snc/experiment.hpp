#pragma once
// JSON-configured Monte Carlo experiments: per adversary configuration,
// derive the channel, build a secure code, run trials and report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "snc/attack.hpp"
#include "snc/network.hpp"
#include "snc/privacy_amp.hpp"
#include "snc/robust_code.hpp"
#include "snc/scenarios.hpp"
#include "snc/secrecy_oracle.hpp"

namespace snc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double low = 0, high = 1;
};

/// Wilson score interval; z = 1.96 gives 95%.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials), p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// ---------------------------------------------------------------------------
// Built-in networks.

/// Alice -> r<i> -> Bob for i = 1..paths, one source coordinate per path.
inline LinearNetwork relay_paths_network(std::size_t paths, const FieldSpec& f = make_prime_field(2)) {
  LinearNetwork net(f);
  const auto a = net.add_node("alice", NodeRole::Source);
  const auto b = net.add_node("bob", NodeRole::Sink);
  net.set_source_dim(paths);
  for (std::size_t p = 1; p <= paths; ++p) {
    const auto r = net.add_node("r" + std::to_string(p));
    const auto e = net.add_edge(a, r, {{{InputRef::Kind::Source, p}, 1}});
    net.add_sink_read(net.add_edge(r, b, {{{InputRef::Kind::Edge, e}, 1}}));
  }
  net.validate();
  return net;
}

/// m parallel edges Alice -> Bob.
inline LinearNetwork identity_network(std::size_t m, const FieldSpec& f = make_prime_field(2)) {
  LinearNetwork net(f);
  const auto a = net.add_node("alice", NodeRole::Source);
  const auto b = net.add_node("bob", NodeRole::Sink);
  net.set_source_dim(m);
  for (std::size_t p = 1; p <= m; ++p) net.add_sink_read(net.add_edge(a, b, {{{InputRef::Kind::Source, p}, 1}}));
  net.validate();
  return net;
}

// ---------------------------------------------------------------------------
// Configuration.

enum class CodeKind { Robust, Secrecy };
enum class AttackKind { Passive, Random, Replace };

inline const char* to_string(CodeKind k) { return k == CodeKind::Robust ? "robust" : "secrecy"; }
inline const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Passive: return "passive";
    case AttackKind::Random: return "random";
    default: return "replace";
  }
}

struct AdversaryConfig {
  std::vector<std::string> nodes;
  AdversaryPlacement edges;  // explicit wiretap/inject lists
};

struct ExperimentConfig {
  std::shared_ptr<const LinearNetwork> network;
  std::vector<AdversaryConfig> adversaries;
  CodeKind code = CodeKind::Robust;
  std::size_t n = 4;
  std::optional<std::size_t> t;  // extension degree; default from lift_block
  AttackKind strategy = AttackKind::Passive;
  TimeOrder order = TimeOrder::TransmissionMajor;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  unsigned seed_tries = 64;
  std::optional<std::string> report;
};

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return get_or<T>(j, key, T{});
}

inline std::vector<std::size_t> edge_list(const nlohmann::json& j, const char* key) {
  auto v = get_or<std::vector<std::size_t>>(j, key, {});
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::shared_ptr<const LinearNetwork> network_from_json(const nlohmann::json& j,
                                                              const std::filesystem::path& base_dir,
                                                              AdversaryPlacement& file_adv) {
  if (!j.is_object()) throw ConfigError("'network' must be an object");
  if (j.contains("file")) {
    std::filesystem::path p = require<std::string>(j, "file");
    if (p.is_relative()) p = base_dir / p;
    try {
      auto desc = load_network(p.string());
      file_adv = desc.placement();
      return std::make_shared<const LinearNetwork>(std::move(desc.network));
    } catch (const NetworkError& e) {
      throw ConfigError(e.what());
    }
  }
  const auto kind = require<std::string>(j, "builtin");
  FieldSpec f = make_prime_field(2);
  if (j.contains("field")) {
    try {
      f = parse_field(require<std::string>(j, "field"));
    } catch (const FieldError& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    if (kind == "circle") {
      return std::make_shared<const LinearNetwork>(circle_network(require<std::size_t>(j, "k"), require<std::size_t>(j, "l"),
                                                                  require<std::size_t>(j, "alice"),
                                                                  require<std::size_t>(j, "bob"), f));
    }
    if (kind == "two-path") return std::make_shared<const LinearNetwork>(relay_paths_network(2, f));
    if (kind == "relay-paths") {
      return std::make_shared<const LinearNetwork>(relay_paths_network(require<std::size_t>(j, "paths"), f));
    }
    if (kind == "identity") return std::make_shared<const LinearNetwork>(identity_network(require<std::size_t>(j, "m"), f));
  } catch (const NetworkError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown builtin network '" + kind + "'");
}

}  // namespace detail

inline ExperimentConfig parse_experiment(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig c;
  AdversaryPlacement file_adv;
  c.network = detail::network_from_json(detail::require<nlohmann::json>(j, "network"), base_dir, file_adv);

  if (j.contains("adversaries")) {
    const auto& list = j.at("adversaries");
    if (!list.is_array()) throw ConfigError("'adversaries' must be an array");
    for (const auto& a : list) {
      if (!a.is_object()) throw ConfigError("adversary entries must be objects");
      if (a.contains("max_nodes")) {
        const auto cmax = detail::require<std::size_t>(a, "max_nodes");
        const auto names = intermediate_nodes(*c.network);
        for (std::size_t s = 1; s <= cmax; ++s)
          for_each_subset(names, s, [&](const std::vector<std::string>& pick) { c.adversaries.push_back({pick, {}}); });
        continue;
      }
      AdversaryConfig ac;
      ac.nodes = detail::get_or<std::vector<std::string>>(a, "nodes", {});
      ac.edges = {detail::edge_list(a, "wiretap"), detail::edge_list(a, "inject")};
      c.adversaries.push_back(std::move(ac));
    }
  }
  if (!file_adv.empty()) {
    for (auto& a : c.adversaries) a.edges = merge(a.edges, file_adv);
  }
  if (c.adversaries.empty()) c.adversaries.push_back({{}, file_adv});

  const auto code = detail::get_or<nlohmann::json>(j, "code", nlohmann::json::object());
  const auto kind = detail::get_or<std::string>(code, "kind", "robust");
  if (kind == "robust") c.code = CodeKind::Robust;
  else if (kind == "secrecy") c.code = CodeKind::Secrecy;
  else throw ConfigError("code.kind must be 'robust' or 'secrecy'");
  c.n = detail::get_or<std::size_t>(code, "n", 4);
  if (c.n < 2) throw ConfigError("code.n must be >= 2");
  if (code.contains("t")) {
    c.t = detail::require<std::size_t>(code, "t");
    if (*c.t < 1) throw ConfigError("code.t must be >= 1");
  }

  const auto strat = detail::get_or<std::string>(j, "strategy", "passive");
  if (strat == "passive") c.strategy = AttackKind::Passive;
  else if (strat == "random") c.strategy = AttackKind::Random;
  else if (strat == "replace") c.strategy = AttackKind::Replace;
  else throw ConfigError("strategy must be passive, random or replace");

  const auto order = detail::get_or<std::string>(j, "order", "transmission-major");
  if (order == "transmission-major") c.order = TimeOrder::TransmissionMajor;
  else if (order == "edge-major") c.order = TimeOrder::EdgeMajor;
  else throw ConfigError("order must be transmission-major or edge-major");

  c.trials = detail::get_or<std::uint64_t>(j, "trials", 100);
  c.seed = detail::get_or<std::uint64_t>(j, "seed", 1);
  c.threads = detail::get_or<unsigned>(j, "threads", 1);
  c.seed_tries = detail::get_or<unsigned>(j, "seed_tries", 64);
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (j.contains("report")) c.report = detail::require<std::string>(j, "report");
  return c;
}

inline ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_experiment(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Results.

enum class ConfigStatus { Pass, Fail, Infeasible };

inline const char* to_string(ConfigStatus s) {
  switch (s) {
    case ConfigStatus::Pass: return "pass";
    case ConfigStatus::Fail: return "fail";
    default: return "infeasible";
  }
}

struct ConfigResult {
  AdversaryConfig adversary;
  AdversaryPlacement placement;
  ChannelParams params;
  Rates rates;
  ConfigStatus status = ConfigStatus::Pass;
  std::string reason;

  std::size_t t = 0, l = 0, k = 0, kbar = 0, tag_bits = 0;
  std::uint64_t q_ext = 0;
  std::size_t seed_tries = 0;
  std::size_t leakage_logq = 0;
  double leakage_nats = 0, leakage_bound_nats = 0;

  std::uint64_t trials = 0, successes = 0, detected = 0, undetected = 0;
  Interval ci;
  double failure_bound = 0;
  double undetected_bound = 0;
  std::size_t key_symbols = 0;  // one-time-pad key per block
  double seconds = 0;
};

struct ExperimentReport {
  CodeKind code = CodeKind::Robust;
  AttackKind strategy = AttackKind::Passive;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<ConfigResult> configs;

  std::size_t count(ConfigStatus s) const {
    return static_cast<std::size_t>(std::count_if(configs.begin(), configs.end(), [s](const auto& c) { return c.status == s; }));
  }
  bool all_pass() const { return count(ConfigStatus::Fail) == 0; }

  std::string format(bool timing = false) const {
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", v);
      return std::string(buf);
    };
    auto list = [](const std::vector<std::size_t>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s.empty() ? std::string("-") : s;
    };
    std::ostringstream os;
    os << "code=" << to_string(code) << " strategy=" << to_string(strategy) << " n=" << n << " seed=" << seed << "\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const auto& c = configs[i];
      os << "[config " << i + 1 << "]\n";
      std::string nodes;
      for (std::size_t j = 0; j < c.adversary.nodes.size(); ++j) nodes += (j ? "," : "") + c.adversary.nodes[j];
      os << "nodes=" << (nodes.empty() ? "-" : nodes) << "\n";
      os << "wiretap=" << list(c.placement.wiretap) << "\n";
      os << "inject=" << list(c.placement.inject) << "\n";
      const auto& p = c.params;
      os << "m0=" << p.m0 << " m1=" << p.m1 << " m2=" << p.m2 << " m3=" << p.m3 << " m4=" << p.m4 << " m5=" << p.m5
         << " m6=" << p.m6 << "\n";
      os << "rate_robust=" << c.rates.robust_secure << " rate_secrecy=" << c.rates.secrecy_only << "\n";
      if (c.status == ConfigStatus::Infeasible) {
        os << "reason=" << c.reason << "\n";
        os << "status=infeasible\n";
        continue;
      }
      os << "t=" << c.t << " q_ext=" << c.q_ext << " l=" << c.l << " k=" << c.k << " kbar=" << c.kbar << "\n";
      os << "key_symbols=" << c.key_symbols << "\n";
      os << "seed_tries=" << c.seed_tries << "\n";
      os << "leakage_logq=" << c.leakage_logq << "\n";
      os << "leakage_nats=" << num(c.leakage_nats) << "\n";
      os << "leakage_bound_nats=" << num(c.leakage_bound_nats) << "\n";
      os << "trials=" << c.trials << "\n";
      os << "successes=" << c.successes << "\n";
      os << "success_rate=" << num(c.trials ? double(c.successes) / double(c.trials) : 0.0) << "\n";
      os << "ci95=" << num(c.ci.low) << "," << num(c.ci.high) << "\n";
      os << "failure_bound=" << num(c.failure_bound) << "\n";
      os << "detected_errors=" << c.detected << "\n";
      os << "undetected_errors=" << c.undetected << "\n";
      if (c.tag_bits) os << "tag_bits=" << c.tag_bits << " undetected_bound=" << num(c.undetected_bound) << "\n";
      if (timing) os << "seconds=" << num(c.seconds) << "\n";
      if (!c.reason.empty()) os << "reason=" << c.reason << "\n";
      os << "status=" << to_string(c.status) << "\n";
    }
    os << "[summary]\n";
    os << "configs=" << configs.size() << " pass=" << count(ConfigStatus::Pass) << " fail=" << count(ConfigStatus::Fail)
       << " infeasible=" << count(ConfigStatus::Infeasible) << "\n";
    os << "result=" << (all_pass() ? "pass" : "fail") << "\n";
    return os.str();
  }
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t config, std::uint64_t trial) {
  return splitmix(splitmix(splitmix(seed) ^ (config + 1)) ^ trial);
}

inline std::vector<std::uint8_t> to_bits(const std::vector<Symbol>& v) { return {v.begin(), v.end()}; }

}  // namespace detail

/// Builds the inner code for one channel: robust codes carry m0 - m1 message
/// rows, secrecy codes all m0.
template <class Rng>
std::shared_ptr<const RobustInnerCode> make_inner(const FieldSpec& base, const ExperimentConfig& cfg,
                                                  const ChannelParams& p, Rng& rng) {
  const std::size_t m1 = cfg.code == CodeKind::Robust ? p.m1 : 0;
  return std::make_shared<const RobustInnerCode>(base, cfg.n, p.m0, m1, p.m3, p.m4, rng, cfg.t);
}

inline ConfigResult run_configuration(const ExperimentConfig& cfg, std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  const LinearNetwork& net = *cfg.network;
  const FieldSpec& f = net.field();
  ConfigResult r;
  r.adversary = cfg.adversaries[index];
  r.placement = merge(node_to_edge(net, r.adversary.nodes), r.adversary.edges);
  validate_placement(net, r.placement);
  const TransferMatrices tm = derive_transfer(net, r.placement);
  r.params = channel_params(tm);
  r.rates = rates(r.params.m0, r.params.m1, r.params.m2);
  const auto& p = r.params;

  const bool feasible = cfg.code == CodeKind::Robust ? r.rates.robust_achievable : r.rates.secrecy_achievable;
  if (!feasible) {
    r.status = ConfigStatus::Infeasible;
    r.reason = cfg.code == CodeKind::Robust ? "m1+m2>=m0" : "m2>=m0";
    return r;
  }

  std::mt19937_64 ref_rng(detail::trial_seed(cfg.seed, index, ~std::uint64_t{0}));
  auto ref = make_inner(f, cfg, p, ref_rng);
  r.t = ref->block().t;
  r.l = ref->block_length();
  r.q_ext = ref->block().field.order();
  r.k = ref->message_length();
  r.key_symbols = net.edge_count() * r.l;
  HashSpec spec;
  try {
    spec = make_hash_spec(r.k, r.l, p.m2);
  } catch (const HashError&) {
    r.status = ConfigStatus::Infeasible;
    r.reason = "block too short for privacy amplification";
    return r;
  }
  r.kbar = spec.kbar;
  r.leakage_bound_nats = leakage_bound(1.0, spec.kbar, spec.k, r.l, p.m2, f.order()).value;

  // Seed search on a reference key: first seed with zero exact leakage.
  std::vector<Symbol> seed;
  std::size_t best = SIZE_MAX;
  for (unsigned tryi = 0; tryi < cfg.seed_tries; ++tryi) {
    std::vector<Symbol> s(spec.seed_length());
    for (auto& v : s) v = uniform_symbol(f, ref_rng);
    const auto leak = leakage_of_secure_code(SecureCode(ref, spec, s), tm.ke).logq;
    r.seed_tries = tryi + 1;
    if (leak < best) {
      best = leak;
      seed = s;
    }
    if (leak == 0) break;
  }
  r.leakage_logq = best;
  r.leakage_nats = static_cast<double>(best) * std::log(static_cast<double>(f.order()));

  // Tags: GF(2) only, b = max(1, m2) bits over the decoded message.
  const bool tagged = cfg.code == CodeKind::Secrecy && f.order() == 2 && f.is_prime_field();
  if (tagged) r.tag_bits = std::min<std::size_t>(std::max<std::size_t>(1, p.m2), spec.kbar);

  r.trials = cfg.trials;
  std::vector<std::uint8_t> outcome(cfg.trials, 0);  // 0 ok, 1 detected, 2 undetected
  auto run_trial = [&](std::uint64_t trial) {
    std::mt19937_64 rng(detail::trial_seed(cfg.seed, index, trial));
    auto inner = make_inner(f, cfg, p, rng);
    SecureCode code(inner, spec, seed);
    std::vector<Symbol> mbar(spec.kbar), l(spec.d());
    for (auto& v : mbar) v = uniform_symbol(f, rng);
    for (auto& v : l) v = uniform_symbol(f, rng);
    const auto block = code.encode(mbar, l);
    Strategy strategy = passive();
    const std::uint64_t sseed = rng();
    if (cfg.strategy == AttackKind::Random) strategy = random_strategy(sseed, f);
    if (cfg.strategy == AttackKind::Replace) {
      const std::uint64_t q = f.order();
      strategy = replacement_strategy(r.placement, f, [sseed, q](std::size_t u, std::size_t i) {
        const std::uint64_t h = detail::splitmix(sseed ^ (std::uint64_t(u) << 32) ^ i);
        return static_cast<Symbol>((static_cast<unsigned __int128>(h) * q) >> 64);
      });
    }
    const auto run = simulate(tm, r.placement, block.input, strategy, cfg.order);
    const auto got = code.decode(run.yb, block.side);
    if (tagged) {
      std::vector<std::uint8_t> tseed(spec.kbar - 1);
      for (auto& b : tseed) b = static_cast<std::uint8_t>(rng() & 1);
      const Tag tag = make_tag(detail::to_bits(mbar), tseed, r.tag_bits);
      if (!got || !check_tag(detail::to_bits(*got), tag)) {
        outcome[trial] = 1;
        return;
      }
    }
    if (!got) outcome[trial] = 1;
    else if (*got != mbar) outcome[trial] = 2;
  };
  const unsigned threads = std::min<std::uint64_t>(cfg.threads, std::max<std::uint64_t>(1, cfg.trials));
  if (threads <= 1) {
    for (std::uint64_t t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t t = w; t < cfg.trials; t += threads) run_trial(t);
      });
    }
  }
  for (auto o : outcome) {
    if (o == 0) ++r.successes;
    else if (o == 1) ++r.detected;
    else ++r.undetected;
  }
  r.ci = wilson_interval(r.successes, r.trials);

  // Failure allowance: n^{m0+1}/q' from the Vandermonde argument plus
  // 2/(q'-1) for the invertibility of the reduced channel.
  const double qe = static_cast<double>(r.q_ext);
  r.failure_bound = std::min(1.0, std::pow(double(cfg.n), double(p.m0 + 1)) / qe + 2.0 / (qe - 1.0));
  const double trials = static_cast<double>(std::max<std::uint64_t>(1, r.trials));
  auto sigma = [&](double b) { return std::sqrt(b * (1 - b) / trials); };
  const double fail_rate = 1.0 - static_cast<double>(r.successes) / trials;
  const double undetected_rate = static_cast<double>(r.undetected) / trials;

  std::vector<std::string> why;
  if (r.leakage_logq != 0 && r.leakage_nats > r.leakage_bound_nats) why.push_back("leakage above bound");
  const bool robust_claim = cfg.code == CodeKind::Robust || cfg.strategy == AttackKind::Passive || p.m5 == 0;
  if (robust_claim && fail_rate > r.failure_bound + 3 * sigma(r.failure_bound)) why.push_back("failure rate above bound");
  if (tagged) {
    r.undetected_bound = std::ldexp(1.0, -static_cast<int>(r.tag_bits));
    if (undetected_rate > r.undetected_bound + 3 * sigma(r.undetected_bound)) why.push_back("undetected errors above bound");
  }
  for (std::size_t i = 0; i < why.size(); ++i) r.reason += (i ? ";" : "") + why[i];
  r.status = why.empty() ? ConfigStatus::Pass : ConfigStatus::Fail;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.code = cfg.code;
  rep.strategy = cfg.strategy;
  rep.n = cfg.n;
  rep.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.adversaries.size(); ++i) rep.configs.push_back(run_configuration(cfg, i));
  return rep;
}

// ---------------------------------------------------------------------------
// Active-versus-passive audit configs: one network, one adversary, a linear encoder.

struct AuditConfig {
  AuditInstance instance;
  EnumerationOptions options{TimeOrder::TransmissionMajor, true};
};

inline AuditConfig parse_audit(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  if (!j.is_object()) throw ConfigError("audit config must be a JSON object");
  AdversaryPlacement file_adv;
  auto net = detail::network_from_json(detail::require<nlohmann::json>(j, "network"), base_dir, file_adv);
  const auto adv_json = detail::get_or<nlohmann::json>(j, "adversary", nlohmann::json::object());
  AdversaryPlacement adv{detail::edge_list(adv_json, "wiretap"), detail::edge_list(adv_json, "inject")};
  try {
    adv = merge(merge(adv, file_adv), node_to_edge(*net, detail::get_or<std::vector<std::string>>(adv_json, "nodes", {})));
    validate_placement(*net, adv);
  } catch (const NetworkError& e) {
    throw ConfigError(e.what());
  }

  AuditConfig c;
  auto& inst = c.instance;
  inst.tm = derive_transfer(*net, adv);
  inst.adv = adv;
  inst.n = detail::get_or<std::size_t>(j, "n", 1);
  inst.message_length = detail::get_or<std::size_t>(j, "message_length", 1);
  inst.scramble_length = detail::get_or<std::size_t>(j, "scramble_length", 0);
  const FieldSpec& f = net->field();
  const std::size_t rows = net->source_dim() * inst.n, cols = inst.message_length + inst.scramble_length;
  FqMatrix g;
  if (j.contains("generator")) {
    try {
      g = FqMatrix::parse(f, detail::require<std::string>(j, "generator"));
    } catch (const FieldError& e) {
      throw ConfigError(std::string("generator: ") + e.what());
    }
    if (g.rows() != rows || g.cols() != cols) {
      throw ConfigError("generator must be " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  } else {
    std::mt19937_64 rng(detail::get_or<std::uint64_t>(j, "seed", 1));
    g = random_matrix(f, rows, cols, rng);
  }
  inst.encoder = linear_encoder(g, net->source_dim(), inst.n);
  const auto order = detail::get_or<std::string>(j, "order", "transmission-major");
  if (order == "edge-major") c.options.order = TimeOrder::EdgeMajor;
  else if (order != "transmission-major") throw ConfigError("order must be transmission-major or edge-major");
  c.options.include_all = detail::get_or<bool>(j, "include_all", true);
  return c;
}

inline AuditConfig load_audit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return parse_audit(nlohmann::json::parse(in), std::filesystem::path(path).parent_path());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace snc
