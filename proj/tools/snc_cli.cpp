// snc_cli: command-line front end for the secure network coding simulator.
// Exit codes: 0 all checks pass, 1 a check or validation failed, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snc/snc.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Bad input files, configs and field literals: usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

snc::NetworkDescription load(const std::string& path) {
  try {
    return snc::parse_network(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

snc::FieldSpec field_of_order(std::uint64_t q) {
  if (q < 2) throw UsageError("field order must be >= 2");
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  std::size_t t = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++t;
  }
  if (r != 1) throw UsageError("field order must be a prime power: " + std::to_string(q));
  auto base = snc::make_prime_field(p);
  return t == 1 ? base : snc::make_extension_field(base, t);
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

void print_params(const snc::ChannelParams& p) {
  std::cout << "m0=" << p.m0 << " m1=" << p.m1 << " m2=" << p.m2 << " m3=" << p.m3 << " m4=" << p.m4
            << " m5=" << p.m5 << " m6=" << p.m6 << "\n";
}

void print_rates(const snc::Rates& r) {
  std::cout << "rate_robust=" << r.robust_secure << " robust_achievable=" << (r.robust_achievable ? 1 : 0) << "\n";
  std::cout << "rate_secrecy=" << r.secrecy_only << " secrecy_achievable=" << (r.secrecy_achievable ? 1 : 0) << "\n";
}

void write_report(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure network coding simulator"};
  app.require_subcommand(1);

  // params
  auto* params = app.add_subcommand("params", "Channel parameters for a network and adversary");
  std::string net_path;
  std::vector<std::string> nodes;
  std::vector<std::size_t> wiretap, inject;
  params->add_option("--network", net_path, "network file")->required();
  params->add_option("--nodes", nodes, "attacked intermediate nodes")->delimiter(',');
  params->add_option("--wiretap", wiretap, "extra wiretapped edges")->delimiter(',');
  params->add_option("--inject", inject, "extra injection edges")->delimiter(',');

  // table2
  auto* table2 = app.add_subcommand("table2", "Compare per-node-set ranks against an expected table");
  std::string expect_path;
  table2->add_option("--network", net_path, "network file")->required();
  table2->add_option("--expect", expect_path, "expected rank table")->required();

  // circle
  auto* circle = app.add_subcommand("circle", "Circle network of trusted relays");
  std::size_t ck = 12, cl = 2, alice = 1, bob = 8, attack_size = 1;
  bool list_subsets = false;
  circle->add_option("--k", ck, "number of nodes")->capture_default_str();
  circle->add_option("--l", cl, "reach")->capture_default_str();
  circle->add_option("--alice", alice, "sender node index")->capture_default_str();
  circle->add_option("--bob", bob, "receiver node index")->capture_default_str();
  circle->add_option("--attack-size", attack_size, "largest attacked node set")->capture_default_str();
  circle->add_flag("--list", list_subsets, "print every attacked subset");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a JSON-configured experiment");
  std::string config_path, out_path;
  bool timing = false;
  simulate->add_option("--config", config_path, "experiment config")->required();
  simulate->add_option("--out", out_path, "also write the report here");
  simulate->add_flag("--timing", timing, "include wall-clock seconds (not reproducible)");

  // mi-audit
  auto* audit = app.add_subcommand("mi-audit", "Exact active-versus-passive leakage audit");
  audit->add_option("--config", config_path, "audit config")->required();

  // hash-check
  auto* hash = app.add_subcommand("hash-check", "Exhaustive universal2 check of the Toeplitz family");
  std::size_t kn = 4, kbar = 2;
  std::uint64_t q = 2;
  hash->add_option("--kn", kn, "input length")->required();
  hash->add_option("--kbar", kbar, "output length")->required();
  hash->add_option("--q", q, "field order")->capture_default_str();

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "Achievable rates for given ranks");
  std::size_t m0 = 0, m1 = 0, m2 = 0;
  rates_cmd->add_option("--m0", m0)->required();
  rates_cmd->add_option("--m1", m1)->required();
  rates_cmd->add_option("--m2", m2)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*params) {
      auto desc = load(net_path);
      const snc::AdversaryPlacement adv =
          snc::merge(snc::merge(desc.placement(), snc::node_to_edge(desc.network, nodes)), {wiretap, inject});
      snc::validate_placement(desc.network, adv);
      const auto tm = snc::derive_transfer(desc.network, adv);
      const auto p = snc::channel_params(tm);
      std::cout << "field=" << desc.network.field().to_string() << "\n";
      std::cout << "wiretap=" << join(adv.wiretap) << "\n";
      std::cout << "inject=" << join(adv.inject) << "\n";
      print_params(p);
      print_rates(snc::rates(p.m0, p.m1, p.m2));
      std::cout << "causal=" << (snc::is_causal(tm, adv) ? 1 : 0) << "\n";
      return kPass;
    }

    if (*table2) {
      auto desc = load(net_path);
      std::vector<snc::RankRow> rows;
      try {
        rows = snc::parse_rank_table(read_file(expect_path));
      } catch (const snc::NetworkError& e) {
        throw UsageError(expect_path + ": " + e.what());
      }
      const auto rep = snc::table2_validate(desc.network, rows);
      std::cout << rep.format();
      return rep.all_pass() ? kPass : kFail;
    }

    if (*circle) {
      snc::LinearNetwork net = [&] {
        try {
          return snc::circle_network(ck, cl, alice, bob);
        } catch (const snc::NetworkError& e) {
          throw UsageError(e.what());
        }
      }();
      const auto base = snc::channel_params(snc::derive_transfer(net, {}));
      std::cout << "k=" << ck << " l=" << cl << " alice=" << alice << " bob=" << bob << "\n";
      for (const auto& path : snc::circle_paths(ck, cl, alice, bob)) {
        std::cout << "path=";
        for (std::size_t i = 0; i < path.size(); ++i) std::cout << (i ? "->" : "") << snc::circle_node(path[i]);
        std::cout << "\n";
      }
      std::cout << "m0=" << base.m0 << " m3=" << base.m3 << " m4=" << base.m4 << "\n";
      std::cout << "key_symbols_per_transmission=" << net.edge_count() << "\n";
      for (std::size_t c = 1; c <= attack_size; ++c) {
        if (list_subsets) {
          snc::for_each_subset(snc::intermediate_nodes(net), c, [&](const std::vector<std::string>& pick) {
            const auto p = snc::channel_params(snc::derive_transfer(net, snc::node_to_edge(net, pick)));
            std::cout << "nodes=";
            for (std::size_t i = 0; i < pick.size(); ++i) std::cout << (i ? "," : "") << pick[i];
            std::cout << " m1=" << p.m1 << " m2=" << p.m2 << "\n";
          });
        }
        const auto s = snc::sweep_attacks(net, c);
        std::cout << "[attack-size " << c << "]\n";
        std::cout << "subsets=" << s.subsets << " m1_max=" << s.max_m1 << " m2_max=" << s.max_m2 << " m1_min=" << s.min_m1
                  << " m2_min=" << s.min_m2 << "\n";
        print_rates(s.worst);
      }
      return kPass;
    }

    if (*simulate) {
      snc::ExperimentConfig cfg;
      try {
        cfg = snc::load_experiment(config_path);
      } catch (const snc::ConfigError& e) {
        throw UsageError(e.what());
      }
      const auto rep = snc::run_experiment(cfg);
      const std::string text = rep.format(timing);
      std::cout << text;
      if (!out_path.empty()) write_report(out_path, text);
      if (cfg.report) write_report(*cfg.report, text);
      return rep.all_pass() ? kPass : kFail;
    }

    if (*audit) {
      snc::AuditConfig cfg;
      try {
        cfg = snc::load_audit(config_path);
      } catch (const snc::ConfigError& e) {
        throw UsageError(e.what());
      }
      const auto rep = snc::theorem1_audit(cfg.instance, cfg.options);
      std::cout << rep.format();
      std::cout << "strategies=" << rep.records.size() << "\n";
      if (auto w = rep.witness()) std::cout << "witness=" << *w << "\n";
      std::cout << "result=" << (rep.all_pass() ? "pass" : "fail") << "\n";
      return rep.all_pass() ? kPass : kFail;
    }

    if (*hash) {
      const auto f = field_of_order(q);
      const snc::HashSpec spec{kn, kbar};
      try {
        spec.validate();
      } catch (const snc::HashError& e) {
        throw UsageError(e.what());
      }
      const auto rep = snc::universal2_check(f, spec);
      const bool ok = rep.holds(f.order(), kbar);
      std::cout << "q=" << q << " kn=" << kn << " kbar=" << kbar << "\n";
      std::cout << "inputs=" << rep.inputs << " seeds=" << rep.seeds << "\n";
      std::cout << "worst_collisions=" << rep.worst_collisions << " max_probability=" << rep.max_probability()
                << " bound=" << rep.bound << "\n";
      std::cout << "result=" << (ok ? "pass" : "fail") << "\n";
      return ok ? kPass : kFail;
    }

    if (*rates_cmd) {
      std::cout << "m0=" << m0 << " m1=" << m1 << " m2=" << m2 << "\n";
      print_rates(snc::rates(m0, m1, m2));
      return kPass;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const snc::FieldError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
