#include <gtest/gtest.h>

#include <map>
#include <set>

#include "snc/experiment.hpp"
#include "snc/scenarios.hpp"

using namespace snc;

namespace {

std::string data(const std::string& name) { return std::string(SNC_DATA_DIR) + "/" + name; }

std::size_t circ_dist(std::size_t a, std::size_t b, std::size_t k) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, k - d);
}

ChannelParams params_for(const LinearNetwork& net, const std::vector<std::string>& nodes) {
  return channel_params(derive_transfer(net, node_to_edge(net, nodes)));
}

}  // namespace

TEST(Circle, TwelveNodeInstanceRankFour) {
  auto net = circle_network(12, 2, 1, 8);
  EXPECT_EQ(channel_params(derive_transfer(net, {})).m0, 4u);
  auto paths = circle_paths(12, 2, 1, 8);
  ASSERT_EQ(paths.size(), 4u);
  EXPECT_NE(std::find(paths.begin(), paths.end(), std::vector<std::size_t>{1, 12, 10, 8}), paths.end());
}

TEST(Circle, EverySingleNodeGivesOneOne) {
  auto net = circle_network(12, 2, 1, 8);
  for (const auto& v : intermediate_nodes(net)) {
    auto p = params_for(net, {v});
    EXPECT_EQ(p.m1, 1u) << v;
    EXPECT_EQ(p.m2, 1u) << v;
    auto r = rates(p.m0, p.m1, p.m2);
    EXPECT_EQ(r.robust_secure, 2u);
    EXPECT_EQ(r.secrecy_only, 3u);
  }
}

TEST(Circle, TwoNodesAtMostTwo) {
  auto net = circle_network(12, 2, 1, 8);
  auto sweep = sweep_attacks(net, 2);
  EXPECT_EQ(sweep.subsets, 45u);
  EXPECT_LE(sweep.max_m1, 2u);
  EXPECT_LE(sweep.max_m2, 2u);
  EXPECT_EQ(sweep.worst.secrecy_only, 2u);
  EXPECT_FALSE(sweep.worst.robust_achievable);
}

TEST(Circle, PathsAreDisjointAndUseCircleEdges) {
  for (std::size_t k = 3; k <= 24; ++k) {
    for (std::size_t l = 1; l < k; ++l) {
      for (std::size_t a = 1; a <= k; ++a) {
        for (std::size_t b = 1; b <= k; ++b) {
          const std::size_t fwd = (b + k - a) % k;
          const bool valid = a != b && fwd >= l && k - fwd >= l && !(fwd == l && k - fwd == l);
          if (!valid) {
            EXPECT_THROW(circle_paths(k, l, a, b), NetworkError);
            continue;
          }
          auto paths = circle_paths(k, l, a, b);
          ASSERT_EQ(paths.size(), 2 * l);
          std::set<std::size_t> seen;
          std::set<std::pair<std::size_t, std::size_t>> direct;
          for (const auto& p : paths) {
            ASSERT_GE(p.size(), 2u);
            EXPECT_EQ(p.front(), a);
            EXPECT_EQ(p.back(), b);
            for (std::size_t h = 0; h + 1 < p.size(); ++h) EXPECT_LE(circ_dist(p[h], p[h + 1], k), l);
            for (std::size_t h = 1; h + 1 < p.size(); ++h) EXPECT_TRUE(seen.insert(p[h]).second) << k << " " << l;
            if (p.size() == 2) {
              EXPECT_TRUE(direct.insert({a, b}).second);
            }
          }
        }
      }
    }
  }
}

TEST(Circle, RankEqualsPathCount) {
  for (std::size_t k = 4; k <= 12; ++k)
    for (std::size_t l = 1; 2 * l < k; ++l)
      for (std::size_t b = 1 + l; b <= k + 1 - l; ++b) {
        if (b == 1 || (b - 1 == l && k - (b - 1) == l)) continue;
        auto net = circle_network(k, l, 1, b);
        EXPECT_EQ(channel_params(derive_transfer(net, {})).m0, 2 * l);
      }
}

TEST(Circle, RejectsBadArguments) {
  EXPECT_THROW(circle_network(12, 2, 1, 2), NetworkError);
  EXPECT_THROW(circle_network(12, 2, 1, 1), NetworkError);
  EXPECT_THROW(circle_network(4, 2, 1, 3), NetworkError);
  EXPECT_THROW(circle_network(2, 2, 1, 2), NetworkError);
  EXPECT_THROW(circle_network(12, 2, 0, 5), NetworkError);
}

TEST(Subsets, CountsMatchBinomial) {
  std::vector<std::string> items{"a", "b", "c", "d", "e"};
  const std::size_t binom[] = {1, 5, 10, 10, 5, 1};
  for (std::size_t s = 0; s <= 5; ++s) {
    std::set<std::vector<std::string>> got;
    for_each_subset(items, s, [&](const auto& pick) { got.insert(pick); });
    EXPECT_EQ(got.size(), binom[s]);
  }
}

TEST(OneTimePad, RoundTripOverGF4) {
  auto f = make_extension_field(make_prime_field(2), 2);
  for (Symbol x = 0; x < 4; ++x) {
    EXPECT_EQ(otp_encrypt(f, x, 0), x);
    for (Symbol key = 0; key < 4; ++key) EXPECT_EQ(otp_decrypt(f, otp_encrypt(f, x, key), key), x);
  }
}

TEST(OneTimePad, UniformKeyHidesPlaintext) {
  auto f = make_prime_field(2);
  std::map<std::pair<Symbol, Symbol>, int> joint;
  for (Symbol x = 0; x < 2; ++x)
    for (Symbol key = 0; key < 2; ++key) ++joint[{x, otp_encrypt(f, x, key)}];
  for (Symbol x = 0; x < 2; ++x)
    for (Symbol y = 0; y < 2; ++y) EXPECT_EQ((joint[{x, y}]), 1);
}

TEST(RankTable, ParsesRows) {
  auto rows = parse_rank_table("# c\nv(1): 1, 2\n v(6) & v(8) : 4,2 \n\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].nodes, (std::vector<std::string>{"v(6)", "v(8)"}));
  EXPECT_EQ(rows[1].rank_ke, 4u);
  EXPECT_EQ(rows[1].rank_hb, 2u);
  EXPECT_THROW(parse_rank_table("v(1) 1 2"), NetworkError);
  EXPECT_THROW(parse_rank_table("v(1): a, 2"), NetworkError);
}

TEST(RankTable, ReconstructionMatchesAllButOneRow) {
  auto desc = load_network(data("table2_reconstruction.net"));
  std::ifstream in(data("table2_expected.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  auto rep = table2_validate(desc.network, parse_rank_table(ss.str()));
  EXPECT_EQ(rep.m0, 4u);
  ASSERT_EQ(rep.rows.size(), 10u);
  EXPECT_EQ(rep.passed(), 9u);
  EXPECT_FALSE(rep.rows[6].pass);
  EXPECT_EQ(rep.rows[6].rank_ke, 2u);
  EXPECT_EQ(rep.rows[6].rank_hb, 2u);
}

TEST(RankTable, UnknownNodeIsAnError) {
  auto desc = load_network(data("table2_reconstruction.net"));
  EXPECT_THROW(table2_validate(desc.network, parse_rank_table("v(9): 1, 1")), NetworkError);
}

TEST(Multicast, Reduce) {
  auto p = multicast_reduce({{4, 1, 4}, {3, 0, 5}}, 1, 4);
  EXPECT_EQ(p.m0, 3u);
  EXPECT_EQ(p.m1, 1u);
  EXPECT_EQ(p.m4, 5u);
  EXPECT_EQ(p.rate, 1u);
  auto single = multicast_reduce({{4, 1, 4}}, 1, 4);
  EXPECT_EQ(single.m0, 4u);
  EXPECT_EQ(single.m1, 1u);
  EXPECT_EQ(single.m4, 4u);
  auto same = multicast_reduce({{4, 1, 4}, {4, 1, 4}, {4, 1, 4}}, 1, 4);
  EXPECT_EQ(same.m0, 4u);
  EXPECT_EQ(same.rate, 2u);
  EXPECT_THROW(multicast_reduce({}, 0, 1), NetworkError);
}

TEST(Multicast, MultipleSendersHandExample) {
  auto f = make_prime_field(2);
  auto m = [&](const char* s) { return FqMatrix::parse(f, s); };
  MulticastBlocks k(2, std::vector<std::vector<FqMatrix>>(1, std::vector<FqMatrix>(2)));
  k[0][0][0] = m("1 0; 0 1");
  k[0][0][1] = m("1 0; 0 0");
  k[1][0][0] = m("0 0; 0 0");
  k[1][0][1] = m("1 1; 1 1");
  auto p = multiple_multicast_params(k);
  EXPECT_EQ(p[0].m0, 2u);
  EXPECT_EQ(p[0].m1, 1u);
  EXPECT_EQ(p[0].m2, 0u);
  EXPECT_EQ(p[1].m0, 1u);
  EXPECT_EQ(p[1].m1, 0u);
  EXPECT_EQ(p[1].m2, 1u);
}

TEST(Multicast, SingleSenderIsUnicast) {
  auto f = make_prime_field(2);
  MulticastBlocks k{{{FqMatrix::parse(f, "1 0; 0 1; 1 1")}}};
  auto p = multiple_multicast_params(k);
  EXPECT_EQ(p[0].m0, 2u);
  EXPECT_EQ(p[0].m1, 0u);
  EXPECT_EQ(p[0].m2, 0u);
  EXPECT_EQ(p[0].m3, 2u);
  EXPECT_EQ(p[0].m4, 3u);
}

TEST(Multicast, MaxAndMinDiffer) {
  auto f = make_prime_field(2);
  MulticastBlocks k{{{FqMatrix::parse(f, "1 0; 0 1")}, {FqMatrix::parse(f, "1 1; 1 1")}}};
  auto p = multiple_multicast_params(k);
  EXPECT_EQ(p[0].m0, 2u);
  EXPECT_EQ(p[0].m0_min, 1u);
}

TEST(Wilson, MatchesReferenceValues) {
  auto a = wilson_interval(5, 10);
  EXPECT_NEAR(a.low, 0.236593, 1e-4);
  EXPECT_NEAR(a.high, 0.763407, 1e-4);
  auto b = wilson_interval(0, 20);
  EXPECT_NEAR(b.low, 0.0, 1e-12);
  EXPECT_NEAR(b.high, 0.161125, 1e-4);
  auto c = wilson_interval(97, 100);
  EXPECT_NEAR(c.low, 0.915481, 1e-4);
  EXPECT_NEAR(c.high, 0.989745, 1e-4);
}

TEST(Experiment, IdentityNetworkAlwaysDecodes) {
  auto cfg = load_experiment(data("identity.json"));
  auto rep = run_experiment(cfg);
  ASSERT_EQ(rep.configs.size(), 1u);
  const auto& c = rep.configs[0];
  EXPECT_EQ(c.status, ConfigStatus::Pass);
  EXPECT_EQ(c.trials, 100u);
  EXPECT_EQ(c.successes, 100u);
  EXPECT_EQ(c.leakage_logq, 0u);
  EXPECT_EQ(c.key_symbols, 2 * c.l);
}

TEST(Experiment, ReportIsDeterministic) {
  auto j = nlohmann::json::parse(R"js({
    "network": {"builtin": "circle", "k": 8, "l": 1, "alice": 1, "bob": 5},
    "adversaries": [{"max_nodes": 1}],
    "code": {"kind": "secrecy", "n": 2},
    "strategy": "random", "trials": 40, "seed": 9})js");
  auto cfg = parse_experiment(j);
  const auto a = run_experiment(cfg).format();
  const auto b = run_experiment(cfg).format();
  EXPECT_EQ(a, b);
  cfg.threads = 3;
  EXPECT_EQ(run_experiment(cfg).format(), a);
  cfg.seed = 10;
  EXPECT_NE(run_experiment(cfg).format(), a);
}

TEST(Experiment, InfeasibleIsReportedNotThrown) {
  auto j = nlohmann::json::parse(R"js({
    "network": {"builtin": "two-path"},
    "adversaries": [{"nodes": ["r1"]}],
    "code": {"kind": "robust", "n": 4}, "trials": 5})js");
  auto rep = run_experiment(parse_experiment(j));
  ASSERT_EQ(rep.configs.size(), 1u);
  EXPECT_EQ(rep.configs[0].status, ConfigStatus::Infeasible);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_NE(rep.format().find("status=infeasible"), std::string::npos);
}

TEST(Experiment, CircleSecrecyHasZeroLeakage) {
  auto j = nlohmann::json::parse(R"js({
    "network": {"builtin": "circle", "k": 12, "l": 2, "alice": 1, "bob": 8},
    "adversaries": [{"nodes": ["v(4)"]}],
    "code": {"kind": "secrecy", "n": 2}, "trials": 20, "seed": 2})js");
  auto rep = run_experiment(parse_experiment(j));
  const auto& c = rep.configs[0];
  EXPECT_EQ(c.rates.secrecy_only, 3u);
  EXPECT_EQ(c.leakage_logq, 0u);
  EXPECT_EQ(c.successes, 20u);
  EXPECT_EQ(c.status, ConfigStatus::Pass);
}

TEST(Experiment, RatesMatchChannel) {
  auto cfg = load_experiment(data("circle_robust.json"));
  cfg.trials = 3;
  auto rep = run_experiment(cfg);
  EXPECT_EQ(rep.configs.size(), 10u);
  for (const auto& c : rep.configs) {
    auto r = rates(c.params.m0, c.params.m1, c.params.m2);
    EXPECT_EQ(c.rates.robust_secure, r.robust_secure);
    EXPECT_EQ(c.rates.secrecy_only, r.secrecy_only);
    EXPECT_EQ(c.k, 3 * c.l);
  }
}

TEST(Experiment, ConfigErrors) {
  EXPECT_THROW(parse_experiment(nlohmann::json::parse("{}")), ConfigError);
  EXPECT_THROW(parse_experiment(nlohmann::json::parse(R"js({"network": {"builtin": "torus"}})js")), ConfigError);
  EXPECT_THROW(parse_experiment(nlohmann::json::parse(R"js({"network": {"builtin": "identity", "m": 2}, "strategy": "x"})js")),
               ConfigError);
  EXPECT_THROW(parse_experiment(nlohmann::json::parse(R"js({"network": {"builtin": "identity", "m": "two"}})js")),
               ConfigError);
  EXPECT_THROW(load_experiment(data("missing.json")), ConfigError);
}

TEST(Experiment, UnknownNodeFails) {
  auto cfg = parse_experiment(nlohmann::json::parse(
      R"js({"network": {"builtin": "two-path"}, "adversaries": [{"nodes": ["nope"]}], "trials": 1})js"));
  EXPECT_THROW(run_experiment(cfg), NetworkError);
}

TEST(Audit, ConfigRunsAndPasses) {
  for (const char* name : {"audit_tap_first.json", "audit_same_edge.json"}) {
    auto cfg = load_audit(data(name));
    auto rep = theorem1_audit(cfg.instance, cfg.options);
    EXPECT_GT(rep.records.size(), 1u) << name;
    EXPECT_TRUE(rep.all_pass()) << name;
  }
}
