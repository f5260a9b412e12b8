#pragma once
// Scenario builders: circle networks of trusted relays, one-time-pad edges,
// attacked-node rank tables, and the multicast parameter reductions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snc/field.hpp"
#include "snc/matrix.hpp"
#include "snc/network.hpp"
#include "snc/privacy_amp.hpp"

namespace snc {

inline std::string circle_node(std::size_t i) { return "v(" + std::to_string(i) + ")"; }

/// Routing paths between v(alice) and v(bob) on a circle where v(i), v(j)
/// are adjacent when their circular distance is at most `reach`. Each
/// direction gets `reach` paths; path r visits offsets r, r+reach, ... and
/// then jumps to bob. Node indices are 1-based.
inline std::vector<std::vector<std::size_t>> circle_paths(std::size_t k, std::size_t reach, std::size_t alice,
                                                          std::size_t bob) {
  if (!(k > reach && reach > 0)) throw NetworkError("circle network needs k > l > 0");
  if (alice < 1 || alice > k || bob < 1 || bob > k || alice == bob) {
    throw NetworkError("alice and bob must be distinct nodes in 1..k");
  }
  const std::size_t fwd = (bob + k - alice) % k;
  const std::size_t back = k - fwd;
  if (fwd < reach || back < reach) {
    throw NetworkError("alice and bob must be at circular distance >= l in both directions");
  }
  if (fwd == reach && back == reach) throw NetworkError("both directions would use the same direct edge");
  std::vector<std::vector<std::size_t>> paths;
  const auto kk = static_cast<long long>(k);
  auto at = [&](long long offset) {
    const long long pos = (static_cast<long long>(alice) - 1 + offset) % kk;
    return static_cast<std::size_t>((pos + kk) % kk) + 1;
  };
  for (int dir : {-1, +1}) {
    const std::size_t dist = dir > 0 ? fwd : back;
    for (std::size_t r = 1; r <= reach; ++r) {
      std::vector<std::size_t> p{alice};
      for (std::size_t o = r; o < dist; o += reach) p.push_back(at(dir * static_cast<long long>(o)));
      p.push_back(bob);
      paths.push_back(std::move(p));
    }
  }
  return paths;
}

/// Each path forwards one source coordinate; Bob reads the last edge of each path.
inline LinearNetwork circle_network(std::size_t k, std::size_t reach, std::size_t alice, std::size_t bob,
                                    const FieldSpec& f = make_prime_field(2)) {
  const auto paths = circle_paths(k, reach, alice, bob);
  LinearNetwork net(f);
  for (std::size_t i = 1; i <= k; ++i) {
    net.add_node(circle_node(i), i == alice ? NodeRole::Source : i == bob ? NodeRole::Sink : NodeRole::Intermediate);
  }
  net.set_source_dim(paths.size());
  for (std::size_t p = 0; p < paths.size(); ++p) {
    std::size_t prev = 0;
    for (std::size_t h = 0; h + 1 < paths[p].size(); ++h) {
      std::vector<CodingTerm> coding;
      if (h == 0) coding.push_back({{InputRef::Kind::Source, p + 1}, 1});
      else coding.push_back({{InputRef::Kind::Edge, prev}, 1});
      prev = net.add_edge(paths[p][h] - 1, paths[p][h + 1] - 1, coding);
    }
    net.add_sink_read(prev);
  }
  net.validate();
  return net;
}

/// Names of intermediate nodes, in node order.
inline std::vector<std::string> intermediate_nodes(const LinearNetwork& net) {
  std::vector<std::string> out;
  for (const auto& n : net.nodes())
    if (n.role == NodeRole::Intermediate) out.push_back(n.name);
  return out;
}

/// Calls fn on every subset of `items` with exactly `size` elements, in
/// lexicographic order of positions.
inline void for_each_subset(const std::vector<std::string>& items, std::size_t size,
                            const std::function<void(const std::vector<std::string>&)>& fn) {
  if (size > items.size()) return;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  std::vector<std::string> pick(size);
  while (true) {
    for (std::size_t i = 0; i < size; ++i) pick[i] = items[idx[i]];
    fn(pick);
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == items.size() - size + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct AttackSweep {
  std::size_t size = 0;
  std::size_t subsets = 0;
  std::size_t max_m1 = 0;
  std::size_t max_m2 = 0;
  std::size_t min_m1 = 0;
  std::size_t min_m2 = 0;
  Rates worst;  // rates at (m0, max m1, max m2)
};

inline AttackSweep sweep_attacks(const LinearNetwork& net, std::size_t size) {
  const std::size_t m0 = channel_params(derive_transfer(net, {})).m0;
  AttackSweep s;
  s.size = size;
  s.min_m1 = s.min_m2 = SIZE_MAX;
  for_each_subset(intermediate_nodes(net), size, [&](const std::vector<std::string>& nodes) {
    auto p = channel_params(derive_transfer(net, node_to_edge(net, nodes)));
    ++s.subsets;
    s.max_m1 = std::max(s.max_m1, p.m1);
    s.max_m2 = std::max(s.max_m2, p.m2);
    s.min_m1 = std::min(s.min_m1, p.m1);
    s.min_m2 = std::min(s.min_m2, p.m2);
  });
  if (s.subsets == 0) s.min_m1 = s.min_m2 = 0;
  s.worst = rates(m0, s.max_m1, s.max_m2);
  return s;
}

// ---------------------------------------------------------------------------
// One-time-pad edges: a QKD key symbol per edge per transmission.

inline Symbol otp_encrypt(const FieldSpec& f, Symbol x, Symbol key) { return f.add(x, key); }
inline Symbol otp_decrypt(const FieldSpec& f, Symbol y, Symbol key) { return f.sub(y, key); }

// ---------------------------------------------------------------------------
// Rank tables per attacked-node set, e.g. "v(6) & v(8): 4, 2" meaning
// rank K_E = 4 and rank H_B = 2.

struct RankRow {
  std::vector<std::string> nodes;
  std::size_t rank_ke = 0;
  std::size_t rank_hb = 0;
};

inline std::vector<RankRow> parse_rank_table(const std::string& text) {
  std::vector<RankRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.rfind(':');
    const auto comma = line.rfind(',');
    if (colon == std::string::npos || comma == std::string::npos || comma < colon) {
      throw NetworkError("rank table line " + std::to_string(no) + ": expected '<nodes>: <rank K_E>, <rank H_B>'");
    }
    RankRow r;
    std::string nodes = line.substr(0, colon);
    std::size_t start = 0;
    while (true) {
      auto amp = nodes.find('&', start);
      std::string name = trim(nodes.substr(start, amp == std::string::npos ? std::string::npos : amp - start));
      if (name.empty()) throw NetworkError("rank table line " + std::to_string(no) + ": empty node name");
      r.nodes.push_back(name);
      if (amp == std::string::npos) break;
      start = amp + 1;
    }
    try {
      r.rank_ke = static_cast<std::size_t>(detail::parse_uint(line.substr(colon + 1, comma - colon - 1), "rank"));
      r.rank_hb = static_cast<std::size_t>(detail::parse_uint(line.substr(comma + 1), "rank"));
    } catch (const FieldError&) {
      throw NetworkError("rank table line " + std::to_string(no) + ": ranks must be integers");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

struct RankVerdict {
  RankRow expected;
  std::size_t rank_ke = 0;
  std::size_t rank_hb = 0;
  bool pass = false;
};

struct RankReport {
  std::size_t m0 = 0;
  std::vector<RankVerdict> rows;

  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.pass; }));
  }
  bool all_pass() const { return passed() == rows.size(); }

  std::string format() const {
    std::ostringstream os;
    os << "m0=" << m0 << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << "row " << i + 1 << ": ";
      for (std::size_t j = 0; j < r.expected.nodes.size(); ++j) os << (j ? " & " : "") << r.expected.nodes[j];
      os << " expected=(" << r.expected.rank_ke << "," << r.expected.rank_hb << ") actual=(" << r.rank_ke << ","
         << r.rank_hb << ") " << (r.pass ? "pass" : "FAIL") << "\n";
    }
    os << "summary: " << passed() << "/" << rows.size() << " rows match\n";
    return os.str();
  }
};

inline RankReport table2_validate(const LinearNetwork& net, const std::vector<RankRow>& expected) {
  RankReport rep;
  rep.m0 = channel_params(derive_transfer(net, {})).m0;
  for (const auto& row : expected) {
    auto p = channel_params(derive_transfer(net, node_to_edge(net, row.nodes)));
    rep.rows.push_back({row, p.m2, p.m1, p.m2 == row.rank_ke && p.m1 == row.rank_hb});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Multicast.

struct ReceiverParams {
  std::size_t m0 = 0, m1 = 0, m4 = 0;
};

struct MulticastParams {
  std::size_t m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  std::size_t rate = 0;
  bool achievable = false;
};

/// One sender, several receivers: worst-case m0 (min), m1 and m4 (max).
inline MulticastParams multicast_reduce(const std::vector<ReceiverParams>& receivers, std::size_t m2, std::size_t m3) {
  if (receivers.empty()) throw NetworkError("multicast_reduce needs at least one receiver");
  MulticastParams p;
  p.m0 = receivers.front().m0;
  for (const auto& r : receivers) {
    p.m0 = std::min(p.m0, r.m0);
    p.m1 = std::max(p.m1, r.m1);
    p.m4 = std::max(p.m4, r.m4);
  }
  p.m2 = m2;
  p.m3 = m3;
  auto r = rates(p.m0, p.m1, p.m2);
  p.rate = r.robust_secure;
  p.achievable = r.robust_achievable;
  return p;
}

/// blocks[i][j][i2] = K_{i,j;i2}: from sender i2 to receiver j of sender i.
using MulticastBlocks = std::vector<std::vector<std::vector<FqMatrix>>>;

struct SenderParams {
  std::size_t m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  std::size_t m0_min = 0;  // min_j rank K_{i,j;i}, for comparison with m0
};

/// m0_i = max_j rank K_{i,j;i}; m1_i = max_j rank [K_{i,j;i'}]_{i' != i};
/// m2_i = max over receivers (i'', j'') of other senders of rank K_{i'',j'';i}.
inline std::vector<SenderParams> multiple_multicast_params(const MulticastBlocks& k) {
  std::vector<SenderParams> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    SenderParams& s = out[i];
    s.m0_min = SIZE_MAX;
    for (std::size_t j = 0; j < k[i].size(); ++j) {
      const std::size_t r = rank(k[i][j][i]);
      s.m0 = std::max(s.m0, r);
      s.m0_min = std::min(s.m0_min, r);
      s.m3 = k[i][j][i].cols();
      s.m4 = std::max(s.m4, k[i][j][i].rows());
      std::optional<FqMatrix> cross;
      for (std::size_t i2 = 0; i2 < k.size(); ++i2) {
        if (i2 == i) continue;
        cross = cross ? hstack(*cross, k[i][j][i2]) : k[i][j][i2];
      }
      if (cross) s.m1 = std::max(s.m1, rank(*cross));
    }
    if (s.m0_min == SIZE_MAX) s.m0_min = 0;
    for (std::size_t i2 = 0; i2 < k.size(); ++i2) {
      if (i2 == i) continue;
      for (std::size_t j = 0; j < k[i2].size(); ++j) s.m2 = std::max(s.m2, rank(k[i2][j][i]));
    }
  }
  return out;
}

}  // namespace snc
