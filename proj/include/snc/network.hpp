#pragma once
// Acyclic linear networks with globally ordered edges, edge adversaries, and
// the transfer matrices of the wiretap-and-addition channel
//   Y_B = K_B X + H_B Z,   Y_E = K_E X + H_E Z.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snc/field.hpp"
#include "snc/matrix.hpp"

namespace snc {

class NetworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class NodeRole { Intermediate, Source, Sink };

struct Node {
  std::string name;
  NodeRole role = NodeRole::Intermediate;
};

/// An operand of an edge's coding row: source coordinate x<i> or edge e<j>.
/// Indices are 1-based, as in the network file.
struct InputRef {
  enum class Kind { Source, Edge };
  Kind kind = Kind::Source;
  std::size_t index = 0;

  friend bool operator==(const InputRef&, const InputRef&) = default;
};

struct CodingTerm {
  InputRef input;
  Symbol coefficient = 0;
};

struct Edge {
  std::size_t tail = 0;  // node index
  std::size_t head = 0;
  std::vector<CodingTerm> coding;
};

/// Edge sets of an edge adversary, 1-based, strictly increasing.
/// wiretap = zeta(1..m6), inject = eta(1..m5).
struct AdversaryPlacement {
  std::vector<std::size_t> wiretap;
  std::vector<std::size_t> inject;

  bool empty() const { return wiretap.empty() && inject.empty(); }
  friend bool operator==(const AdversaryPlacement&, const AdversaryPlacement&) = default;
};

struct TransferMatrices {
  FqMatrix kb;  // m4 x m3
  FqMatrix ke;  // m6 x m3
  FqMatrix hb;  // m4 x m5
  FqMatrix he;  // m6 x m5
};

struct ChannelParams {
  std::size_t m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0;
  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

class LinearNetwork {
 public:
  LinearNetwork() = default;
  explicit LinearNetwork(FieldSpec f) : field_(std::move(f)) {}

  const FieldSpec& field() const { return field_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& sink_reads() const { return sink_reads_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t source_dim() const { return source_dim_; }
  const Edge& edge(std::size_t idx) const { return edges_.at(idx - 1); }

  std::size_t add_node(std::string name, NodeRole role = NodeRole::Intermediate) {
    if (index_.count(name)) throw NetworkError("duplicate node " + name);
    index_[name] = nodes_.size();
    nodes_.push_back({std::move(name), role});
    return nodes_.size() - 1;
  }

  /// Appends e(k+1) and returns its 1-based index.
  std::size_t add_edge(std::size_t tail, std::size_t head, std::vector<CodingTerm> coding = {}) {
    if (tail >= nodes_.size() || head >= nodes_.size()) throw NetworkError("edge endpoint out of range");
    edges_.push_back({tail, head, std::move(coding)});
    return edges_.size();
  }

  void set_coding(std::size_t edge_idx, std::vector<CodingTerm> coding) {
    if (edge_idx < 1 || edge_idx > edges_.size()) throw NetworkError("coef for unknown edge");
    edges_[edge_idx - 1].coding = std::move(coding);
  }

  void add_sink_read(std::size_t edge_idx) { sink_reads_.push_back(edge_idx); }
  void set_source_dim(std::size_t m3) { source_dim_ = m3; }

  std::size_t node_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw NetworkError("unknown node " + name);
    return it->second;
  }
  bool has_node(const std::string& name) const { return index_.count(name) != 0; }

  std::size_t source() const { return find_role(NodeRole::Source); }
  std::size_t sink() const { return find_role(NodeRole::Sink); }

  std::vector<std::size_t> in_edges(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].head == node) out.push_back(i + 1);
    return out;
  }
  std::vector<std::size_t> out_edges(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].tail == node) out.push_back(i + 1);
    return out;
  }

  /// Checks edge ordering, coding references and sink reads.
  void validate() const {
    if (!field_.valid()) throw NetworkError("network has no field");
    (void)source();
    (void)sink();
    for (std::size_t i = 1; i <= edges_.size(); ++i) {
      const Edge& e = edges_[i - 1];
      for (std::size_t j : in_edges(e.tail)) {
        if (j >= i) {
          throw NetworkError("edge order violation: e" + std::to_string(i) + " is read after its tail's in-edge e" +
                             std::to_string(j));
        }
      }
      for (const auto& term : e.coding) {
        if (!field_.contains(term.coefficient)) throw NetworkError("coefficient outside field on e" + std::to_string(i));
        if (term.input.kind == InputRef::Kind::Source) {
          if (nodes_[e.tail].role != NodeRole::Source) {
            throw NetworkError("e" + std::to_string(i) + " reads x" + std::to_string(term.input.index) +
                               " but its tail is not the source");
          }
          if (term.input.index < 1 || term.input.index > source_dim_) {
            throw NetworkError("source coordinate x" + std::to_string(term.input.index) + " out of range");
          }
        } else {
          const std::size_t j = term.input.index;
          if (j < 1 || j > edges_.size()) throw NetworkError("e" + std::to_string(i) + " reads unknown edge");
          if (j >= i) {
            throw NetworkError("edge order violation: e" + std::to_string(i) + " reads later edge e" + std::to_string(j));
          }
          if (edges_[j - 1].head != e.tail) {
            throw NetworkError("e" + std::to_string(i) + " reads e" + std::to_string(j) + " which does not enter its tail");
          }
        }
      }
    }
    for (std::size_t r : sink_reads_) {
      if (r < 1 || r > edges_.size()) throw NetworkError("sink-read of unknown edge");
    }
  }

 private:
  std::size_t find_role(NodeRole role) const {
    std::size_t found = nodes_.size();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].role != role) continue;
      if (found != nodes_.size()) throw NetworkError("more than one source or sink node");
      found = i;
    }
    if (found == nodes_.size()) throw NetworkError(role == NodeRole::Source ? "no source node" : "no sink node");
    return found;
  }

  FieldSpec field_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> sink_reads_;
  std::size_t source_dim_ = 0;
  std::map<std::string, std::size_t> index_;
};

inline void validate_placement(const LinearNetwork& net, const AdversaryPlacement& adv) {
  auto check = [&](const std::vector<std::size_t>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 1 || v[i] > net.edge_count()) throw NetworkError(std::string(what) + " edge out of range");
      if (i > 0 && v[i] <= v[i - 1]) throw NetworkError(std::string(what) + " edges must be strictly increasing");
    }
  };
  check(adv.wiretap, "wiretap");
  check(adv.inject, "inject");
}

/// Per-edge values for one channel use. `observed[e]` is the value before
/// any injection on e, `carried[e]` the value after it.
struct EdgeValues {
  std::vector<Symbol> observed;
  std::vector<Symbol> carried;
};

/// Direct edge-by-edge propagation of one channel use.
inline EdgeValues propagate(const LinearNetwork& net, const AdversaryPlacement& adv, std::span<const Symbol> x,
                            std::span<const Symbol> z) {
  const FieldSpec& f = net.field();
  if (x.size() != net.source_dim() || z.size() != adv.inject.size()) throw NetworkError("propagate: dimension mismatch");
  EdgeValues v{std::vector<Symbol>(net.edge_count(), 0), std::vector<Symbol>(net.edge_count(), 0)};
  std::vector<std::size_t> inject_pos(net.edge_count() + 1, SIZE_MAX);
  for (std::size_t i = 0; i < adv.inject.size(); ++i) inject_pos[adv.inject[i]] = i;
  for (std::size_t e = 1; e <= net.edge_count(); ++e) {
    Symbol s = 0;
    for (const auto& term : net.edge(e).coding) {
      const Symbol in = term.input.kind == InputRef::Kind::Source ? x[term.input.index - 1]
                                                                  : v.carried[term.input.index - 1];
      s = f.add(s, f.mul(term.coefficient, in));
    }
    v.observed[e - 1] = s;
    if (inject_pos[e] != SIZE_MAX) s = f.add(s, z[inject_pos[e]]);
    v.carried[e - 1] = s;
  }
  return v;
}

/// Forward propagation of linear forms over (X, Z). A wiretapped edge is read
/// before the injection on that same edge is added, so H_E[j][i] = 0 whenever
/// eta(i) >= zeta(j).
inline TransferMatrices derive_transfer(const LinearNetwork& net, const AdversaryPlacement& adv) {
  net.validate();
  validate_placement(net, adv);
  const FieldSpec& f = net.field();
  const std::size_t m3 = net.source_dim();
  const std::size_t m5 = adv.inject.size();
  const std::size_t width = m3 + m5;
  std::vector<std::size_t> inject_pos(net.edge_count() + 1, SIZE_MAX);
  for (std::size_t i = 0; i < m5; ++i) inject_pos[adv.inject[i]] = i;

  FqMatrix observed(f, net.edge_count(), width);
  FqMatrix carried(f, net.edge_count(), width);
  for (std::size_t e = 1; e <= net.edge_count(); ++e) {
    auto row = observed.row(e - 1);
    for (const auto& term : net.edge(e).coding) {
      if (term.input.kind == InputRef::Kind::Source) {
        const std::size_t c = term.input.index - 1;
        row[c] = f.add(row[c], term.coefficient);
      } else {
        auto src = carried.row(term.input.index - 1);
        for (std::size_t c = 0; c < width; ++c) row[c] = f.add(row[c], f.mul(term.coefficient, src[c]));
      }
    }
    auto out = carried.row(e - 1);
    std::copy(row.begin(), row.end(), out.begin());
    if (inject_pos[e] != SIZE_MAX) out[m3 + inject_pos[e]] = f.add(out[m3 + inject_pos[e]], 1);
  }

  std::vector<std::size_t> reads;
  for (auto r : net.sink_reads()) reads.push_back(r - 1);
  const FqMatrix bob = carried.select_rows(reads);
  std::vector<std::size_t> tap;
  for (auto r : adv.wiretap) tap.push_back(r - 1);
  const FqMatrix eve = observed.select_rows(tap);

  TransferMatrices tm;
  tm.kb = bob.block(0, 0, bob.rows(), m3);
  tm.hb = bob.block(0, m3, bob.rows(), m5);
  tm.ke = eve.block(0, 0, eve.rows(), m3);
  tm.he = eve.block(0, m3, eve.rows(), m5);
  return tm;
}

/// H_E[j][i] == 0 whenever eta(i) >= zeta(j).
inline bool is_causal(const TransferMatrices& tm, const AdversaryPlacement& adv) {
  for (std::size_t j = 0; j < tm.he.rows(); ++j)
    for (std::size_t i = 0; i < tm.he.cols(); ++i)
      if (adv.inject[i] >= adv.wiretap[j] && tm.he(j, i) != 0) return false;
  return true;
}

/// Occupied nodes read every incident edge and falsify their out-edges.
inline AdversaryPlacement node_to_edge(const LinearNetwork& net, const std::vector<std::string>& attacked) {
  std::set<std::size_t> tap, inj;
  for (const auto& name : attacked) {
    const std::size_t v = net.node_index(name);
    if (net.nodes()[v].role != NodeRole::Intermediate) {
      throw NetworkError("cannot attack the source or sink node " + name);
    }
    for (auto e : net.in_edges(v)) tap.insert(e);
    for (auto e : net.out_edges(v)) {
      tap.insert(e);
      inj.insert(e);
    }
  }
  return {{tap.begin(), tap.end()}, {inj.begin(), inj.end()}};
}

inline AdversaryPlacement merge(const AdversaryPlacement& a, const AdversaryPlacement& b) {
  std::set<std::size_t> tap(a.wiretap.begin(), a.wiretap.end()), inj(a.inject.begin(), a.inject.end());
  tap.insert(b.wiretap.begin(), b.wiretap.end());
  inj.insert(b.inject.begin(), b.inject.end());
  return {{tap.begin(), tap.end()}, {inj.begin(), inj.end()}};
}

inline ChannelParams channel_params(const TransferMatrices& tm) {
  ChannelParams p;
  p.m0 = rank(tm.kb);
  p.m1 = rank(tm.hb);
  p.m2 = rank(tm.ke);
  p.m3 = tm.kb.cols();
  p.m4 = tm.kb.rows();
  p.m5 = tm.hb.cols();
  p.m6 = tm.ke.rows();
  return p;
}

// ---------------------------------------------------------------------------
// Network description files.
//
//   field GF(2)
//   inputs 2                      (optional; default = largest x<i> used)
//   node alice source
//   node v1
//   node bob sink
//   edge 1 alice v1
//   coef 1 x1=1
//   sink-read 3 4
//   wiretap 1 2
//   inject 2
//   attack-nodes v1
//
// '#' starts a comment.

struct NetworkDescription {
  LinearNetwork network;
  AdversaryPlacement explicit_edges;
  std::vector<std::string> attack_nodes;

  /// Node-derived placement extended by explicit wiretap/inject lines.
  AdversaryPlacement placement() const {
    AdversaryPlacement p = attack_nodes.empty() ? AdversaryPlacement{} : node_to_edge(network, attack_nodes);
    return merge(p, explicit_edges);
  }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::size_t parse_index(const std::string& s, std::size_t line_no) {
  try {
    return static_cast<std::size_t>(parse_uint(s, "index"));
  } catch (const FieldError&) {
    throw NetworkError("line " + std::to_string(line_no) + ": bad index '" + s + "'");
  }
}

}  // namespace detail

inline NetworkDescription parse_network(const std::string& text) {
  NetworkDescription d;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<FieldSpec> field;
  std::optional<std::size_t> declared_inputs;
  struct PendingEdge {
    std::size_t idx;
    std::string tail, head;
  };
  std::vector<PendingEdge> edges;
  std::vector<std::pair<std::string, NodeRole>> nodes;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> coefs;
  std::vector<std::size_t> reads;
  std::set<std::size_t> tap, inj;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() < n) throw NetworkError("line " + std::to_string(line_no) + ": too few fields for " + kw);
    };
    if (kw == "field") {
      need(2);
      std::string lit = raw.substr(raw.find("field") + 5);
      field = parse_field(lit);
    } else if (kw == "inputs") {
      need(2);
      declared_inputs = detail::parse_index(tok[1], line_no);
    } else if (kw == "node") {
      need(2);
      NodeRole role = NodeRole::Intermediate;
      if (tok.size() >= 3) {
        if (tok[2] == "source") role = NodeRole::Source;
        else if (tok[2] == "sink") role = NodeRole::Sink;
        else throw NetworkError("line " + std::to_string(line_no) + ": unknown node role " + tok[2]);
      }
      nodes.emplace_back(tok[1], role);
    } else if (kw == "edge") {
      need(4);
      edges.push_back({detail::parse_index(tok[1], line_no), tok[2], tok[3]});
    } else if (kw == "coef") {
      need(3);
      coefs.emplace_back(detail::parse_index(tok[1], line_no), std::vector<std::string>(tok.begin() + 2, tok.end()));
    } else if (kw == "sink-read") {
      for (std::size_t i = 1; i < tok.size(); ++i) reads.push_back(detail::parse_index(tok[i], line_no));
    } else if (kw == "wiretap") {
      for (std::size_t i = 1; i < tok.size(); ++i) tap.insert(detail::parse_index(tok[i], line_no));
    } else if (kw == "inject") {
      for (std::size_t i = 1; i < tok.size(); ++i) inj.insert(detail::parse_index(tok[i], line_no));
    } else if (kw == "attack-nodes") {
      for (std::size_t i = 1; i < tok.size(); ++i) d.attack_nodes.push_back(tok[i]);
    } else {
      throw NetworkError("line " + std::to_string(line_no) + ": unknown directive " + kw);
    }
  }
  if (!field) throw NetworkError("network file has no field line");

  LinearNetwork net(*field);
  for (auto& [name, role] : nodes) net.add_node(name, role);
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.idx < b.idx; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].idx != i + 1) throw NetworkError("edge indices must be exactly 1..k");
    net.add_edge(net.node_index(edges[i].tail), net.node_index(edges[i].head));
  }
  std::size_t max_x = 0;
  for (auto& [idx, terms] : coefs) {
    std::vector<CodingTerm> coding;
    for (const auto& t : terms) {
      auto eq = t.find('=');
      if (eq == std::string::npos || eq < 2 || (t[0] != 'x' && t[0] != 'e')) {
        throw NetworkError("bad coefficient term '" + t + "' (expected x<i>=c or e<j>=c)");
      }
      InputRef ref{t[0] == 'x' ? InputRef::Kind::Source : InputRef::Kind::Edge,
                   detail::parse_index(t.substr(1, eq - 1), 0)};
      if (ref.kind == InputRef::Kind::Source) max_x = std::max(max_x, ref.index);
      coding.push_back({ref, parse_symbol(*field, t.substr(eq + 1))});
    }
    if (idx < 1 || idx > net.edge_count()) throw NetworkError("coef for unknown edge e" + std::to_string(idx));
    auto existing = net.edge(idx).coding;
    existing.insert(existing.end(), coding.begin(), coding.end());
    net.set_coding(idx, std::move(existing));
  }
  net.set_source_dim(declared_inputs.value_or(max_x));
  for (auto r : reads) net.add_sink_read(r);
  net.validate();
  d.explicit_edges = {{tap.begin(), tap.end()}, {inj.begin(), inj.end()}};
  validate_placement(net, d.explicit_edges);
  d.network = std::move(net);
  return d;
}

inline NetworkDescription load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

inline std::string format_network(const LinearNetwork& net, const AdversaryPlacement& adv = {}) {
  std::ostringstream os;
  const FieldSpec& f = net.field();
  os << "field " << f.to_string() << "\n";
  os << "inputs " << net.source_dim() << "\n";
  for (const auto& n : net.nodes()) {
    os << "node " << n.name;
    if (n.role == NodeRole::Source) os << " source";
    if (n.role == NodeRole::Sink) os << " sink";
    os << "\n";
  }
  for (std::size_t e = 1; e <= net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    os << "edge " << e << " " << net.nodes()[ed.tail].name << " " << net.nodes()[ed.head].name << "\n";
  }
  for (std::size_t e = 1; e <= net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    if (ed.coding.empty()) continue;
    os << "coef " << e;
    for (const auto& t : ed.coding) {
      os << " " << (t.input.kind == InputRef::Kind::Source ? 'x' : 'e') << t.input.index << "=" << t.coefficient;
    }
    os << "\n";
  }
  if (!net.sink_reads().empty()) {
    os << "sink-read";
    for (auto r : net.sink_reads()) os << " " << r;
    os << "\n";
  }
  if (!adv.wiretap.empty()) {
    os << "wiretap";
    for (auto r : adv.wiretap) os << " " << r;
    os << "\n";
  }
  if (!adv.inject.empty()) {
    os << "inject";
    for (auto r : adv.inject) os << " " << r;
    os << "\n";
  }
  return os.str();
}

}  // namespace snc
