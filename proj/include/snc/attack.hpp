#pragma once
// Eve's causal strategies over n transmissions and the sequential simulator.
//
// An injection slot (u, i) is transmission u on edge eta(i). Its observation
// prefix holds every wiretapped symbol Eve has seen before that slot:
//
//   TransmissionMajor  transmissions run one after another; the prefix is all
//                      of transmissions 1..u-1 plus the first T_i wiretapped
//                      edges of transmission u.
//   EdgeMajor          the n uses of each edge happen together; the prefix is
//                      the first T_i wiretapped edges across all n uses.
//
// T_i = #{ j : zeta(j) <= eta(i) }. Wiretapped values are read before any
// injection on the same edge.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "snc/matrix.hpp"
#include "snc/network.hpp"

namespace snc {

class AttackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TimeOrder { TransmissionMajor, EdgeMajor };

inline const char* to_string(TimeOrder o) {
  return o == TimeOrder::TransmissionMajor ? "transmission-major" : "edge-major";
}

struct Slot {
  std::size_t u = 1;  // transmission, 1..n
  std::size_t i = 1;  // injection edge position, 1..m5
};

/// Observation prefix handed to a strategy.
struct Prefix {
  std::span<const Symbol> symbols;  // in global time order
  TimeOrder order = TimeOrder::TransmissionMajor;
  std::size_t n = 1;
  std::size_t m6 = 0;
  std::size_t u = 1;
  std::size_t visible = 0;  // T_i

  /// Wiretapped edge position j (1-based) at transmission v, if already seen.
  std::optional<Symbol> at(std::size_t j, std::size_t v) const {
    if (j < 1 || j > m6 || v < 1 || v > n) return std::nullopt;
    if (order == TimeOrder::TransmissionMajor) {
      if (v < u) return symbols[(v - 1) * m6 + (j - 1)];
      if (v == u && j <= visible) return symbols[(u - 1) * m6 + (j - 1)];
      return std::nullopt;
    }
    if (j <= visible) return symbols[(j - 1) * n + (v - 1)];
    return std::nullopt;
  }
};

using Strategy = std::function<Symbol(const Slot&, const Prefix&)>;

struct TransmissionOutcome {
  FqMatrix yb;  // m4 x n
  FqMatrix ye;  // m6 x n
  FqMatrix z;   // m5 x n
};

/// T_i for each injection position.
inline std::vector<std::size_t> visible_counts(const AdversaryPlacement& adv) {
  std::vector<std::size_t> t(adv.inject.size(), 0);
  for (std::size_t i = 0; i < adv.inject.size(); ++i)
    for (auto z : adv.wiretap)
      if (z <= adv.inject[i]) ++t[i];
  return t;
}

inline std::size_t prefix_length(TimeOrder order, std::size_t n, std::size_t m6, std::size_t u, std::size_t t_i) {
  return order == TimeOrder::TransmissionMajor ? (u - 1) * m6 + t_i : n * t_i;
}

namespace detail {

inline void fill_prefix(const FqMatrix& ye, TimeOrder order, std::size_t u, std::size_t t_i,
                        std::vector<Symbol>& out) {
  out.clear();
  const std::size_t n = ye.cols(), m6 = ye.rows();
  if (order == TimeOrder::TransmissionMajor) {
    for (std::size_t v = 0; v + 1 < u; ++v)
      for (std::size_t j = 0; j < m6; ++j) out.push_back(ye(j, v));
    for (std::size_t j = 0; j < t_i; ++j) out.push_back(ye(j, u - 1));
  } else {
    for (std::size_t j = 0; j < t_i; ++j)
      for (std::size_t v = 0; v < n; ++v) out.push_back(ye(j, v));
  }
}

}  // namespace detail

/// Runs n channel uses. Each Z entry is produced from exactly its causal
/// prefix; Y_E entries are filled in as soon as everything they depend on
/// has been decided.
inline TransmissionOutcome simulate(const TransferMatrices& tm, const AdversaryPlacement& adv, const FqMatrix& xn,
                                    const Strategy& strategy, TimeOrder order = TimeOrder::TransmissionMajor) {
  const std::size_t m3 = tm.kb.cols(), m5 = tm.hb.cols(), m6 = tm.ke.rows();
  if (xn.rows() != m3 || adv.inject.size() != m5 || adv.wiretap.size() != m6 || tm.he.rows() != m6 ||
      tm.he.cols() != m5 || tm.ke.cols() != m3) {
    throw AttackError("simulate: dimension mismatch");
  }
  const FieldSpec& f = xn.field();
  const std::size_t n = xn.cols();
  const auto t = visible_counts(adv);
  const FqMatrix kex = tm.ke * xn;
  TransmissionOutcome out{FqMatrix(f, tm.kb.rows(), n), FqMatrix(f, m6, n), FqMatrix(f, m5, n)};

  // Observation j of transmission v once Z(., v) for all earlier injections is known.
  auto observe = [&](std::size_t j, std::size_t v) {
    Symbol s = kex(j, v);
    for (std::size_t i = 0; i < m5; ++i)
      if (tm.he(j, i) != 0) s = f.add(s, f.mul(tm.he(j, i), out.z(i, v)));
    out.ye(j, v) = s;
  };

  std::vector<Symbol> buf;
  auto decide = [&](std::size_t u, std::size_t i) {
    detail::fill_prefix(out.ye, order, u, t[i], buf);
    Prefix p{buf, order, n, m6, u, t[i]};
    const Symbol z = strategy(Slot{u, i + 1}, p);
    if (!f.contains(z)) throw AttackError("strategy returned a symbol outside the field");
    out.z(i, u - 1) = z;
  };

  if (order == TimeOrder::TransmissionMajor) {
    for (std::size_t u = 1; u <= n; ++u) {
      std::size_t seen = 0;
      for (std::size_t i = 0; i < m5; ++i) {
        for (; seen < t[i]; ++seen) observe(seen, u - 1);
        decide(u, i);
      }
      for (; seen < m6; ++seen) observe(seen, u - 1);
    }
  } else {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < m5; ++i) {
      for (; seen < t[i]; ++seen)
        for (std::size_t v = 0; v < n; ++v) observe(seen, v);
      for (std::size_t u = 1; u <= n; ++u) decide(u, i);
    }
    for (; seen < m6; ++seen)
      for (std::size_t v = 0; v < n; ++v) observe(seen, v);
  }
  out.yb = tm.kb * xn + tm.hb * out.z;
  return out;
}

/// Recomputes every Z entry from the recorded Y_E prefixes alone.
inline bool audit_causality(const AdversaryPlacement& adv, const TransmissionOutcome& run, const Strategy& strategy,
                            TimeOrder order = TimeOrder::TransmissionMajor) {
  const auto t = visible_counts(adv);
  std::vector<Symbol> buf;
  for (std::size_t u = 1; u <= run.z.cols(); ++u) {
    for (std::size_t i = 0; i < run.z.rows(); ++i) {
      detail::fill_prefix(run.ye, order, u, t[i], buf);
      Prefix p{buf, order, run.z.cols(), run.ye.rows(), u, t[i]};
      if (strategy(Slot{u, i + 1}, p) != run.z(i, u - 1)) return false;
    }
  }
  return true;
}

inline Strategy passive() {
  return [](const Slot&, const Prefix&) -> Symbol { return 0; };
}

inline Strategy constant_strategy(Symbol c) {
  return [c](const Slot&, const Prefix&) { return c; };
}

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::span<const Symbol> s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Symbol v : s) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace detail

/// A uniformly random causal decision table, realized as a keyed hash of
/// (seed, slot, prefix) so equal prefixes always get equal answers.
inline Strategy random_strategy(std::uint64_t seed, const FieldSpec& f) {
  const std::uint64_t q = f.order();
  return [seed, q](const Slot& s, const Prefix& p) -> Symbol {
    std::uint64_t h = detail::splitmix(seed ^ 0x5eedULL);
    h = detail::splitmix(h ^ s.u);
    h = detail::splitmix(h ^ (s.i << 32));
    for (Symbol v : p.symbols) h = detail::splitmix(h ^ v);
    return static_cast<Symbol>((static_cast<unsigned __int128>(h) * q) >> 64);
  };
}

/// Overwrites each injected edge that Eve also wiretaps: adds -y + pattern(u, i)
/// where y is the value she observed on that edge. Edges she cannot see get
/// pattern(u, i) added.
inline Strategy replacement_strategy(const AdversaryPlacement& adv, const FieldSpec& f,
                                     std::function<Symbol(std::size_t u, std::size_t i)> pattern) {
  std::vector<std::size_t> tap_pos(adv.inject.size(), 0);
  for (std::size_t i = 0; i < adv.inject.size(); ++i)
    for (std::size_t j = 0; j < adv.wiretap.size(); ++j)
      if (adv.wiretap[j] == adv.inject[i]) tap_pos[i] = j + 1;
  return [tap_pos, f, pattern](const Slot& s, const Prefix& p) -> Symbol {
    const Symbol target = pattern(s.u, s.i);
    const std::size_t j = tap_pos[s.i - 1];
    if (j == 0) return target;
    auto y = p.at(j, s.u);
    return y ? f.sub(target, *y) : target;
  };
}

// ---------------------------------------------------------------------------
// Enumeration of deterministic strategies.

struct EnumerationOptions {
  TimeOrder order = TimeOrder::TransmissionMajor;
  bool include_all = false;  // also count slots with eta(i) >= zeta(m6)
  unsigned cap_log2 = 20;
};

/// Slots whose decision is counted: eta(i) < zeta(m6), or all with include_all.
inline std::vector<bool> counted_positions(const AdversaryPlacement& adv, bool include_all) {
  std::vector<bool> c(adv.inject.size(), include_all);
  if (!include_all && !adv.wiretap.empty()) {
    for (std::size_t i = 0; i < adv.inject.size(); ++i) c[i] = adv.inject[i] < adv.wiretap.back();
  }
  return c;
}

using BigInt = boost::multiprecision::cpp_int;

/// N such that the number of deterministic strategies is q^N.
inline BigInt strategy_count_exponent(std::uint64_t q, const AdversaryPlacement& adv, std::size_t n,
                                      const EnumerationOptions& opt = {}) {
  const auto t = visible_counts(adv);
  const auto counted = counted_positions(adv, opt.include_all);
  const std::size_t m6 = adv.wiretap.size();
  BigInt total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!counted[i]) continue;
    for (std::size_t u = 1; u <= n; ++u) total += boost::multiprecision::pow(BigInt(q), prefix_length(opt.order, n, m6, u, t[i]));
  }
  return total;
}

/// The closed form q^{n * sum_i q^{n T_i}} over counted slots; equal to
/// strategy_count_exponent under EdgeMajor.
inline BigInt closed_form_exponent(std::uint64_t q, const AdversaryPlacement& adv, std::size_t n,
                                   bool include_all = false) {
  const auto t = visible_counts(adv);
  const auto counted = counted_positions(adv, include_all);
  BigInt total = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (counted[i]) total += boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n * t[i]));
  return n * total;
}

/// Indexable family of all causal deterministic strategies. Strategy k reads
/// its decision table from the base-q digits of k; uncounted slots inject 0.
class StrategyEnumerator {
 public:
  StrategyEnumerator(const FieldSpec& f, const AdversaryPlacement& adv, std::size_t n, EnumerationOptions opt = {})
      : field_(f), n_(n), m6_(adv.wiretap.size()), opt_(opt) {
    const BigInt exponent = strategy_count_exponent(f.order(), adv, n, opt);
    double bits = exponent.convert_to<double>() * std::log2(static_cast<double>(f.order()));
    if (bits > opt.cap_log2) {
      throw AttackError("strategy count " + std::to_string(f.order()) + "^" + exponent.str() +
                        " exceeds the enumeration cap 2^" + std::to_string(opt.cap_log2));
    }
    const auto t = visible_counts(adv);
    const auto counted = counted_positions(adv, opt.include_all);
    std::size_t offset = 0;
    offsets_.assign(n * t.size(), kNone);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!counted[i]) continue;
      for (std::size_t u = 1; u <= n; ++u) {
        offsets_[(u - 1) * t.size() + i] = offset;
        std::size_t len = prefix_length(opt.order, n, m6_, u, t[i]);
        std::size_t entries = 1;
        for (std::size_t k = 0; k < len; ++k) entries *= f.order();
        offset += entries;
      }
    }
    table_size_ = offset;
    m5_ = t.size();
    size_ = 1;
    for (std::size_t k = 0; k < table_size_; ++k) size_ *= f.order();
  }

  std::uint64_t size() const { return size_; }
  std::size_t table_size() const { return table_size_; }

  std::vector<Symbol> table(std::uint64_t index) const {
    std::vector<Symbol> t(table_size_);
    for (auto& v : t) {
      v = index % field_.order();
      index /= field_.order();
    }
    return t;
  }

  Strategy operator[](std::uint64_t index) const {
    auto tab = std::make_shared<const std::vector<Symbol>>(table(index));
    const std::uint64_t q = field_.order();
    const std::vector<std::size_t> offsets = offsets_;
    const std::size_t m5 = m5_;
    return [tab, offsets, q, m5](const Slot& s, const Prefix& p) -> Symbol {
      const std::size_t base = offsets[(s.u - 1) * m5 + (s.i - 1)];
      if (base == kNone) return 0;
      std::size_t code = 0;
      for (std::size_t k = p.symbols.size(); k-- > 0;) code = code * q + p.symbols[k];
      return (*tab)[base + code];
    };
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  FieldSpec field_;
  std::size_t n_, m6_, m5_ = 0;
  EnumerationOptions opt_;
  std::vector<std::size_t> offsets_;
  std::size_t table_size_ = 0;
  std::uint64_t size_ = 1;
};

// ---------------------------------------------------------------------------
// Strategy scripts: recorded decisions in the form
//   slot (u,i): <16 hex digits of FNV-1a over the prefix> -> <value>

struct ScriptEntry {
  std::size_t u = 0, i = 0;
  std::uint64_t prefix_hash = 0;
  Symbol value = 0;
};

using StrategyScript = std::vector<ScriptEntry>;

inline std::string format_script(const StrategyScript& script) {
  std::ostringstream os;
  os << "# strategy table: slot (u,i): prefix-hash -> value\n";
  for (const auto& e : script) {
    os << "slot (" << e.u << "," << e.i << "): " << std::hex << std::setw(16) << std::setfill('0') << e.prefix_hash
       << std::dec << " -> " << e.value << "\n";
  }
  return os.str();
}

inline StrategyScript parse_script(const std::string& text) {
  StrategyScript out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ScriptEntry e;
    char hex[17] = {};
    unsigned long long value = 0;
    if (std::sscanf(line.c_str(), " slot (%zu,%zu): %16[0-9a-fA-F] -> %llu", &e.u, &e.i, hex, &value) != 4) {
      throw AttackError("strategy script line " + std::to_string(no) + " is malformed");
    }
    e.prefix_hash = std::stoull(hex, nullptr, 16);
    e.value = value;
    out.push_back(e);
  }
  return out;
}

/// Wraps a strategy and appends every decision it makes to `sink`.
inline Strategy recording(Strategy inner, std::shared_ptr<StrategyScript> sink) {
  return [inner = std::move(inner), sink](const Slot& s, const Prefix& p) {
    Symbol v = inner(s, p);
    sink->push_back({s.u, s.i, detail::fnv1a(p.symbols), v});
    return v;
  };
}

/// Replays a script; a slot/prefix pair absent from it is an error.
inline Strategy scripted(const StrategyScript& script) {
  auto table = std::make_shared<std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, Symbol>>();
  for (const auto& e : script) (*table)[{e.u, e.i, e.prefix_hash}] = e.value;
  return [table](const Slot& s, const Prefix& p) -> Symbol {
    auto it = table->find({s.u, s.i, detail::fnv1a(p.symbols)});
    if (it == table->end()) {
      throw AttackError("strategy script has no entry for slot (" + std::to_string(s.u) + "," + std::to_string(s.i) +
                        ")");
    }
    return it->second;
  };
}

}  // namespace snc
