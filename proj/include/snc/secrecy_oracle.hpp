#pragma once
// Exact leakage: rank formula for linear systems, mutual information of a
// joint pmf in exact rationals, the active-versus-passive audit over every
// deterministic strategy, and the leakage of hash-composed codes.
//
// Mutual information is kept exactly as sum_p c_p log p over primes p with
// rational c_p. Logs of distinct primes are linearly independent over Q, so
// two values are equal iff their coefficient maps are equal.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "snc/attack.hpp"
#include "snc/matrix.hpp"
#include "snc/network.hpp"
#include "snc/privacy_amp.hpp"

namespace snc {

using Rational = boost::multiprecision::cpp_rational;

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactInfo {
  std::map<BigInt, Rational> coeff;  // prime -> coefficient of log(prime)

  double nats() const {
    double s = 0;
    for (const auto& [p, c] : coeff) s += c.convert_to<double>() * std::log(p.convert_to<double>());
    return s;
  }
  double bits() const { return nats() / std::log(2.0); }
  bool is_zero() const { return coeff.empty(); }

  /// Value in units of log q when only the characteristic of q appears.
  std::optional<Rational> in_log_units(std::uint64_t q) const {
    std::uint64_t p = 2;
    while (q % p != 0) ++p;
    unsigned t = 0;
    for (std::uint64_t r = q; r > 1; r /= p) ++t;
    if (coeff.empty()) return Rational(0);
    if (coeff.size() != 1 || coeff.begin()->first != p) return std::nullopt;
    return coeff.begin()->second / t;
  }

  std::string to_string() const {
    if (coeff.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : coeff) {
      os << (first ? "" : " + ") << "(" << c << ")*log(" << p << ")";
      first = false;
    }
    return os.str();
  }

  friend bool operator==(const ExactInfo&, const ExactInfo&) = default;
};

namespace detail {

inline void add_log(std::map<BigInt, Rational>& acc, BigInt n, const Rational& weight) {
  for (BigInt p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      acc[p] += weight;
      n /= p;
    }
    if (p > 1000000) break;
  }
  if (n > 1) acc[n] += weight;
}

inline void prune(std::map<BigInt, Rational>& m) {
  for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
}

}  // namespace detail

using Outcome = std::vector<Symbol>;

class JointPMF {
 public:
  void add(const Outcome& m, const Outcome& y, const Rational& p) {
    if (p < 0) throw OracleError("negative probability");
    table_[{m, y}] += p;
  }

  Rational total() const {
    Rational s = 0;
    for (const auto& [k, p] : table_) s += p;
    return s;
  }

  const std::map<std::pair<Outcome, Outcome>, Rational>& table() const { return table_; }

  std::map<Outcome, Rational> marginal_m() const {
    std::map<Outcome, Rational> out;
    for (const auto& [k, p] : table_) out[k.first] += p;
    return out;
  }
  std::map<Outcome, Rational> marginal_y() const {
    std::map<Outcome, Rational> out;
    for (const auto& [k, p] : table_) out[k.second] += p;
    return out;
  }

 private:
  std::map<std::pair<Outcome, Outcome>, Rational> table_;
};

/// I(M; Y) = sum p(m,y) log(p(m,y) / (p(m) p(y))), exact.
inline ExactInfo empirical_mi(const JointPMF& pmf) {
  if (pmf.total() != 1) throw OracleError("joint pmf does not sum to 1");
  const auto pm = pmf.marginal_m();
  const auto py = pmf.marginal_y();
  std::map<BigInt, Rational> acc;
  std::map<Rational, std::map<BigInt, Rational>> cache;  // ratio -> log factorization
  for (const auto& [k, p] : pmf.table()) {
    if (p == 0) continue;
    const Rational ratio = p / (pm.at(k.first) * py.at(k.second));
    auto it = cache.find(ratio);
    if (it == cache.end()) {
      std::map<BigInt, Rational> f;
      detail::add_log(f, boost::multiprecision::numerator(ratio), Rational(1));
      detail::add_log(f, boost::multiprecision::denominator(ratio), Rational(-1));
      it = cache.emplace(ratio, std::move(f)).first;
    }
    for (const auto& [prime, c] : it->second) acc[prime] += p * c;
  }
  detail::prune(acc);
  return {std::move(acc)};
}

/// rank[A | B] - rank B: leakage of Y = A M + B L in units of log q for
/// independent uniform M and L.
inline std::size_t linear_leakage(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows()) throw OracleError("linear_leakage: A and B must have equal row counts");
  return rank(hstack(a, b)) - rank(b);
}

inline double linear_leakage_bits(const FqMatrix& a, const FqMatrix& b) {
  return static_cast<double>(linear_leakage(a, b)) * std::log2(static_cast<double>(a.field().order()));
}

namespace detail {

/// Calls fn(v) for every v in F_q^len, in base-q counting order.
template <class F>
void for_each_vector(std::uint64_t q, std::size_t len, F&& fn) {
  std::vector<Symbol> v(len, 0);
  while (true) {
    fn(static_cast<const std::vector<Symbol>&>(v));
    std::size_t i = 0;
    while (i < len && ++v[i] == q) v[i++] = 0;
    if (i == len) return;
  }
}

inline std::uint64_t checked_space(std::uint64_t q, std::size_t len, std::uint64_t cap) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < len; ++i) {
    s *= q;
    if (s > cap) throw OracleError("enumeration exceeds cap");
  }
  return s;
}

}  // namespace detail

/// Joint pmf of (M, A M + B L) for uniform M and L.
inline JointPMF linear_pmf(const FqMatrix& a, const FqMatrix& b, std::uint64_t cap = std::uint64_t{1} << 20) {
  const FieldSpec& f = a.field();
  const std::uint64_t total = detail::checked_space(f.order(), a.cols() + b.cols(), cap);
  const Rational p(1, total);
  JointPMF pmf;
  detail::for_each_vector(f.order(), a.cols(), [&](const std::vector<Symbol>& m) {
    const FqMatrix am = a * FqMatrix::column(f, m);
    detail::for_each_vector(f.order(), b.cols(), [&](const std::vector<Symbol>& l) {
      pmf.add(m, (am + b * FqMatrix::column(f, l)).entries(), p);
    });
  });
  return pmf;
}

// ---------------------------------------------------------------------------
// Active-versus-passive audit.

/// Maps (message, scramble) to the m3 x n channel input.
using Encoder = std::function<FqMatrix(const std::vector<Symbol>& m, const std::vector<Symbol>& l)>;

/// X^n(r, c) = (G [m; l])[r n + c].
inline Encoder linear_encoder(const FqMatrix& g, std::size_t m3, std::size_t n) {
  if (g.rows() != m3 * n) throw OracleError("linear_encoder: G must have m3*n rows");
  return [g, m3, n](const std::vector<Symbol>& m, const std::vector<Symbol>& l) {
    std::vector<Symbol> v(m);
    v.insert(v.end(), l.begin(), l.end());
    const FqMatrix y = g * FqMatrix::column(g.field(), v);
    FqMatrix x(g.field(), m3, n);
    for (std::size_t r = 0; r < m3; ++r)
      for (std::size_t c = 0; c < n; ++c) x(r, c) = y(r * n + c, 0);
    return x;
  };
}

struct AuditInstance {
  TransferMatrices tm;
  AdversaryPlacement adv;
  std::size_t n = 1;
  std::size_t message_length = 1;
  std::size_t scramble_length = 0;
  Encoder encoder;
};

struct AuditRecord {
  std::uint64_t strategy = 0;
  ExactInfo leakage;  // I(M; Y_E^n, Z^n)
  bool pass = false;
};

struct AuditReport {
  ExactInfo passive;  // I(M; Y_E^n) with Z = 0
  std::vector<AuditRecord> records;
  std::uint64_t q = 2;
  TimeOrder order = TimeOrder::TransmissionMajor;

  bool all_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  std::optional<std::uint64_t> witness() const {
    for (const auto& r : records)
      if (!r.pass) return r.strategy;
    return std::nullopt;
  }

  std::string format() const {
    std::ostringstream os;
    os << "# audit order=" << to_string(order) << " strategies=" << records.size()
       << " passive=" << passive.to_string() << "\n";
    for (const auto& r : records) {
      os << "strategy=" << r.strategy;
      if (auto u = r.leakage.in_log_units(q)) {
        os << " leakage_num=" << boost::multiprecision::numerator(*u)
           << " leakage_den=" << boost::multiprecision::denominator(*u) << " leakage_logq=" << u->convert_to<double>();
      } else {
        os << " leakage_form=\"" << r.leakage.to_string() << "\" leakage_logq=" << r.leakage.nats() / std::log(double(q));
      }
      os << " status=" << (r.pass ? "pass" : "fail") << "\n";
    }
    return os.str();
  }
};

/// Eve's information under a given strategy, with her view (Y_E^n, Z^n).
inline ExactInfo active_leakage(const AuditInstance& inst, const Strategy& strategy, TimeOrder order,
                                bool include_z = true, std::uint64_t cap = std::uint64_t{1} << 20) {
  const FieldSpec& f = inst.tm.kb.field();
  const std::uint64_t total =
      detail::checked_space(f.order(), inst.message_length + inst.scramble_length, cap);
  const Rational p(1, total);
  JointPMF pmf;
  detail::for_each_vector(f.order(), inst.message_length, [&](const std::vector<Symbol>& m) {
    detail::for_each_vector(f.order(), inst.scramble_length, [&](const std::vector<Symbol>& l) {
      const FqMatrix x = inst.encoder(m, l);
      auto run = simulate(inst.tm, inst.adv, x, strategy, order);
      Outcome view = run.ye.entries();
      if (include_z) view.insert(view.end(), run.z.entries().begin(), run.z.entries().end());
      pmf.add(m, view, p);
    });
  });
  return empirical_mi(pmf);
}

/// Every deterministic causal strategy leaks exactly what the passive attack does.
inline AuditReport theorem1_audit(const AuditInstance& inst, EnumerationOptions opt = {TimeOrder::TransmissionMajor, true}) {
  const FieldSpec& f = inst.tm.kb.field();
  AuditReport rep;
  rep.q = f.order();
  rep.order = opt.order;
  rep.passive = active_leakage(inst, passive(), opt.order, false);
  StrategyEnumerator en(f, inst.adv, inst.n, opt);
  for (std::uint64_t k = 0; k < en.size(); ++k) {
    ExactInfo leak = active_leakage(inst, en[k], opt.order, true);
    const bool pass = leak == rep.passive;
    rep.records.push_back({k, std::move(leak), pass});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Leakage of hash-composed codes.

struct LinearLeakage {
  FqMatrix a;  // Eve's view as a function of Mbar
  FqMatrix b;  // Eve's view as a function of L
  std::size_t logq = 0;
  double bits = 0;
};

/// Eve's view K_E X as a linear function of (Mbar, L). The encoder is probed
/// on unit vectors and checked for linearity on random pairs.
inline LinearLeakage leakage_of_secure_code(const SecureCode& code, const FqMatrix& ke, std::uint64_t check_seed = 1) {
  const FieldSpec& f = code.field();
  const std::size_t kbar = code.spec.kbar, d = code.spec.d(), k = kbar + d;
  auto view = [&](const std::vector<Symbol>& v) {
    std::span<const Symbol> mbar(v.data(), kbar), l(v.data() + kbar, d);
    return (ke * code.encode(mbar, l).input).entries();
  };
  const auto zero = view(std::vector<Symbol>(k, 0));
  for (Symbol s : zero)
    if (s != 0) throw OracleError("encoder is not linear: nonzero image of zero");
  std::vector<std::vector<Symbol>> cols;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Symbol> e(k, 0);
    e[i] = 1;
    cols.push_back(view(e));
  }
  const std::size_t rows = zero.size();
  FqMatrix full(f, rows, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < rows; ++r) full(r, c) = cols[c][r];

  std::mt19937_64 rng(check_seed);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Symbol> v(k);
    for (auto& s : v) s = uniform_symbol(f, rng);
    if (view(v) != (full * FqMatrix::column(f, v)).entries()) throw OracleError("encoder is not linear");
  }
  std::vector<std::size_t> head(kbar), tail(d);
  for (std::size_t i = 0; i < kbar; ++i) head[i] = i;
  for (std::size_t i = 0; i < d; ++i) tail[i] = kbar + i;
  LinearLeakage out{full.select_cols(head), full.select_cols(tail), 0, 0};
  out.logq = linear_leakage(out.a, out.b);
  out.bits = static_cast<double>(out.logq) * std::log2(static_cast<double>(f.order()));
  return out;
}

struct SeedSearch {
  std::uint64_t seeds = 0;
  std::uint64_t zero_leakage = 0;
  std::optional<std::vector<Symbol>> first_zero;
  std::vector<std::size_t> leakage_logq;  // per seed, in enumeration order

  double bad_fraction() const { return 1.0 - static_cast<double>(zero_leakage) / static_cast<double>(seeds); }
  double mean_leakage_nats(std::uint64_t q) const {
    double s = 0;
    for (auto v : leakage_logq) s += static_cast<double>(v);
    return s / static_cast<double>(seeds) * std::log(static_cast<double>(q));
  }
};

/// Leakage for every seed of the family (q^(k-1) of them, capped).
inline SeedSearch seed_search(std::shared_ptr<const InnerCode> inner, const HashSpec& spec, const FqMatrix& ke,
                              std::uint64_t cap = std::uint64_t{1} << 16) {
  const FieldSpec& f = inner->field();
  detail::checked_space(f.order(), spec.seed_length(), cap);
  SeedSearch res;
  detail::for_each_vector(f.order(), spec.seed_length(), [&](const std::vector<Symbol>& seed) {
    SecureCode code(inner, spec, seed);
    const std::size_t leak = leakage_of_secure_code(code, ke).logq;
    ++res.seeds;
    res.leakage_logq.push_back(leak);
    if (leak == 0) {
      ++res.zero_leakage;
      if (!res.first_zero) res.first_zero = seed;
    }
  });
  return res;
}

}  // namespace snc
