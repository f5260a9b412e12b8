#pragma once
// Privacy amplification with modified Toeplitz hashing f_S(x) = x_head + T(S) x_tail,
// its composition with an inner code, leakage bounds, achievable rates and
// b-bit verification tags.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snc/field.hpp"
#include "snc/matrix.hpp"
#include "snc/robust_code.hpp"

namespace snc {

class HashError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct HashSpec {
  std::size_t k = 1;     // input length k_n
  std::size_t kbar = 1;  // output length

  std::size_t d() const { return k - kbar; }
  std::size_t seed_length() const { return k - 1; }

  void validate() const {
    if (kbar < 1 || kbar > k) throw HashError("hash output length must satisfy 1 <= kbar <= k");
  }
};

inline std::size_t ceil_sqrt(std::size_t l) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(l)));
  while (r * r < l) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= l) --r;
  return r;
}

/// kbar = k - m2 l - ceil(sqrt(l)).
inline HashSpec make_hash_spec(std::size_t k, std::size_t l, std::size_t m2) {
  const std::size_t d = m2 * l + ceil_sqrt(l);
  if (d >= k) {
    throw HashError("no room for privacy amplification: k=" + std::to_string(k) + " but m2*l+ceil(sqrt(l))=" +
                    std::to_string(d));
  }
  return {k, k - d};
}

/// kbar x d Toeplitz matrix, T[a][b] = S[a - b + d - 1] (0-based).
inline FqMatrix toeplitz(const FieldSpec& f, const HashSpec& spec, std::span<const Symbol> seed) {
  spec.validate();
  if (seed.size() != spec.seed_length()) throw HashError("Toeplitz seed must have length k-1");
  const std::size_t d = spec.d();
  FqMatrix t(f, spec.kbar, d);
  for (std::size_t a = 0; a < spec.kbar; ++a)
    for (std::size_t b = 0; b < d; ++b) t(a, b) = seed[a + d - 1 - b];
  return t;
}

inline std::vector<Symbol> hash_apply(const FieldSpec& f, const HashSpec& spec, std::span<const Symbol> seed,
                                      std::span<const Symbol> x) {
  spec.validate();
  if (seed.size() != spec.seed_length()) throw HashError("Toeplitz seed must have length k-1");
  if (x.size() != spec.k) throw HashError("hash input must have length k");
  const std::size_t d = spec.d();
  std::vector<Symbol> out(x.begin(), x.begin() + spec.kbar);
  for (std::size_t a = 0; a < spec.kbar; ++a) {
    Symbol s = out[a];
    for (std::size_t b = 0; b < d; ++b) s = f.add(s, f.mul(seed[a + d - 1 - b], x[spec.kbar + b]));
    out[a] = s;
  }
  return out;
}

/// Inverse scramble: (Mbar - T(S) L, L), so that f_S of the result is Mbar.
inline std::vector<Symbol> hash_preimage(const FieldSpec& f, const HashSpec& spec, std::span<const Symbol> seed,
                                         std::span<const Symbol> mbar, std::span<const Symbol> l) {
  if (mbar.size() != spec.kbar || l.size() != spec.d()) throw HashError("scramble: dimension mismatch");
  std::vector<Symbol> zero_head(spec.k, 0);
  std::copy(l.begin(), l.end(), zero_head.begin() + spec.kbar);
  const auto tl = hash_apply(f, spec, seed, zero_head);
  std::vector<Symbol> w(spec.k);
  for (std::size_t a = 0; a < spec.kbar; ++a) w[a] = f.sub(mbar[a], tl[a]);
  std::copy(l.begin(), l.end(), w.begin() + spec.kbar);
  return w;
}

struct Universal2Report {
  std::uint64_t inputs = 0;             // nonzero z examined
  std::uint64_t seeds = 0;              // q^(k-1)
  std::uint64_t worst_collisions = 0;   // max over z != 0 of #{S : f_S(z) = 0}
  std::vector<Symbol> worst_input;
  double bound = 0;                     // q^-kbar

  double max_probability() const { return static_cast<double>(worst_collisions) / static_cast<double>(seeds); }
  /// worst_collisions / seeds <= q^-kbar, compared in integers.
  bool holds(std::uint64_t q, std::size_t kbar) const {
    unsigned __int128 lhs = worst_collisions, rhs = seeds;
    for (std::size_t i = 0; i < kbar; ++i) lhs *= q;
    return lhs <= rhs;
  }
};

/// Exhaustive check of Pr_S{f_S(z) = 0} <= q^-kbar over all z != 0; by
/// linearity this is the pairwise collision condition.
inline Universal2Report universal2_check(const FieldSpec& f, const HashSpec& spec) {
  spec.validate();
  const std::uint64_t q = f.order();
  auto power = [&](std::size_t e) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < e; ++i) {
      v *= q;
      if (v > (std::uint64_t{1} << 20)) throw HashError("universal2_check: enumeration exceeds 2^20");
    }
    return v;
  };
  const std::uint64_t inputs = power(spec.k), seeds = power(spec.seed_length());
  Universal2Report rep;
  rep.seeds = seeds;
  rep.bound = std::pow(static_cast<double>(q), -static_cast<double>(spec.kbar));
  const std::size_t d = spec.d();

  if (q == 2 && f.is_prime_field() && spec.k <= 63) {
    // Bit-parallel path: row a of T(S) z_tail is parity(S >> a & reversed tail).
    const std::uint64_t head_mask = (std::uint64_t{1} << spec.kbar) - 1;
    for (std::uint64_t z = 1; z < inputs; ++z) {
      const std::uint64_t head = z & head_mask;
      std::uint64_t rev = 0;
      for (std::size_t b = 0; b < d; ++b)
        if ((z >> (spec.kbar + b)) & 1) rev |= std::uint64_t{1} << (d - 1 - b);
      std::uint64_t hits = 0;
      for (std::uint64_t s = 0; s < seeds; ++s) {
        bool zero = true;
        for (std::size_t a = 0; a < spec.kbar && zero; ++a) {
          const unsigned bit = static_cast<unsigned>(__builtin_popcountll((s >> a) & rev) & 1);
          zero = bit == ((head >> a) & 1);
        }
        hits += zero;
      }
      ++rep.inputs;
      if (hits > rep.worst_collisions || rep.worst_input.empty()) {
        rep.worst_collisions = std::max(rep.worst_collisions, hits);
        rep.worst_input.assign(spec.k, 0);
        for (std::size_t i = 0; i < spec.k; ++i) rep.worst_input[i] = (z >> i) & 1;
      }
    }
    return rep;
  }

  std::vector<Symbol> z(spec.k), s(spec.seed_length());
  auto unpack_code = [&](std::uint64_t code, std::vector<Symbol>& out) {
    for (auto& v : out) {
      v = code % q;
      code /= q;
    }
  };
  for (std::uint64_t zc = 1; zc < inputs; ++zc) {
    unpack_code(zc, z);
    std::uint64_t hits = 0;
    for (std::uint64_t sc = 0; sc < seeds; ++sc) {
      unpack_code(sc, s);
      auto h = hash_apply(f, spec, s, z);
      bool zero = true;
      for (Symbol v : h) zero &= v == 0;
      hits += zero;
    }
    ++rep.inputs;
    if (hits > rep.worst_collisions || rep.worst_input.empty()) {
      rep.worst_collisions = std::max(rep.worst_collisions, hits);
      rep.worst_input = z;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Inner codes. An inner code maps k_n F_q symbols to an m3 x l_n channel input
// and back from Bob's m4 x l_n observation.

struct CodedBlock {
  FqMatrix input;                // m3 x l_n
  std::optional<SideInfo> side;  // out-of-band data, if the code uses any
};

class InnerCode {
 public:
  virtual ~InnerCode() = default;
  virtual const FieldSpec& field() const = 0;
  virtual std::size_t message_length() const = 0;
  virtual std::size_t input_rows() const = 0;
  virtual std::size_t block_length() const = 0;
  virtual CodedBlock encode(std::span<const Symbol> w) const = 0;
  virtual std::optional<std::vector<Symbol>> decode(const FqMatrix& received,
                                                    const std::optional<SideInfo>& side) const = 0;
  virtual std::string name() const = 0;
};

/// Writes the message row by row into the m3 x l input. Bob inverts K_B when
/// he knows it (left inverse), otherwise reads the block as is.
class SystematicCode : public InnerCode {
 public:
  SystematicCode(FieldSpec f, std::size_t m3, std::size_t l, std::optional<FqMatrix> kb = std::nullopt)
      : field_(std::move(f)), m3_(m3), l_(l), kb_(std::move(kb)) {
    if (kb_ && (kb_->cols() != m3_ || rank(*kb_) != m3_)) {
      throw CodeError("systematic decoding needs K_B with full column rank");
    }
  }

  const FieldSpec& field() const override { return field_; }
  std::size_t message_length() const override { return m3_ * l_; }
  std::size_t input_rows() const override { return m3_; }
  std::size_t block_length() const override { return l_; }
  std::string name() const override { return "systematic"; }

  CodedBlock encode(std::span<const Symbol> w) const override {
    if (w.size() != message_length()) throw CodeError("systematic encode: wrong message length");
    FqMatrix x(field_, m3_, l_);
    for (std::size_t i = 0; i < w.size(); ++i) x(i / l_, i % l_) = w[i];
    return {x, std::nullopt};
  }

  std::optional<std::vector<Symbol>> decode(const FqMatrix& y, const std::optional<SideInfo>&) const override {
    FqMatrix x = y;
    if (kb_) {
      auto sol = solve_left(kb_->transpose(), y.transpose());
      if (!sol) return std::nullopt;
      x = sol->transpose();
    }
    if (x.rows() != m3_ || x.cols() != l_) return std::nullopt;
    return x.entries();
  }

 private:
  FieldSpec field_;
  std::size_t m3_, l_;
  std::optional<FqMatrix> kb_;
};

/// The robust code run over F_{q'} = F_{q^t}: each edge carries l = t n base
/// symbols, read as n symbols of F_{q'}. The key is drawn once at
/// construction so the encoder is a fixed linear map.
class RobustInnerCode : public InnerCode {
 public:
  template <class Rng>
  RobustInnerCode(const FieldSpec& base, std::size_t n, std::size_t m0, std::size_t m1, std::size_t m3,
                  std::size_t m4, Rng& rng, std::optional<std::size_t> t_override = std::nullopt)
      : base_(base) {
    if (t_override) {
      block_.t = *t_override;
      block_.l = block_.t * n;
      block_.field = block_.t == 1 ? base : make_extension_field(base, block_.t);
    } else {
      block_ = lift_block(base, n, m0);
    }
    params_ = RobustCodeParams{block_.field, n, m0, m1, m3, m4};
    params_.validate();
    inst_ = keygen(params_, rng);
  }

  const FieldSpec& field() const override { return base_; }
  std::size_t message_length() const override { return params_.message_rows() * block_.l; }
  std::size_t input_rows() const override { return params_.m3; }
  std::size_t block_length() const override { return block_.l; }
  std::string name() const override { return "robust"; }

  const RobustCodeParams& params() const { return params_; }
  const RobustCodeInstance& instance() const { return inst_; }
  const LiftedBlock& block() const { return block_; }

  FqMatrix message_matrix(std::span<const Symbol> w) const {
    if (w.size() != message_length()) throw CodeError("robust encode: wrong message length");
    FqMatrix m(base_, params_.message_rows(), block_.l);
    for (std::size_t i = 0; i < w.size(); ++i) m(i / block_.l, i % block_.l) = w[i];
    return pack(m, block_.field);
  }

  CodedBlock encode(std::span<const Symbol> w) const override {
    auto enc = snc::encode(params_, inst_, message_matrix(w));
    return {unpack(enc.x, base_), enc.side};
  }

  std::optional<std::vector<Symbol>> decode(const FqMatrix& y, const std::optional<SideInfo>& side) const override {
    if (!side) throw CodeError("robust decode needs side information");
    auto m = snc::decode(params_, pack(y, block_.field), *side);
    if (!m) return std::nullopt;
    return unpack(*m, base_).entries();
  }

 private:
  FieldSpec base_;
  LiftedBlock block_;
  RobustCodeParams params_;
  RobustCodeInstance inst_;
};

/// Hash-then-encode composition: encode(Mbar, L) = inner(f_S^{-1}(Mbar, L)),
/// decode = f_S(inner decode).
struct SecureCode {
  std::shared_ptr<const InnerCode> inner;
  HashSpec spec;
  std::vector<Symbol> seed;

  SecureCode(std::shared_ptr<const InnerCode> in, HashSpec h, std::vector<Symbol> s)
      : inner(std::move(in)), spec(h), seed(std::move(s)) {
    spec.validate();
    if (spec.k != inner->message_length()) throw HashError("hash input length must equal the inner message length");
    if (seed.size() != spec.seed_length()) throw HashError("Toeplitz seed must have length k-1");
  }

  const FieldSpec& field() const { return inner->field(); }

  std::vector<Symbol> scramble(std::span<const Symbol> mbar, std::span<const Symbol> l) const {
    return hash_preimage(field(), spec, seed, mbar, l);
  }

  CodedBlock encode(std::span<const Symbol> mbar, std::span<const Symbol> l) const {
    return inner->encode(scramble(mbar, l));
  }

  std::optional<std::vector<Symbol>> decode(const FqMatrix& y, const std::optional<SideInfo>& side) const {
    auto w = inner->decode(y, side);
    if (!w) return std::nullopt;
    return hash_apply(field(), spec, seed, *w);
  }
};

// ---------------------------------------------------------------------------

struct LeakageBound {
  double form1 = 0;  // q^{s(kbar - k + l m2)} / s
  double form2 = 0;  // q^{-s ceil(sqrt l)} / s
  double value = 0;  // min of the two, in nats
};

inline LeakageBound leakage_bound(double s, std::size_t kbar, std::size_t k, std::size_t l, std::size_t m2,
                                  std::uint64_t q) {
  if (!(s > 0 && s <= 1)) throw HashError("leakage_bound: s must lie in (0, 1]");
  const long long exp1 = static_cast<long long>(kbar) - static_cast<long long>(k) + static_cast<long long>(l * m2);
  const long long limit = -static_cast<long long>(ceil_sqrt(l));
  if (exp1 > limit) throw HashError("leakage_bound: kbar exceeds k - m2 l - ceil(sqrt(l))");
  const double lq = std::log(static_cast<double>(q));
  LeakageBound b;
  b.form1 = std::exp(s * exp1 * lq) / s;
  b.form2 = std::exp(s * limit * lq) / s;
  b.value = std::min(b.form1, b.form2);
  return b;
}

/// q^{-ceil(sqrt l) + m6 m3 + 1}: leakage for a seed drawn at random, with
/// probability at least 1 - 1/q.
inline double high_probability_bound(std::size_t l, std::size_t m6, std::size_t m3, std::uint64_t q) {
  const double e = -static_cast<double>(ceil_sqrt(l)) + static_cast<double>(m6 * m3) + 1.0;
  return std::pow(static_cast<double>(q), e);
}

struct Rates {
  std::size_t robust_secure = 0;
  std::size_t secrecy_only = 0;
  bool robust_achievable = false;   // m1 + m2 < m0
  bool secrecy_achievable = false;  // m2 < m0
};

inline Rates rates(std::size_t m0, std::size_t m1, std::size_t m2) {
  Rates r;
  r.robust_achievable = m1 + m2 < m0;
  r.secrecy_achievable = m2 < m0;
  r.robust_secure = r.robust_achievable ? m0 - m1 - m2 : 0;
  r.secrecy_only = r.secrecy_achievable ? m0 - m2 : 0;
  return r;
}

// ---------------------------------------------------------------------------
// Verification tags over GF(2): tag = f_S(message) with b output bits.

struct Tag {
  std::size_t b = 1;
  std::vector<std::uint8_t> seed;  // bits, length k-1
  std::vector<std::uint8_t> bits;  // length b
};

namespace detail {

inline std::vector<Symbol> to_symbols(const std::vector<std::uint8_t>& bits) { return {bits.begin(), bits.end()}; }

}  // namespace detail

inline Tag make_tag(const std::vector<std::uint8_t>& message, std::vector<std::uint8_t> seed, std::size_t b) {
  if (b < 1) throw HashError("tag length must be >= 1");
  if (message.size() < b) throw HashError("message shorter than the tag");
  const FieldSpec f2 = make_prime_field(2);
  HashSpec spec{message.size(), b};
  auto h = hash_apply(f2, spec, detail::to_symbols(seed), detail::to_symbols(message));
  return {b, std::move(seed), {h.begin(), h.end()}};
}

inline bool check_tag(const std::vector<std::uint8_t>& message, const Tag& tag) {
  if (message.size() != tag.seed.size() + 1) return false;
  return make_tag(message, tag.seed, tag.b).bits == tag.bits;
}

/// b (1 byte) | seed bit length (u32 BE) | seed bits | tag bits, each bit
/// string packed MSB first and zero-padded to whole bytes.
inline std::vector<std::uint8_t> encode_tag(const Tag& t) {
  if (t.b > 255) throw HashError("tag length does not fit the wire format");
  std::vector<std::uint8_t> out{static_cast<std::uint8_t>(t.b)};
  const auto n = static_cast<std::uint32_t>(t.seed.size());
  for (int s = 3; s >= 0; --s) out.push_back(static_cast<std::uint8_t>(n >> (8 * s)));
  auto put_bits = [&](const std::vector<std::uint8_t>& bits) {
    for (std::size_t i = 0; i < bits.size(); i += 8) {
      std::uint8_t byte = 0;
      for (std::size_t j = 0; j < 8; ++j)
        if (i + j < bits.size() && bits[i + j]) byte |= static_cast<std::uint8_t>(0x80 >> j);
      out.push_back(byte);
    }
  };
  put_bits(t.seed);
  put_bits(t.bits);
  return out;
}

inline Tag decode_tag(const std::vector<std::uint8_t>& in) {
  if (in.size() < 5) throw HashError("tag truncated");
  Tag t;
  t.b = in[0];
  std::size_t n = 0;
  for (int s = 1; s <= 4; ++s) n = (n << 8) | in[s];
  std::size_t pos = 5;
  auto get_bits = [&](std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    const std::size_t bytes = (count + 7) / 8;
    if (pos + bytes > in.size()) throw HashError("tag truncated");
    for (std::size_t i = 0; i < count; ++i) bits[i] = (in[pos + i / 8] >> (7 - i % 8)) & 1;
    pos += bytes;
    return bits;
  };
  t.seed = get_bits(n);
  t.bits = get_bits(t.b);
  if (pos != in.size()) throw HashError("trailing bytes after tag");
  return t;
}

struct TamperReport {
  std::uint64_t tamperings = 0;
  std::uint64_t seeds = 0;
  std::uint64_t accepted = 0;        // over all (tampering, seed) pairs
  std::uint64_t worst_accepted = 0;  // max over tamperings of accepted seeds

  double fraction() const { return static_cast<double>(accepted) / static_cast<double>(tamperings * seeds); }
  double worst_fraction() const { return static_cast<double>(worst_accepted) / static_cast<double>(seeds); }
};

/// Every nonzero change of every b-bit block of `message`, against every
/// seed: how often does the original tag still verify?
inline TamperReport tamper_sweep(const std::vector<std::uint8_t>& message, std::size_t b) {
  const std::size_t k = message.size();
  if (b < 1 || k % b != 0 || k - 1 > 20) throw HashError("tamper_sweep: message length must be a multiple of b, <= 21");
  TamperReport rep;
  rep.seeds = std::uint64_t{1} << (k - 1);
  std::vector<std::uint8_t> seed(k - 1);
  for (std::size_t block = 0; block < k / b; ++block) {
    for (std::uint64_t delta = 1; delta < (std::uint64_t{1} << b); ++delta) {
      std::vector<std::uint8_t> tampered = message;
      for (std::size_t j = 0; j < b; ++j) tampered[block * b + j] ^= (delta >> j) & 1;
      std::uint64_t acc = 0;
      for (std::uint64_t s = 0; s < rep.seeds; ++s) {
        for (std::size_t j = 0; j < k - 1; ++j) seed[j] = (s >> j) & 1;
        Tag tag = make_tag(message, seed, b);
        acc += check_tag(tampered, tag);
      }
      ++rep.tamperings;
      rep.accepted += acc;
      rep.worst_accepted = std::max(rep.worst_accepted, acc);
    }
  }
  return rep;
}

}  // namespace snc
