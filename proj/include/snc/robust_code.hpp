#pragma once
// Robust code over F_{q'} for the wiretap-and-addition channel: invertible
// pre-coder U0, Vandermonde side information (V, U2 = M U1), and a decoder
// that solves U3 (Ybar U1) = U2 and returns U3 Ybar.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snc/field.hpp"
#include "snc/matrix.hpp"
#include "snc/network.hpp"

namespace snc {

class CodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RobustCodeParams {
  FieldSpec field;  // F_{q'}
  std::size_t n = 1;
  std::size_t m0 = 1, m1 = 0, m3 = 1, m4 = 1;

  std::size_t m() const { return m0 + 1; }
  std::size_t message_rows() const { return m0 - m1; }

  void validate() const {
    if (!field.valid()) throw CodeError("robust code needs a field");
    if (n < 1) throw CodeError("block length n must be >= 1");
    if (m0 <= m1) throw CodeError("robust code requires m0 > m1");
    if (m0 > m3 || m0 > m4) throw CodeError("m0 exceeds the channel dimensions");
  }
};

struct RobustCodeInstance {
  FqMatrix u0;              // m3 x m3, invertible
  std::vector<Symbol> v;    // V_1..V_m
  FqMatrix u1;              // n x m, U1[i-1][j] = V_j^i
};

struct SideInfo {
  std::vector<Symbol> v;
  FqMatrix u2;  // (m0-m1) x m

  std::size_t symbol_count() const { return v.size() + u2.rows() * u2.cols(); }
  friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

inline FqMatrix vandermonde(const FieldSpec& f, const std::vector<Symbol>& v, std::size_t n) {
  FqMatrix u(f, n, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    Symbol p = 1;
    for (std::size_t i = 0; i < n; ++i) {
      p = f.mul(p, v[j]);
      u(i, j) = p;
    }
  }
  return u;
}

template <class Rng>
RobustCodeInstance keygen(const RobustCodeParams& params, Rng& rng) {
  params.validate();
  RobustCodeInstance inst;
  inst.u0 = random_invertible(params.field, params.m3, rng);
  inst.v.resize(params.m());
  for (auto& x : inst.v) x = uniform_symbol(params.field, rng);
  inst.u1 = vandermonde(params.field, inst.v, params.n);
  return inst;
}

struct RobustEncoding {
  FqMatrix x;  // m3 x n channel input
  SideInfo side;
};

/// X^n = U0 [M; 0] with the message in the first m0-m1 coordinates.
inline RobustEncoding encode(const RobustCodeParams& params, const RobustCodeInstance& inst, const FqMatrix& msg) {
  if (msg.rows() != params.message_rows() || msg.cols() != params.n) {
    throw CodeError("message must be " + std::to_string(params.message_rows()) + "x" + std::to_string(params.n));
  }
  FqMatrix padded(params.field, params.m3, params.n);
  for (std::size_t r = 0; r < msg.rows(); ++r)
    for (std::size_t c = 0; c < msg.cols(); ++c) padded(r, c) = msg(r, c);
  return {inst.u0 * padded, SideInfo{inst.v, msg * inst.u1}};
}

/// nullopt signals a decoding failure (the linear system has no solution).
inline std::optional<FqMatrix> decode(const RobustCodeParams& params, const FqMatrix& yb, const SideInfo& side) {
  if (yb.rows() != params.m4 || yb.cols() != params.n) throw CodeError("received block has wrong dimensions");
  if (side.v.size() != params.m() || side.u2.rows() != params.message_rows() || side.u2.cols() != params.m()) {
    throw CodeError("side information has wrong dimensions");
  }
  const FqMatrix ybar = independent_rows(yb).rows;
  const FqMatrix u1 = vandermonde(params.field, side.v, params.n);
  auto u3 = solve_left(ybar * u1, side.u2);
  if (!u3) return std::nullopt;
  return *u3 * ybar;
}

// ---------------------------------------------------------------------------
// Diagnostics.

struct ReducedInjection {
  FqMatrix hb_hat;  // m4 x rank(H_B), columns a basis of Im H_B
  FqMatrix z_hat;   // rank(H_B) x n
};

/// H_B Z = Hhat Zhat with Hhat the pivot columns of H_B.
inline ReducedInjection reduce_hz(const FqMatrix& hb, const FqMatrix& z) {
  EchelonForm e = rref(hb);
  std::vector<std::size_t> rows(e.pivots.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return {hb.select_cols(e.pivots), e.reduced.select_rows(rows) * z};
}

struct Conditions {
  bool f1 = false;    // on the rows Bob's decoder keeps
  bool f1p = false;   // Im(K_B U0 P) and Im(Hhat) meet only in 0
  bool f1pp = false;  // K_B U0 P is injective on Im M
  bool f2 = false;    // rank([M; Zhat] U1) = rank [M; Zhat]

  bool all() const { return f1 && f1p && f1pp && f2; }
};

namespace detail {

inline bool trivially_intersecting(const FqMatrix& a, const FqMatrix& b) {
  return rank(hstack(a, b)) == rank(a) + rank(b);
}

}  // namespace detail

inline Conditions check_conditions(const RobustCodeParams& params, const RobustCodeInstance& inst, const FqMatrix& kb,
                                   const ReducedInjection& inj, const FqMatrix& msg) {
  const FieldSpec& f = params.field;
  FqMatrix p(f, params.m3, params.message_rows());
  for (std::size_t r = 0; r < params.message_rows(); ++r) p(r, r) = 1;
  const FqMatrix kup = kb * inst.u0 * p;
  Conditions c;
  c.f1p = detail::trivially_intersecting(kup, inj.hb_hat);
  c.f1pp = rank(kup * msg) == rank(msg);

  const FqMatrix yb = kup * msg + inj.hb_hat * inj.z_hat;
  const auto kept = independent_rows(yb).indices;
  const FqMatrix kbar = kup.select_rows(kept);
  const FqMatrix hbar = inj.hb_hat.select_rows(kept);
  c.f1 = detail::trivially_intersecting(kbar, hbar) && rank(kbar * msg) == rank(msg);

  const FqMatrix stacked = vstack(msg, inj.z_hat);
  c.f2 = rank(stacked * inst.u1) == rank(stacked);
  return c;
}

// ---------------------------------------------------------------------------
// Block lifting and packing.

struct LiftedBlock {
  std::size_t t = 1;  // extension degree over F_q
  std::size_t l = 1;  // t * n base-field symbols per edge
  FieldSpec field;    // F_{q'} with q' = q^t
};

/// Smallest t with q^t >= n^(m0+1); l = t n.
inline LiftedBlock lift_block(const FieldSpec& base, std::size_t n, std::size_t m0) {
  if (n < 2) throw CodeError("lift_block needs n >= 2");
  unsigned __int128 target = 1;
  for (std::size_t k = 0; k <= m0; ++k) {
    target *= n;
    if (target > (static_cast<unsigned __int128>(1) << 62)) throw CodeError("n^(m0+1) exceeds the field range");
  }
  std::size_t t = 1;
  unsigned __int128 size = base.order();
  while (size < target) {
    size *= base.order();
    ++t;
  }
  LiftedBlock b;
  b.t = t;
  b.l = t * n;
  b.field = t == 1 ? base : make_extension_field(base, t);
  return b;
}

/// Reads each group of t consecutive F_q symbols in a row as one F_{q'} symbol.
inline FqMatrix pack(const FqMatrix& a, const FieldSpec& ext) {
  const std::size_t t = ext == a.field() ? 1 : ext.degree();
  if (t != 1 && !(ext.base() == a.field())) throw CodeError("pack: field is not a direct extension");
  if (a.cols() % t != 0) throw CodeError("pack: column count not a multiple of the extension degree");
  FqMatrix out(ext, a.rows(), a.cols() / t);
  std::vector<Symbol> digits(t);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      for (std::size_t s = 0; s < t; ++s) digits[s] = a(r, c * t + s);
      out(r, c) = t == 1 ? digits[0] : ext.from_coefficients(digits);
    }
  }
  return out;
}

inline FqMatrix unpack(const FqMatrix& a, const FieldSpec& base) {
  const FieldSpec& ext = a.field();
  if (ext == base) return a;
  if (!(ext.base() == base)) throw CodeError("unpack: field is not a direct extension");
  const std::size_t t = ext.degree();
  FqMatrix out(base, a.rows(), a.cols() * t);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      auto digits = ext.coefficients(a(r, c));
      for (std::size_t s = 0; s < t; ++s) out(r, c * t + s) = digits[s];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Side-information wire format: "SNCS", version, u32 m, u32 rows of U2,
// then V_1..V_m and U2 row-major as big-endian u64.

inline std::vector<std::uint8_t> serialize(const SideInfo& s) {
  std::vector<std::uint8_t> out{'S', 'N', 'C', 'S', 1};
  auto put32 = [&](std::uint32_t v) {
    for (int b = 3; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  };
  auto put64 = [&](std::uint64_t v) {
    for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  };
  put32(static_cast<std::uint32_t>(s.v.size()));
  put32(static_cast<std::uint32_t>(s.u2.rows()));
  for (Symbol v : s.v) put64(v);
  for (Symbol v : s.u2.entries()) put64(v);
  return out;
}

inline SideInfo deserialize_side_info(const FieldSpec& f, const std::vector<std::uint8_t>& in) {
  std::size_t pos = 0;
  auto need = [&](std::size_t k) {
    if (pos + k > in.size()) throw CodeError("side information truncated");
  };
  need(5);
  if (in[0] != 'S' || in[1] != 'N' || in[2] != 'C' || in[3] != 'S') throw CodeError("bad side information magic");
  if (in[4] != 1) throw CodeError("unsupported side information version " + std::to_string(in[4]));
  pos = 5;
  auto get = [&](int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) v = (v << 8) | in[pos++];
    return v;
  };
  const std::size_t m = get(4), rows = get(4);
  SideInfo s;
  s.v.resize(m);
  for (auto& v : s.v) v = get(8);
  s.u2 = FqMatrix(f, rows, m);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < m; ++c) s.u2(r, c) = get(8);
  if (pos != in.size()) throw CodeError("trailing bytes after side information");
  for (Symbol v : s.v)
    if (!f.contains(v)) throw CodeError("side information symbol outside field");
  for (Symbol v : s.u2.entries())
    if (!f.contains(v)) throw CodeError("side information symbol outside field");
  return s;
}

// ---------------------------------------------------------------------------

struct CollisionResult {
  std::uint64_t hits = 0;   // (V_1..V_m) with x U1 = x' U1
  std::uint64_t total = 0;  // q^m
  double probability() const { return static_cast<double>(hits) / static_cast<double>(total); }
};

/// Exact Pr{x U1 = x' U1} over uniform V in F_q^m by enumeration. The columns
/// are independent, so the count is (number of roots)^m, but every V is
/// visited anyway.
inline CollisionResult collision_oracle(const FieldSpec& f, const std::vector<Symbol>& x,
                                        const std::vector<Symbol>& xp, std::size_t m) {
  if (x.size() != xp.size() || x.empty()) throw CodeError("collision_oracle: vectors must have equal nonzero length");
  if (x == xp) throw CodeError("collision_oracle: x and x' must differ");
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < m; ++k) {
    total *= f.order();
    if (total > (std::uint64_t{1} << 20)) throw CodeError("collision_oracle: q^m exceeds 2^20");
  }
  const std::size_t n = x.size();
  FqMatrix d(f, 1, n);
  for (std::size_t i = 0; i < n; ++i) d(0, i) = f.sub(x[i], xp[i]);
  CollisionResult res{0, total};
  std::vector<Symbol> v(m);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto& e : v) {
      e = c % f.order();
      c /= f.order();
    }
    if ((d * vandermonde(f, v, n)).is_zero()) ++res.hits;
  }
  return res;
}

}  // namespace snc
