#pragma once
// Exact arithmetic in GF(p) and its algebraic extensions.
//
// A field is described by an immutable, shareable FieldSpec handle. Elements
// are carried as a Symbol: the base-Q digits of the code are the element's
// coefficient vector over the base field of order Q (c0 is the least
// significant digit). Prime-field symbols are residues 0..p-1. Because the
// embedding of a base field into an extension is the constant polynomial,
// lifting a symbol never changes its code.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snc {

using Symbol = std::uint64_t;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Selects the multiplication path of a binary extension field.
enum class Arithmetic { Fast, Reference };

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Returns a * b, or nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r > static_cast<unsigned __int128>(UINT64_MAX)) return std::nullopt;
  return static_cast<std::uint64_t>(r);
}

struct FieldData {
  enum class Kind { Prime, Binary, General };

  Kind kind = Kind::Prime;
  std::uint64_t characteristic = 0;
  std::uint64_t order = 0;
  std::size_t degree = 1;  // over the immediate base
  std::size_t depth = 0;   // 0 for a prime field
  std::shared_ptr<const FieldData> base;
  std::vector<Symbol> modulus;  // monic, low to high, codes over base
  std::uint64_t binary_modulus = 0;  // Kind::Binary only: bit i = coeff of x^i
};

}  // namespace detail

class FieldElement;

/// Immutable handle to a finite field. Copies share the same description.
class FieldSpec {
 public:
  FieldSpec() = default;

  static FieldSpec from_data(std::shared_ptr<const detail::FieldData> d) {
    FieldSpec f;
    f.data_ = std::move(d);
    return f;
  }

  bool valid() const noexcept { return data_ != nullptr; }
  std::uint64_t order() const { return data().order; }
  std::uint64_t characteristic() const { return data().characteristic; }
  std::size_t degree() const { return data().degree; }
  std::size_t depth() const { return data().depth; }
  bool is_prime_field() const { return data().depth == 0; }

  std::size_t absolute_degree() const {
    std::size_t d = 1;
    for (auto p = data_.get(); p && p->depth > 0; p = p->base.get()) d *= p->degree;
    return d;
  }

  /// Base field of an extension; throws for prime fields.
  FieldSpec base() const {
    if (is_prime_field()) throw FieldError("prime field has no base field");
    return from_data(data().base);
  }

  const std::vector<Symbol>& modulus() const { return data().modulus; }

  bool contains(Symbol a) const { return a < order(); }

  Symbol add(Symbol a, Symbol b) const {
    const auto& d = data();
    switch (d.kind) {
      case detail::FieldData::Kind::Prime: {
        Symbol s = a + b;
        return s >= d.order ? s - d.order : s;
      }
      case detail::FieldData::Kind::Binary:
        return a ^ b;
      default:
        return digitwise(a, b, false);
    }
  }

  Symbol neg(Symbol a) const {
    const auto& d = data();
    switch (d.kind) {
      case detail::FieldData::Kind::Prime:
        return a == 0 ? 0 : d.order - a;
      case detail::FieldData::Kind::Binary:
        return a;
      default:
        return digitwise(0, a, true);
    }
  }

  Symbol sub(Symbol a, Symbol b) const {
    const auto& d = data();
    switch (d.kind) {
      case detail::FieldData::Kind::Prime:
        return a >= b ? a - b : a + (d.order - b);
      case detail::FieldData::Kind::Binary:
        return a ^ b;
      default:
        return digitwise(a, b, true);
    }
  }

  Symbol mul(Symbol a, Symbol b) const {
    const auto& d = data();
    switch (d.kind) {
      case detail::FieldData::Kind::Prime:
        return static_cast<Symbol>((static_cast<unsigned __int128>(a) * b) % d.order);
      case detail::FieldData::Kind::Binary:
        return binary_mul(a, b);
      default:
        return general_mul(a, b);
    }
  }

  Symbol pow(Symbol a, std::uint64_t e) const {
    Symbol result = 1;
    Symbol sq = a;
    while (e > 0) {
      if (e & 1U) result = mul(result, sq);
      sq = mul(sq, sq);
      e >>= 1U;
    }
    return result;
  }

  Symbol inv(Symbol a) const {
    if (a == 0) throw FieldError("inversion of zero");
    return pow(a, order() - 2);
  }

  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  /// Coefficients of `a` over the immediate base field, length degree().
  std::vector<Symbol> coefficients(Symbol a) const {
    if (is_prime_field()) return {a};
    const Symbol q = data().base->order;
    std::vector<Symbol> c(degree());
    for (auto& v : c) {
      v = a % q;
      a /= q;
    }
    return c;
  }

  Symbol from_coefficients(const std::vector<Symbol>& c) const {
    if (is_prime_field()) {
      if (c.size() != 1 || c[0] >= order()) throw FieldError("bad prime-field coefficient");
      return c[0];
    }
    if (c.size() > degree()) throw FieldError("too many coefficients for extension degree");
    const Symbol q = data().base->order;
    Symbol code = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= q) throw FieldError("coefficient outside base field");
      code = code * q + c[i];
    }
    return code;
  }

  FieldElement element(Symbol a) const;

  /// Literal in the config syntax: GF(p), GF(p^t; modulus=[...]).
  std::string to_string() const {
    std::ostringstream os;
    if (is_prime_field()) {
      os << "GF(" << order() << ")";
      return os.str();
    }
    if (data().base->depth == 0) {
      os << "GF(" << characteristic() << "^" << degree() << "; modulus=[";
    } else {
      os << "EXT(" << base().to_string() << ", " << degree() << "; modulus=[";
    }
    for (std::size_t i = 0; i < modulus().size(); ++i) os << (i ? "," : "") << modulus()[i];
    os << "])";
    return os.str();
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    const detail::FieldData* x = a.data_.get();
    const detail::FieldData* y = b.data_.get();
    while (x && y) {
      if (x->order != y->order || x->depth != y->depth || x->modulus != y->modulus) return false;
      x = x->base.get();
      y = y->base.get();
    }
    return x == nullptr && y == nullptr;
  }

  const detail::FieldData& data() const {
    if (!data_) throw FieldError("use of an empty FieldSpec");
    return *data_;
  }
  const std::shared_ptr<const detail::FieldData>& shared_data() const { return data_; }

  // Schoolbook multiplication in the coefficient representation, usable for
  // any extension; the Binary kind's fast path is checked against it.
  Symbol general_mul(Symbol a, Symbol b) const;

 private:
  Symbol digitwise(Symbol a, Symbol b, bool subtract) const {
    const FieldSpec base = from_data(data().base);
    const Symbol q = base.order();
    Symbol code = 0;
    Symbol scale = 1;
    for (std::size_t i = 0; i < degree(); ++i) {
      Symbol x = a % q, y = b % q;
      a /= q;
      b /= q;
      code += (subtract ? base.sub(x, y) : base.add(x, y)) * scale;
      scale *= q;
    }
    return code;
  }

  Symbol binary_mul(Symbol a, Symbol b) const {
    const auto& d = data();
    const std::size_t t = d.degree;
    const std::uint64_t top = std::uint64_t{1} << (t - 1);
    const std::uint64_t low_mask = (t == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << t) - 1);
    const std::uint64_t reduce = d.binary_modulus & low_mask;
    Symbol r = 0;
    while (b != 0) {
      if (b & 1U) r ^= a;
      b >>= 1U;
      const bool carry = (a & top) != 0;
      a = (a << 1U) & low_mask;
      if (carry) a ^= reduce;
    }
    return r;
  }

  std::shared_ptr<const detail::FieldData> data_;
};

/// A value in a specific field. Arithmetic across different fields throws.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldSpec f, Symbol v) : field_(std::move(f)), value_(v) {
    if (!field_.contains(value_)) throw FieldError("symbol outside field");
  }

  const FieldSpec& field() const { return field_; }
  Symbol value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const { return {field_, field_.add(value_, same(o))}; }
  FieldElement operator-(const FieldElement& o) const { return {field_, field_.sub(value_, same(o))}; }
  FieldElement operator*(const FieldElement& o) const { return {field_, field_.mul(value_, same(o))}; }
  FieldElement operator/(const FieldElement& o) const { return {field_, field_.div(value_, same(o))}; }
  FieldElement operator-() const { return {field_, field_.neg(value_)}; }
  FieldElement inv() const { return {field_, field_.inv(value_)}; }
  FieldElement pow(std::uint64_t e) const { return {field_, field_.pow(value_, e)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value_ == b.value_ && a.field_ == b.field_;
  }

 private:
  Symbol same(const FieldElement& o) const {
    if (!(field_ == o.field_)) throw FieldError("field mismatch");
    return o.value_;
  }

  FieldSpec field_;
  Symbol value_ = 0;
};

inline FieldElement FieldSpec::element(Symbol a) const { return FieldElement(*this, a); }

// ---------------------------------------------------------------------------
// Polynomials over a field, coefficient codes low to high. Zero is {}.
namespace poly {

using Poly = std::vector<Symbol>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly mul(const FieldSpec& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline Poly sub(const FieldSpec& f, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  trim(a);
  return a;
}

/// Remainder of a modulo m (m nonzero).
inline Poly mod(const FieldSpec& f, Poly a, const Poly& m) {
  trim(a);
  const Symbol lead_inv = f.inv(m.back());
  while (a.size() >= m.size()) {
    const Symbol c = f.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = f.sub(a[shift + i], f.mul(c, m[i]));
    trim(a);
  }
  return a;
}

inline Poly make_monic(const FieldSpec& f, Poly a) {
  trim(a);
  if (a.empty()) return a;
  const Symbol li = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, li);
  return a;
}

inline Poly gcd(const FieldSpec& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(f, a);
}

/// base^e mod m.
inline Poly powmod(const FieldSpec& f, Poly base, std::uint64_t e, const Poly& m) {
  Poly result{1};
  result = mod(f, result, m);
  base = mod(f, base, m);
  while (e > 0) {
    if (e & 1U) result = mod(f, mul(f, result, base), m);
    base = mod(f, mul(f, base, base), m);
    e >>= 1U;
  }
  return result;
}

struct IrreducibilityResult {
  bool irreducible = false;
  Poly witness;  // a nontrivial monic factor when reducible
};

/// Irreducibility of a monic polynomial of degree >= 1 over f.
inline IrreducibilityResult check_irreducible(const FieldSpec& f, const Poly& monic) {
  const std::size_t t = monic.size() - 1;
  if (t == 1) return {true, {}};
  const Poly x{0, 1};
  Poly xp = x;
  for (std::size_t i = 1; i <= t / 2; ++i) {
    xp = powmod(f, xp, f.order(), monic);
    Poly g = gcd(f, monic, sub(f, xp, x));
    if (g.size() > 1) {
      if (g.size() < monic.size()) return {false, g};
      // Every factor has degree dividing i; find a proper one by trial division.
      Poly cand(i + 1, 0);
      cand[i] = 1;
      std::uint64_t total = 1;
      for (std::size_t k = 0; k < i; ++k) total *= f.order();
      for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t k = 0; k < i; ++k) {
          cand[k] = c % f.order();
          c /= f.order();
        }
        if (mod(f, monic, cand).empty()) return {false, cand};
      }
      return {false, g};
    }
  }
  return {true, {}};
}

inline std::string to_string(const Poly& p) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << "]";
  return os.str();
}

}  // namespace poly

inline Symbol FieldSpec::general_mul(Symbol a, Symbol b) const {
  if (is_prime_field()) return mul(a, b);
  const FieldSpec base = from_data(data().base);
  poly::Poly pa = coefficients(a), pb = coefficients(b);
  poly::trim(pa);
  poly::trim(pb);
  poly::Poly r = poly::mod(base, poly::mul(base, pa, pb), modulus());
  r.resize(degree(), 0);
  return from_coefficients(r);
}

// ---------------------------------------------------------------------------

inline FieldSpec make_prime_field(std::uint64_t p) {
  if (!detail::is_prime(p)) throw FieldError("not a prime: " + std::to_string(p));
  if (p > (std::uint64_t{1} << 62)) throw FieldError("prime exceeds symbol range");
  auto d = std::make_shared<detail::FieldData>();
  d->kind = detail::FieldData::Kind::Prime;
  d->characteristic = p;
  d->order = p;
  d->degree = 1;
  d->depth = 0;
  return FieldSpec::from_data(std::move(d));
}

/// Extension of `base` of degree t. Without a modulus the smallest monic
/// irreducible is chosen, ordering candidates by the integer code of their
/// lower coefficients.
inline FieldSpec make_extension_field(const FieldSpec& base, std::size_t t,
                                      std::optional<std::vector<Symbol>> modulus = std::nullopt,
                                      Arithmetic arithmetic = Arithmetic::Fast) {
  if (t < 1) throw FieldError("extension degree must be >= 1");
  if (base.depth() >= 2) throw FieldError("extension towers deeper than 2 levels are not supported");
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < t; ++i) {
    auto next = detail::checked_mul(order, base.order());
    if (!next || *next > (std::uint64_t{1} << 62)) throw FieldError("field order exceeds 2^62");
    order = *next;
  }

  poly::Poly m;
  if (modulus) {
    m = *modulus;
    if (m.size() != t + 1) throw FieldError("modulus must have degree " + std::to_string(t));
    if (m.back() != 1) throw FieldError("modulus must be monic");
    for (Symbol c : m) {
      if (!base.contains(c)) throw FieldError("modulus coefficient outside base field");
    }
    auto res = poly::check_irreducible(base, m);
    if (!res.irreducible) {
      throw FieldError("reducible modulus " + poly::to_string(m) + ", factor " + poly::to_string(res.witness));
    }
  } else {
    m.assign(t + 1, 0);
    m[t] = 1;
    const std::uint64_t candidates = order;  // base.order()^t lower-coefficient vectors
    bool found = false;
    for (std::uint64_t code = 0; code < candidates && !found; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < t; ++i) {
        m[i] = c % base.order();
        c /= base.order();
      }
      if (t > 1 && m[0] == 0) continue;
      found = poly::check_irreducible(base, m).irreducible;
    }
    if (!found) throw FieldError("no irreducible polynomial found");
  }

  auto d = std::make_shared<detail::FieldData>();
  d->characteristic = base.characteristic();
  d->order = order;
  d->degree = t;
  d->depth = base.depth() + 1;
  d->base = base.shared_data();
  d->modulus = m;
  d->kind = detail::FieldData::Kind::General;
  if (base.is_prime_field() && base.order() == 2 && arithmetic == Arithmetic::Fast && t <= 63) {
    d->kind = detail::FieldData::Kind::Binary;
    for (std::size_t i = 0; i <= t; ++i) {
      if (m[i]) d->binary_modulus |= std::uint64_t{1} << i;
    }
  }
  return FieldSpec::from_data(std::move(d));
}

/// True when `target` is `source` or is built over it (through at most two
/// extension levels).
inline bool extends(const FieldSpec& target, const FieldSpec& source) {
  FieldSpec f = target;
  while (true) {
    if (f == source) return true;
    if (f.is_prime_field()) return false;
    f = f.base();
  }
}

/// Constant-polynomial embedding of a base-field element into an extension.
inline FieldElement lift_element(const FieldElement& x, const FieldSpec& target) {
  if (!extends(target, x.field())) {
    throw FieldError(target.to_string() + " is not an extension of " + x.field().to_string());
  }
  return FieldElement(target, x.value());
}

namespace detail {

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_uint(std::string_view s, const char* what) {
  s = strip(s);
  if (s.empty()) throw FieldError(std::string("missing ") + what);
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw FieldError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    auto next = checked_mul(v, 10);
    if (!next || *next > UINT64_MAX - static_cast<unsigned>(c - '0')) throw FieldError("integer overflow");
    v = *next + static_cast<unsigned>(c - '0');
  }
  return v;
}

inline std::vector<std::uint64_t> parse_uint_list(std::string_view s, const char* what) {
  s = strip(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw FieldError(std::string(what) + " must be a bracketed list");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<std::uint64_t> out;
  if (strip(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(parse_uint(s.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `GF(p)`, `GF(p^t)` or `GF(p^t; modulus=[c0,c1,...,1])`.
inline FieldSpec parse_field(std::string_view text) {
  std::string_view s = detail::strip(text);
  if (s.size() < 4 || s.substr(0, 3) != "GF(" || s.back() != ')') {
    throw FieldError("field literal must look like GF(p), GF(p^t) or GF(p^t; modulus=[...])");
  }
  s = s.substr(3, s.size() - 4);
  std::optional<std::vector<Symbol>> modulus;
  if (auto semi = s.find(';'); semi != std::string_view::npos) {
    std::string_view opt = detail::strip(s.substr(semi + 1));
    s = s.substr(0, semi);
    const std::string_view key = "modulus";
    if (opt.substr(0, key.size()) != key) throw FieldError("unknown field option");
    opt = detail::strip(opt.substr(key.size()));
    if (opt.empty() || opt.front() != '=') throw FieldError("expected '=' after modulus");
    modulus = detail::parse_uint_list(opt.substr(1), "modulus");
  }
  std::uint64_t p = 0;
  std::size_t t = 1;
  if (auto caret = s.find('^'); caret != std::string_view::npos) {
    p = detail::parse_uint(s.substr(0, caret), "characteristic");
    t = detail::parse_uint(s.substr(caret + 1), "extension degree");
  } else {
    p = detail::parse_uint(s, "field order");
  }
  FieldSpec prime = make_prime_field(p);
  if (t == 1 && !modulus) return prime;
  return make_extension_field(prime, t, modulus);
}

/// Element literal: an integer code, a negative integer in a prime field, or
/// a bracketed coefficient list `[c0,c1,...]` over the base.
inline Symbol parse_symbol(const FieldSpec& f, std::string_view text) {
  std::string_view s = detail::strip(text);
  if (!s.empty() && s.front() == '[') {
    if (f.is_prime_field()) throw FieldError("coefficient list given for a prime field");
    auto c = detail::parse_uint_list(s, "coefficient list");
    return f.from_coefficients(c);
  }
  if (!s.empty() && s.front() == '-') {
    if (!f.is_prime_field()) throw FieldError("negative literal in an extension field");
    std::uint64_t v = detail::parse_uint(s.substr(1), "element") % f.order();
    return f.neg(v);
  }
  std::uint64_t v = detail::parse_uint(s, "element");
  if (!f.contains(v)) throw FieldError("element " + std::to_string(v) + " outside " + f.to_string());
  return v;
}

}  // namespace snc
