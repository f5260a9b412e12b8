#pragma once
// Dense matrices over a FieldSpec and the Gaussian-elimination toolkit built
// on them: rank, echelon form, kernel and image bases, left solves, greedy
// independent-row selection and uniform sampling of invertible matrices.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snc/field.hpp"

namespace snc {

class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(FieldSpec f, std::size_t rows, std::size_t cols)
      : field_(std::move(f)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FqMatrix identity(const FieldSpec& f, std::size_t n) {
    FqMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static FqMatrix from_rows(const FieldSpec& f, const std::vector<std::vector<Symbol>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    FqMatrix m(f, rows.size(), c);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != c) throw FieldError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) {
        if (!f.contains(rows[r][j])) throw FieldError("matrix entry outside field");
        m(r, j) = rows[r][j];
      }
    }
    return m;
  }

  /// Column vector from a list of symbols.
  static FqMatrix column(const FieldSpec& f, std::span<const Symbol> v) {
    FqMatrix m(f, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  /// Rows of space-separated element literals, rows separated by ';'.
  static FqMatrix parse(const FieldSpec& f, std::string_view text) {
    std::vector<std::vector<Symbol>> rows;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto semi = text.find(';', start);
      std::string_view row = text.substr(start, semi == std::string_view::npos ? text.npos : semi - start);
      std::vector<Symbol> entries;
      std::size_t i = 0;
      while (i < row.size()) {
        while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) ++i;
        if (i >= row.size()) break;
        std::size_t j = i;
        if (row[i] == '[') {
          j = row.find(']', i);
          if (j == std::string_view::npos) throw FieldError("unterminated coefficient list");
          ++j;
        } else {
          while (j < row.size() && !std::isspace(static_cast<unsigned char>(row[j]))) ++j;
        }
        entries.push_back(parse_symbol(f, row.substr(i, j - i)));
        i = j;
      }
      if (!entries.empty()) rows.push_back(std::move(entries));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    return from_rows(f, rows);
  }

  const FieldSpec& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Symbol& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Symbol operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Symbol>& entries() const { return data_; }

  bool is_zero() const {
    for (Symbol v : data_) {
      if (v != 0) return false;
    }
    return true;
  }

  FqMatrix transpose() const {
    FqMatrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  FqMatrix select_rows(std::span<const std::size_t> idx) const {
    FqMatrix m(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto src = row(idx[i]);
      std::copy(src.begin(), src.end(), m.row(i).begin());
    }
    return m;
  }

  FqMatrix select_cols(std::span<const std::size_t> idx) const {
    FqMatrix m(field_, rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t i = 0; i < idx.size(); ++i) m(r, i) = (*this)(r, idx[i]);
    return m;
  }

  FqMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    FqMatrix m(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
    return m;
  }

  FqMatrix operator*(const FqMatrix& o) const {
    check_field(o);
    if (cols_ != o.rows_) throw FieldError("matrix product dimension mismatch");
    FqMatrix m(field_, rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Symbol a = (*this)(r, k);
        if (a == 0) continue;
        for (std::size_t c = 0; c < o.cols_; ++c) {
          m(r, c) = field_.add(m(r, c), field_.mul(a, o(k, c)));
        }
      }
    }
    return m;
  }

  FqMatrix operator+(const FqMatrix& o) const { return zip(o, false); }
  FqMatrix operator-(const FqMatrix& o) const { return zip(o, true); }

  FqMatrix scaled(Symbol s) const {
    FqMatrix m = *this;
    for (auto& v : m.data_) v = field_.mul(v, s);
    return m;
  }

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_ && a.field_ == b.field_;
  }

  /// Literal form accepted by parse().
  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r) os << "; ";
      for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
    }
    return os.str();
  }

 private:
  void check_field(const FqMatrix& o) const {
    if (!(field_ == o.field_)) throw FieldError("matrix field mismatch");
  }

  FqMatrix zip(const FqMatrix& o, bool subtract) const {
    check_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw FieldError("matrix sum dimension mismatch");
    FqMatrix m(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      m.data_[i] = subtract ? field_.sub(data_[i], o.data_[i]) : field_.add(data_[i], o.data_[i]);
    }
    return m;
  }

  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> data_;
};

/// [A | B]
inline FqMatrix hstack(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows()) throw FieldError("hstack row mismatch");
  if (!(a.field() == b.field())) throw FieldError("matrix field mismatch");
  FqMatrix m(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

/// [A ; B]
inline FqMatrix vstack(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.cols()) throw FieldError("vstack column mismatch");
  if (!(a.field() == b.field())) throw FieldError("matrix field mismatch");
  FqMatrix m(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, c) = b(r, c);
  return m;
}

struct EchelonForm {
  FqMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

inline EchelonForm rref(FqMatrix a) {
  const FieldSpec& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
    std::size_t p = lead;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != lead) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(lead, j));
    }
    const Symbol inv = f.inv(a(lead, c));
    for (std::size_t j = c; j < a.cols(); ++j) a(lead, j) = f.mul(a(lead, j), inv);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead || a(r, c) == 0) continue;
      const Symbol factor = a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(r, j) = f.sub(a(r, j), f.mul(factor, a(lead, j)));
    }
    pivots.push_back(c);
    ++lead;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const FqMatrix& a) {
  if (a.empty()) return 0;
  return rref(a).pivots.size();
}

/// Basis of {v : A v = 0}, one vector per row of the result (cols(A) wide).
inline FqMatrix kernel_basis(const FqMatrix& a) {
  const FieldSpec& f = a.field();
  EchelonForm e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  const std::size_t dim = a.cols() - e.pivots.size();
  FqMatrix basis(f, dim, a.cols());
  std::size_t k = 0;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(k, free) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(k, e.pivots[r]) = f.neg(e.reduced(r, free));
    ++k;
  }
  return basis;
}

/// Basis of the column space of A, one vector per row of the result.
inline FqMatrix image_basis(const FqMatrix& a) {
  EchelonForm e = rref(a);
  return a.select_cols(e.pivots).transpose();
}

/// Some X with X * A = B, free variables set to zero; nullopt when B's rows
/// are outside the row space of A.
inline std::optional<FqMatrix> solve_left(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.cols()) throw FieldError("solve_left: A and B must have equal column counts");
  if (!(a.field() == b.field())) throw FieldError("matrix field mismatch");
  const FieldSpec& f = a.field();
  // A^T X^T = B^T: reduce [A^T | B^T].
  const FqMatrix at = a.transpose();
  const FqMatrix bt = b.transpose();
  EchelonForm e = rref(hstack(at, bt));
  const std::size_t n = a.rows();
  for (auto p : e.pivots) {
    if (p >= n) return std::nullopt;  // pivot in the augmented part: inconsistent
  }
  FqMatrix x(f, b.rows(), n);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    for (std::size_t k = 0; k < b.rows(); ++k) x(k, e.pivots[r]) = e.reduced(r, n + k);
  }
  if (!(x * a == b)) return std::nullopt;
  return x;
}

/// Greedy first-wins selection of linearly independent rows.
struct RowSelection {
  std::vector<std::size_t> indices;
  FqMatrix rows;
};

inline RowSelection independent_rows(const FqMatrix& a) {
  const FieldSpec& f = a.field();
  std::vector<std::size_t> chosen;
  // Incremental echelon basis of the chosen rows.
  std::vector<std::vector<Symbol>> basis;
  std::vector<std::size_t> lead;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::vector<Symbol> v(a.row(r).begin(), a.row(r).end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Symbol c = v[lead[b]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.sub(v[j], f.mul(c, basis[b][j]));
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    const Symbol inv = f.inv(v[p]);
    for (auto& x : v) x = f.mul(x, inv);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Symbol c = basis[b][p];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) basis[b][j] = f.sub(basis[b][j], f.mul(c, v[j]));
    }
    basis.push_back(std::move(v));
    lead.push_back(p);
    chosen.push_back(r);
  }
  FqMatrix rows = a.select_rows(chosen);
  return {std::move(chosen), std::move(rows)};
}

template <class Rng>
Symbol uniform_symbol(const FieldSpec& f, Rng& rng) {
  std::uniform_int_distribution<Symbol> dist(0, f.order() - 1);
  return dist(rng);
}

template <class Rng>
FqMatrix random_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, Rng& rng) {
  FqMatrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = uniform_symbol(f, rng);
  return m;
}

/// Uniform over GL(n, q) by rejection sampling.
template <class Rng>
FqMatrix random_invertible(const FieldSpec& f, std::size_t n, Rng& rng) {
  if (n == 0) throw FieldError("random_invertible needs n >= 1");
  while (true) {
    FqMatrix m = random_matrix(f, n, n, rng);
    if (rank(m) == n) return m;
  }
}

inline FqMatrix lift_matrix(const FqMatrix& a, const FieldSpec& target) {
  if (!extends(target, a.field())) {
    throw FieldError(target.to_string() + " is not an extension of " + a.field().to_string());
  }
  FqMatrix m(target, a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  return m;
}

}  // namespace snc
