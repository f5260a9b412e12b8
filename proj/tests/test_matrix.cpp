#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <random>

#include "snc/matrix.hpp"

using namespace snc;

namespace {

// Enumerates every matrix with `rows` x `cols` entries in F_q.
template <class F>
void for_each_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, F&& fn) {
  FqMatrix m(f, rows, cols);
  const std::size_t n = rows * cols;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= f.order();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      m(i / cols, i % cols) = c % f.order();
      c /= f.order();
    }
    fn(m);
  }
}

// Rank by counting the image: |{A v}| = q^rank.
std::size_t rank_by_image(const FqMatrix& a) {
  const FieldSpec& f = a.field();
  std::set<std::vector<Symbol>> seen;
  for_each_matrix(f, a.cols(), 1, [&](const FqMatrix& v) { seen.insert((a * v).entries()); });
  std::size_t r = 0;
  std::size_t size = 1;
  while (size < seen.size()) {
    size *= f.order();
    ++r;
  }
  return r;
}

}  // namespace

TEST(Matrix, ProductAndTranspose) {
  FieldSpec f = make_prime_field(5);
  FqMatrix a = FqMatrix::parse(f, "1 2; 3 4");
  FqMatrix b = FqMatrix::parse(f, "0 1; 1 0");
  EXPECT_EQ(a * b, FqMatrix::parse(f, "2 1; 4 3"));
  EXPECT_EQ(a.transpose(), FqMatrix::parse(f, "1 3; 2 4"));
  EXPECT_THROW(a * FqMatrix(f, 3, 1), FieldError);
}

TEST(Matrix, RankMatchesImageCountExhaustively) {
  FieldSpec f = make_prime_field(2);
  for_each_matrix(f, 3, 3, [&](const FqMatrix& m) { ASSERT_EQ(rank(m), rank_by_image(m)); });
  FieldSpec f3 = make_prime_field(3);
  for_each_matrix(f3, 2, 3, [&](const FqMatrix& m) { ASSERT_EQ(rank(m), rank_by_image(m)); });
}

TEST(Matrix, RankNullity) {
  std::mt19937_64 rng(7);
  FieldSpec f = make_extension_field(make_prime_field(2), 3);
  for (int i = 0; i < 200; ++i) {
    FqMatrix a = random_matrix(f, 1 + rng() % 5, 1 + rng() % 5, rng);
    FqMatrix k = kernel_basis(a);
    EXPECT_EQ(rank(a) + k.rows(), a.cols());
    if (k.rows()) {
      EXPECT_TRUE((a * k.transpose()).is_zero());
    }
    EXPECT_EQ(rank(k), k.rows());
    FqMatrix im = image_basis(a);
    EXPECT_EQ(im.rows(), rank(a));
    EXPECT_EQ(rank(hstack(a, im.transpose())), rank(a));
  }
}

TEST(Matrix, SolveLeftExhaustiveGF2) {
  FieldSpec f = make_prime_field(2);
  FqMatrix a = FqMatrix::parse(f, "1 0 1; 0 1 1");
  for_each_matrix(f, 1, 3, [&](const FqMatrix& b) {
    bool in_row_space = false;
    for_each_matrix(f, 1, 2, [&](const FqMatrix& x) { in_row_space |= (x * a == b); });
    auto x = solve_left(a, b);
    EXPECT_EQ(x.has_value(), in_row_space);
    if (x) {
      EXPECT_EQ(*x * a, b);
    }
  });
}

TEST(Matrix, IndependentRowsGreedy) {
  FieldSpec f = make_prime_field(3);
  FqMatrix a = FqMatrix::parse(f, "1 1 0; 2 2 0; 0 0 1; 1 1 1; 0 1 0");
  RowSelection s = independent_rows(a);
  EXPECT_EQ(s.indices, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(rank(s.rows), 3u);
}

TEST(Matrix, RandomInvertibleUniformOverGL22) {
  // |GL(2,2)| = 6; 60000 draws, each bucket within 3 sigma of 10000.
  FieldSpec f = make_prime_field(2);
  std::mt19937_64 rng(2024);
  std::map<std::vector<Symbol>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) counts[random_invertible(f, 2, rng).entries()]++;
  ASSERT_EQ(counts.size(), 6u);
  const double mean = draws / 6.0;
  const double sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  for (auto& [m, c] : counts) EXPECT_LT(std::abs(c - mean), 3 * sigma);
}

TEST(Matrix, LiftPreservesProductsAndRank) {
  FieldSpec f2 = make_prime_field(2);
  FieldSpec f8 = make_extension_field(f2, 3);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    FqMatrix a = random_matrix(f2, 3, 4, rng);
    FqMatrix b = random_matrix(f2, 4, 2, rng);
    EXPECT_EQ(lift_matrix(a * b, f8), lift_matrix(a, f8) * lift_matrix(b, f8));
    EXPECT_EQ(rank(lift_matrix(a, f8)), rank(a));
  }
  EXPECT_THROW(lift_matrix(FqMatrix(f8, 1, 1), f2), FieldError);
}

TEST(Matrix, ParseErrors) {
  FieldSpec f = make_prime_field(2);
  EXPECT_THROW(FqMatrix::parse(f, "1 0; 1"), FieldError);
  EXPECT_THROW(FqMatrix::parse(f, "2"), FieldError);
}
