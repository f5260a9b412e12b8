#include <gtest/gtest.h>

#include <random>

#include "snc/field.hpp"

using namespace snc;

TEST(Field, PrimeFieldArithmetic) {
  FieldSpec f = make_prime_field(7);
  EXPECT_EQ(f.order(), 7u);
  EXPECT_EQ(f.add(5, 4), 2u);
  EXPECT_EQ(f.sub(2, 5), 4u);
  EXPECT_EQ(f.mul(3, 5), 1u);
  EXPECT_EQ(f.inv(3), 5u);
  EXPECT_EQ(f.neg(0), 0u);
  EXPECT_THROW(f.inv(0), FieldError);
  EXPECT_THROW(make_prime_field(9), FieldError);
}

TEST(Field, GF4HasXTimesXPlusOneEqualOne) {
  FieldSpec f = make_extension_field(make_prime_field(2), 2);
  EXPECT_EQ(f.modulus(), (std::vector<Symbol>{1, 1, 1}));
  // x = 0b10, x+1 = 0b11
  EXPECT_EQ(f.mul(2, 3), 1u);
  EXPECT_EQ(f.mul(2, 2), 3u);
}

TEST(Field, CanonicalModuli) {
  FieldSpec f2 = make_prime_field(2);
  EXPECT_EQ(make_extension_field(f2, 3).modulus(), (std::vector<Symbol>{1, 1, 0, 1}));
  EXPECT_EQ(make_extension_field(f2, 4).modulus(), (std::vector<Symbol>{1, 1, 0, 0, 1}));
  EXPECT_EQ(make_extension_field(make_prime_field(3), 2).modulus(), (std::vector<Symbol>{1, 0, 1}));
}

TEST(Field, ReducibleModulusRejectedWithFactor) {
  FieldSpec f2 = make_prime_field(2);
  try {
    make_extension_field(f2, 2, std::vector<Symbol>{1, 0, 1});
    FAIL() << "x^2+1 accepted";
  } catch (const FieldError& e) {
    EXPECT_NE(std::string(e.what()).find("factor"), std::string::npos);
  }
}

TEST(Field, OrderLimitAndTowerDepth) {
  FieldSpec f2 = make_prime_field(2);
  EXPECT_NO_THROW(make_extension_field(f2, 62));
  EXPECT_THROW(make_extension_field(f2, 63), FieldError);
  FieldSpec f4 = make_extension_field(f2, 2);
  FieldSpec f16 = make_extension_field(f4, 2);
  EXPECT_EQ(f16.depth(), 2u);
  EXPECT_THROW(make_extension_field(f16, 2), FieldError);
}

// Field axioms checked exhaustively on small fields of every kind.
class FieldAxioms : public ::testing::TestWithParam<std::string> {};

TEST_P(FieldAxioms, Exhaustive) {
  FieldSpec f = parse_field(GetParam());
  const Symbol q = f.order();
  for (Symbol a = 0; a < q; ++a) {
    EXPECT_EQ(f.add(a, f.neg(a)), 0u);
    if (a != 0) {
      EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
    }
    for (Symbol b = 0; b < q; ++b) {
      EXPECT_EQ(f.add(a, b), f.add(b, a));
      EXPECT_EQ(f.mul(a, b), f.mul(b, a));
      for (Symbol c = 0; c < q; c += (q > 16 ? 7 : 1)) {
        EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        EXPECT_EQ(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Small, FieldAxioms,
                         ::testing::Values("GF(2)", "GF(5)", "GF(2^3)", "GF(3^2)", "GF(5^2)", "GF(2^5)"));

TEST(Field, BinaryFastPathMatchesSchoolbook) {
  FieldSpec f2 = make_prime_field(2);
  for (std::size_t t = 1; t <= 8; ++t) {
    FieldSpec fast = make_extension_field(f2, t);
    FieldSpec ref = make_extension_field(f2, t, fast.modulus(), Arithmetic::Reference);
    for (Symbol a = 0; a < fast.order(); ++a)
      for (Symbol b = 0; b < fast.order(); ++b) ASSERT_EQ(fast.mul(a, b), ref.mul(a, b)) << t;
  }
}

TEST(Field, MultiplicativeGroupOrder) {
  FieldSpec f = make_extension_field(make_prime_field(2), 16);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    Symbol a = rng() % (f.order() - 1) + 1;
    EXPECT_EQ(f.pow(a, f.order() - 1), 1u);
  }
}

TEST(Field, TowerOverGF4) {
  FieldSpec f4 = make_extension_field(make_prime_field(2), 2);
  FieldSpec f16 = make_extension_field(f4, 2);
  EXPECT_EQ(f16.order(), 16u);
  for (Symbol a = 1; a < 16; ++a) EXPECT_EQ(f16.mul(a, f16.inv(a)), 1u);
  EXPECT_TRUE(extends(f16, f4));
  EXPECT_TRUE(extends(f16, make_prime_field(2)));
  EXPECT_FALSE(extends(f4, f16));
}

TEST(Field, LiftIsHomomorphism) {
  FieldSpec f3 = make_prime_field(3);
  FieldSpec f9 = make_extension_field(f3, 2);
  for (Symbol a = 0; a < 3; ++a) {
    for (Symbol b = 0; b < 3; ++b) {
      auto la = lift_element(f3.element(a), f9);
      auto lb = lift_element(f3.element(b), f9);
      EXPECT_EQ((la + lb).value(), lift_element(f3.element(a) + f3.element(b), f9).value());
      EXPECT_EQ((la * lb).value(), lift_element(f3.element(a) * f3.element(b), f9).value());
    }
  }
  EXPECT_THROW(lift_element(f9.element(1), f3), FieldError);
}

TEST(Field, ElementMismatchThrows) {
  auto a = make_prime_field(3).element(1);
  auto b = make_prime_field(5).element(1);
  EXPECT_THROW(a + b, FieldError);
}

TEST(Field, ParseLiterals) {
  FieldSpec f = parse_field("GF(2^4; modulus=[1,0,0,1,1])");
  EXPECT_EQ(f.order(), 16u);
  EXPECT_EQ(f.modulus(), (std::vector<Symbol>{1, 0, 0, 1, 1}));
  EXPECT_EQ(parse_field(f.to_string()), f);
  EXPECT_EQ(parse_symbol(f, "[1,1]"), 3u);
  EXPECT_EQ(parse_symbol(make_prime_field(7), "-1"), 6u);
  EXPECT_THROW(parse_field("GF(6)"), FieldError);
  EXPECT_THROW(parse_field("F(2)"), FieldError);
  EXPECT_THROW(parse_symbol(f, "16"), FieldError);
}
