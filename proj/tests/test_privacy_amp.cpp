#include <gtest/gtest.h>

#include <random>

#include "snc/privacy_amp.hpp"

using namespace snc;

namespace {

std::vector<Symbol> bits_of(std::uint64_t v, std::size_t n) {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (v >> i) & 1;
  return out;
}

// (I | T) x as a matrix product.
std::vector<Symbol> hash_by_matrix(const FieldSpec& f, const HashSpec& spec, const std::vector<Symbol>& seed,
                                   const std::vector<Symbol>& x) {
  FqMatrix it = hstack(FqMatrix::identity(f, spec.kbar), toeplitz(f, spec, seed));
  return (it * FqMatrix::column(f, x)).entries();
}

}  // namespace

TEST(PrivacyAmp, ToeplitzIsDiagonalConstant) {
  FieldSpec f = make_prime_field(3);
  HashSpec spec{7, 3};
  std::vector<Symbol> s{0, 1, 2, 0, 1, 1};
  FqMatrix t = toeplitz(f, spec, s);
  ASSERT_EQ(t.rows(), 3u);
  ASSERT_EQ(t.cols(), 4u);
  for (std::size_t a = 1; a < 3; ++a)
    for (std::size_t b = 1; b < 4; ++b) EXPECT_EQ(t(a, b), t(a - 1, b - 1));
  // Last column top to bottom, then first row right to left, spell S.
  EXPECT_EQ(t(0, 3), s[0]);
  EXPECT_EQ(t(2, 0), s[5]);
}

TEST(PrivacyAmp, HashExamples) {
  FieldSpec f = make_prime_field(2);
  HashSpec spec{3, 1};
  std::vector<Symbol> s{1, 0};
  for (std::uint64_t x = 0; x < 8; ++x) {
    auto v = bits_of(x, 3);
    EXPECT_EQ(hash_apply(f, spec, s, v), hash_by_matrix(f, spec, s, v));
    EXPECT_EQ(hash_apply(f, spec, s, v)[0], v[0] ^ v[2]);
    EXPECT_EQ(hash_apply(f, spec, std::vector<Symbol>{0, 0}, v)[0], v[0]);
  }
  std::vector<Symbol> headonly{1, 0, 0};
  EXPECT_EQ(hash_apply(f, spec, std::vector<Symbol>{1, 1}, headonly), (std::vector<Symbol>{1}));
  EXPECT_THROW(hash_apply(f, spec, s, std::vector<Symbol>{1, 0}), HashError);
  EXPECT_THROW(hash_apply(f, spec, std::vector<Symbol>{1}, headonly), HashError);
}

TEST(PrivacyAmp, HashMatchesMatrixOverGF9) {
  FieldSpec f = make_extension_field(make_prime_field(3), 2);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    HashSpec spec{6, 1 + rng() % 5};
    std::vector<Symbol> s(5), x(6), y(6), sum(6);
    for (auto& v : s) v = rng() % 9;
    for (auto& v : x) v = rng() % 9;
    for (auto& v : y) v = rng() % 9;
    for (int k = 0; k < 6; ++k) sum[k] = f.add(x[k], y[k]);
    EXPECT_EQ(hash_apply(f, spec, s, x), hash_by_matrix(f, spec, s, x));
    auto hx = hash_apply(f, spec, s, x), hy = hash_apply(f, spec, s, y), hs = hash_apply(f, spec, s, sum);
    for (std::size_t a = 0; a < spec.kbar; ++a) EXPECT_EQ(hs[a], f.add(hx[a], hy[a]));
  }
}

TEST(PrivacyAmp, Universal2Examples) {
  FieldSpec f2 = make_prime_field(2);
  auto r = universal2_check(f2, {2, 1});
  EXPECT_EQ(r.seeds, 2u);
  EXPECT_EQ(r.inputs, 3u);
  EXPECT_DOUBLE_EQ(r.max_probability(), 0.5);
  auto r3 = universal2_check(f2, {3, 1});
  EXPECT_EQ(r3.inputs, 7u);
  EXPECT_TRUE(r3.holds(2, 1));
  EXPECT_TRUE(universal2_check(make_prime_field(3), {4, 2}).holds(3, 2));
}

TEST(PrivacyAmp, Universal2FastPathAgreesWithDirectCount) {
  FieldSpec f2 = make_prime_field(2);
  for (std::size_t k = 2; k <= 7; ++k) {
    for (std::size_t kbar = 1; kbar < k; ++kbar) {
      HashSpec spec{k, kbar};
      std::uint64_t worst = 0;
      for (std::uint64_t z = 1; z < (1u << k); ++z) {
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < (1u << (k - 1)); ++s) {
          auto h = hash_by_matrix(f2, spec, bits_of(s, k - 1), bits_of(z, k));
          bool zero = true;
          for (auto v : h) zero &= v == 0;
          hits += zero;
        }
        worst = std::max(worst, hits);
      }
      EXPECT_EQ(universal2_check(f2, spec).worst_collisions, worst) << k << " " << kbar;
    }
  }
}

TEST(PrivacyAmp, ZeroTailNeverCollides) {
  FieldSpec f2 = make_prime_field(2);
  HashSpec spec{5, 2};
  for (std::uint64_t head = 1; head < 4; ++head) {
    auto z = bits_of(head, 5);
    for (std::uint64_t s = 0; s < 16; ++s) EXPECT_NE(hash_apply(f2, spec, bits_of(s, 4), z), (std::vector<Symbol>{0, 0}));
  }
}

TEST(PrivacyAmp, ScrambleInvertsHashExhaustively) {
  // f_S(f_S^{-1}(Mbar, L)) = Mbar for every seed and every (Mbar, L), k = 12.
  FieldSpec f2 = make_prime_field(2);
  HashSpec spec{12, 4};
  for (std::uint64_t s = 0; s < (1u << 11); ++s) {
    auto seed = bits_of(s, 11);
    for (std::uint64_t v = 0; v < (1u << 12); ++v) {
      auto all = bits_of(v, 12);
      std::span<const Symbol> mbar(all.data(), 4), l(all.data() + 4, 8);
      auto w = hash_preimage(f2, spec, seed, mbar, l);
      ASSERT_TRUE(std::equal(w.begin() + 4, w.end(), l.begin()));
      auto h = hash_apply(f2, spec, seed, w);
      ASSERT_TRUE(std::equal(h.begin(), h.end(), mbar.begin()));
    }
  }
}

TEST(PrivacyAmp, MakeHashSpec) {
  auto s = make_hash_spec(24, 16, 1);
  EXPECT_EQ(s.kbar, 4u);
  EXPECT_EQ(s.d(), 20u);
  EXPECT_THROW(make_hash_spec(20, 16, 1), HashError);
  EXPECT_EQ(ceil_sqrt(16), 4u);
  EXPECT_EQ(ceil_sqrt(17), 5u);
  EXPECT_EQ(ceil_sqrt(1), 1u);
}

TEST(PrivacyAmp, SystematicSecureCodeIdentityChannel) {
  FieldSpec f2 = make_prime_field(2);
  auto inner = std::make_shared<SystematicCode>(f2, 2, 2);
  SecureCode code(inner, {4, 2}, {1, 0, 1});
  for (std::uint64_t v = 0; v < 16; ++v) {
    auto all = bits_of(v, 4);
    std::span<const Symbol> mbar(all.data(), 2), l(all.data() + 2, 2);
    auto block = code.encode(mbar, l);
    auto out = code.decode(block.input, block.side);
    ASSERT_TRUE(out);
    EXPECT_TRUE(std::equal(out->begin(), out->end(), mbar.begin()));
  }
  // S = 0 and L = 0 leave the message in place.
  SecureCode plain(inner, {4, 2}, {0, 0, 0});
  std::vector<Symbol> m{1, 1}, l{1, 0}, zero{0, 0};
  EXPECT_EQ(plain.scramble(m, l), (std::vector<Symbol>{1, 1, 1, 0}));
  EXPECT_EQ(code.scramble(m, zero), (std::vector<Symbol>{1, 1, 0, 0}));
}

TEST(PrivacyAmp, SystematicDecodeInvertsKB) {
  FieldSpec f3 = make_prime_field(3);
  FqMatrix kb = FqMatrix::parse(f3, "1 1; 0 1; 2 0");
  SystematicCode code(f3, 2, 3, kb);
  std::vector<Symbol> w{1, 2, 0, 0, 1, 2};
  auto block = code.encode(w);
  EXPECT_EQ(code.decode(kb * block.input, std::nullopt), w);
  EXPECT_THROW(SystematicCode(f3, 2, 3, FqMatrix::parse(f3, "1 1; 1 1")), CodeError);
}

TEST(PrivacyAmp, SecureDecodeComposition) {
  FieldSpec f2 = make_prime_field(2);
  auto inner = std::make_shared<SystematicCode>(f2, 1, 4);
  SecureCode code(inner, {4, 2}, {1, 1, 0});
  FqMatrix wrong = FqMatrix::parse(f2, "1 0 1 1");
  EXPECT_EQ(code.decode(wrong, std::nullopt), hash_apply(f2, code.spec, code.seed, wrong.entries()));
  auto strict = std::make_shared<SystematicCode>(f2, 1, 4, FqMatrix::parse(f2, "1; 1"));
  SecureCode failing(strict, {4, 2}, {1, 1, 0});
  EXPECT_FALSE(failing.decode(FqMatrix::parse(f2, "1 0 1 1; 0 0 0 0"), std::nullopt).has_value());
}

TEST(PrivacyAmp, RobustInnerCodeRoundTrip) {
  FieldSpec f2 = make_prime_field(2);
  std::mt19937_64 rng(3);
  RobustInnerCode code(f2, 2, 2, 1, 2, 2, rng);
  EXPECT_EQ(code.block().t, 3u);
  EXPECT_EQ(code.block_length(), 6u);
  EXPECT_EQ(code.message_length(), 6u);
  for (int i = 0; i < 50; ++i) {
    std::vector<Symbol> w(6);
    for (auto& v : w) v = rng() % 2;
    auto block = code.encode(w);
    EXPECT_EQ(block.input.field(), f2);
    auto out = code.decode(block.input, block.side);
    if (out) {
      EXPECT_EQ(*out, w);
    }
  }
  EXPECT_THROW(code.decode(FqMatrix(f2, 2, 6), std::nullopt), CodeError);
}

TEST(PrivacyAmp, LeakageBound) {
  auto b = leakage_bound(1.0, 4, 24, 16, 1, 2);
  EXPECT_DOUBLE_EQ(b.value, 1.0 / 16);
  EXPECT_DOUBLE_EQ(b.form1, b.form2);
  auto half = leakage_bound(0.5, 4, 24, 16, 1, 2);
  auto tiny = leakage_bound(0.01, 4, 24, 16, 1, 2);
  EXPECT_GT(tiny.value, half.value);
  EXPECT_GT(leakage_bound(1e-6, 4, 24, 16, 1, 2).value, 1e5);
  EXPECT_THROW(leakage_bound(0, 4, 24, 16, 1, 2), HashError);
  EXPECT_THROW(leakage_bound(1.5, 4, 24, 16, 1, 2), HashError);
  EXPECT_THROW(leakage_bound(1, 5, 24, 16, 1, 2), HashError);
  EXPECT_DOUBLE_EQ(high_probability_bound(16, 1, 1, 2), 1.0 / 4);
}

TEST(PrivacyAmp, Rates) {
  auto r = rates(4, 1, 1);
  EXPECT_EQ(r.robust_secure, 2u);
  EXPECT_EQ(r.secrecy_only, 3u);
  auto z = rates(4, 2, 2);
  EXPECT_EQ(z.robust_secure, 0u);
  EXPECT_FALSE(z.robust_achievable);
  EXPECT_EQ(z.secrecy_only, 2u);
  auto clean = rates(3, 0, 0);
  EXPECT_EQ(clean.robust_secure, 3u);
  EXPECT_EQ(clean.secrecy_only, 3u);
  EXPECT_FALSE(rates(2, 0, 2).secrecy_achievable);
}

TEST(PrivacyAmp, TagsDetectTampering) {
  std::vector<std::uint8_t> msg{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0};
  std::vector<std::uint8_t> seed(11, 0);
  seed[3] = 1;
  Tag t = make_tag(msg, seed, 4);
  EXPECT_TRUE(check_tag(msg, t));
  auto rep = tamper_sweep(msg, 4);
  EXPECT_EQ(rep.tamperings, 45u);
  EXPECT_LE(rep.worst_accepted * 16, rep.seeds);
  // b = m2 bits give significance level 1 - 2^-m2.
  for (std::size_t m2 = 1; m2 <= 3; ++m2) {
    std::vector<std::uint8_t> m(6, 1);
    auto r = tamper_sweep(m, m2);
    EXPECT_LE(r.worst_fraction(), std::pow(2.0, -static_cast<double>(m2)));
  }
}

TEST(PrivacyAmp, TagWireRoundTrip) {
  std::vector<std::uint8_t> msg{1, 0, 1, 1, 0, 0, 1, 0, 1};
  Tag t = make_tag(msg, {1, 1, 0, 1, 0, 0, 0, 1}, 3);
  auto bytes = encode_tag(t);
  EXPECT_EQ(bytes.size(), 1u + 4u + 1u + 1u);
  EXPECT_EQ(bytes[5], 0xD1);
  Tag back = decode_tag(bytes);
  EXPECT_EQ(back.b, t.b);
  EXPECT_EQ(back.seed, t.seed);
  EXPECT_EQ(back.bits, t.bits);
  bytes.pop_back();
  EXPECT_THROW(decode_tag(bytes), HashError);
}
