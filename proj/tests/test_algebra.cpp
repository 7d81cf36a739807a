#include <gtest/gtest.h>

#include <random>
#include <set>

#include "vmz/error.hpp"
#include "vmz/ratk.hpp"

using namespace vmz;

namespace {

PolyA P(const FqContext& ctx, const char* s) { return PolyA::parse(ctx, s); }

PolyA random_poly(const FqContext& ctx, std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<Code> coef(0, ctx.q() - 1);
  std::vector<Code> c(deg(rng) + 1);
  for (auto& x : c) x = coef(rng);
  return PolyA(ctx, c);
}

}  // namespace

TEST(FqArith, PrimeFieldExamples) {
  const auto& f3 = FqContext::get(3);
  EXPECT_EQ((f3.elem(2) + f3.elem(2)).code(), 1u);
  EXPECT_EQ(f3.elem(2).inv().code(), 2u);
  EXPECT_THROW(f3.zero().inv(), DivisionByZero);
}

TEST(FqArith, ExtensionFieldExample) {
  const auto& f4 = FqContext::get(2, 2);
  EXPECT_EQ(f4.modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
  const FqElem x = f4.elem(f4.generator());
  EXPECT_EQ((x * x).to_string(), "x+1");
  EXPECT_EQ(f4.parse("x+1"), (x * x).code());
}

TEST(FqArith, FieldAxiomsAndFrobenius) {
  for (std::uint64_t q : {2, 3, 4, 5, 8, 9}) {
    const auto& ctx = FqContext::for_q(q);
    for (Code a = 0; a < ctx.q(); ++a) {
      EXPECT_EQ(ctx.pow(a, ctx.q()), a) << "q=" << q;
      if (a != 0) EXPECT_EQ(ctx.mul(a, ctx.inv(a)), 1u);
      for (Code b = 0; b < ctx.q(); ++b) {
        EXPECT_EQ(ctx.mul(a, b), ctx.mul(b, a));
        EXPECT_EQ(ctx.sub(ctx.add(a, b), b), a);
      }
    }
  }
}

TEST(FqArith, ParseFormatRoundTrip) {
  const auto& f9 = FqContext::for_q(9);
  for (Code a = 0; a < 9; ++a) EXPECT_EQ(f9.parse(f9.format(a)), a);
}

TEST(PolyArith, Examples) {
  const auto& f3 = FqContext::get(3);
  EXPECT_EQ((P(f3, "T+1") * P(f3, "T+2")).to_string(), "T^2+2");
  const auto& f2 = FqContext::get(2);
  auto [qt, r] = divmod(P(f2, "T^3+T"), P(f2, "T+1"));
  EXPECT_EQ(qt.to_string(), "T^2+T");
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(gcd(P(f3, "2*T+1"), PolyA(f3)).to_string(), "T+2");
  EXPECT_THROW(divmod(P(f3, "T"), PolyA(f3)), DivisionByZero);
}

TEST(PolyArith, DivmodAndGcdProperties) {
  std::mt19937 rng(7);
  for (std::uint64_t q : {2, 3, 4}) {
    const auto& ctx = FqContext::for_q(q);
    for (int it = 0; it < 50; ++it) {
      PolyA f = random_poly(ctx, rng, 8), g = random_poly(ctx, rng, 5);
      if (g.is_zero()) continue;
      auto [qt, r] = divmod(f, g);
      EXPECT_EQ(qt * g + r, f);
      EXPECT_LT(r.degree(), g.degree());
      const PolyA h = random_poly(ctx, rng, 3);
      if (h.is_zero()) continue;
      const PolyA d = gcd(f * h, g * h);
      EXPECT_TRUE(d.is_monic());
      EXPECT_TRUE(divmod(f * h, d).second.is_zero());
      EXPECT_TRUE(divmod(g * h, d).second.is_zero());
    }
  }
}

TEST(PolyArith, FrobeniusAdditive) {
  std::mt19937 rng(11);
  for (std::uint64_t q : {2, 3, 9}) {
    const auto& ctx = FqContext::for_q(q);
    for (int it = 0; it < 20; ++it) {
      PolyA a = random_poly(ctx, rng, 4), b = random_poly(ctx, rng, 4);
      EXPECT_EQ((a + b).pow(q), a.pow(q) + b.pow(q));
      EXPECT_EQ(a.pow(q), a.frobenius(1));
    }
  }
}

TEST(MonicEnumerate, Examples) {
  const auto& f2 = FqContext::get(2);
  auto l = monic_enumerate(f2, 1);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0].to_string(), "T");
  EXPECT_EQ(l[1].to_string(), "T+1");
  const auto& f3 = FqContext::get(3);
  ASSERT_EQ(monic_enumerate(f3, 0).size(), 1u);
  EXPECT_TRUE(monic_enumerate(f3, 0)[0].is_one());
  auto l2 = monic_enumerate(f3, 2);
  EXPECT_EQ(l2.size(), 9u);
  std::set<std::string> seen;
  for (const auto& f : l2) {
    EXPECT_TRUE(f.is_monic());
    EXPECT_EQ(f.degree(), 2);
    seen.insert(f.to_string());
  }
  EXPECT_EQ(seen.size(), 9u);
}

TEST(Irreducible, Examples) {
  const auto& f3 = FqContext::get(3);
  const auto& f2 = FqContext::get(2);
  EXPECT_TRUE(irreducible_test(P(f3, "T^2+1")));
  EXPECT_FALSE(irreducible_test(P(f2, "T^2+1")));
  EXPECT_TRUE(irreducible_test(P(f2, "T")));
  EXPECT_TRUE(irreducible_test(P(f3, "T")));
}

TEST(Irreducible, AgreesWithTrialDivision) {
  for (std::uint64_t q : {2, 3, 4}) {
    const auto& ctx = FqContext::for_q(q);
    for (int d = 1; d <= 4; ++d) {
      for (const auto& f : monic_enumerate(ctx, d)) {
        bool reducible = false;
        for (int e = 1; e <= d / 2 && !reducible; ++e) {
          for (const auto& g : monic_enumerate(ctx, e)) {
            if (divmod(f, g).second.is_zero()) {
              reducible = true;
              break;
            }
          }
        }
        EXPECT_EQ(irreducible_test(f), !reducible) << f.to_string();
      }
    }
  }
}

TEST(RatK, NormalizationAndText) {
  const auto& f3 = FqContext::get(3);
  RatK r = RatK::parse(f3, "(T^3+T)/(T+1)");
  EXPECT_EQ(r.to_string(), "(T^3+T)/(T+1)");
  EXPECT_TRUE(r.den().is_monic());
  RatK s = RatK::parse(f3, "(T^2-1)/(2*T+2)");
  EXPECT_EQ(s.to_string(), "2*T+1");
  EXPECT_EQ(RatK::parse(f3, "1/(2*T)").to_string(), "2/T");
  EXPECT_EQ(RatK::parse(f3, "T^2+2").to_string(), "T^2+2");
  EXPECT_THROW(RatK::parse(f3, "1/0"), ParseError);
  EXPECT_THROW(RatK::parse(f3, "T+"), ParseError);
}

TEST(RatK, RoundTripRandom) {
  std::mt19937 rng(3);
  for (std::uint64_t q : {2, 3, 4, 9}) {
    const auto& ctx = FqContext::for_q(q);
    for (int it = 0; it < 40; ++it) {
      PolyA n = random_poly(ctx, rng, 5), d = random_poly(ctx, rng, 4);
      if (d.is_zero()) continue;
      RatK r(n, d);
      EXPECT_EQ(RatK::parse(ctx, r.to_string()), r) << r.to_string();
      EXPECT_EQ(PolyA::parse(ctx, n.to_string()), n);
    }
  }
}

TEST(Carlitz, Examples) {
  const auto& f3 = FqContext::get(3);
  RatK z = RatK::parse(f3, "(T+1)/(T^2+2)");
  EXPECT_EQ(carlitz_action(PolyA::one(f3), z), z);
  const RatK th = RatK::theta(f3);
  EXPECT_EQ(carlitz_action(PolyA::theta(f3), z), th * z + z.pow(3));
  const RatK expect = th.pow(2) * z + (th.pow(3) + th) * z.pow(3) + z.pow(9);
  EXPECT_EQ(carlitz_action(P(f3, "T^2"), z), expect);
}

TEST(Carlitz, ModuleProperties) {
  std::mt19937 rng(5);
  for (std::uint64_t q : {2, 3}) {
    const auto& ctx = FqContext::for_q(q);
    for (int it = 0; it < 15; ++it) {
      PolyA a = random_poly(ctx, rng, 2), b = random_poly(ctx, rng, 2);
      RatK z(random_poly(ctx, rng, 2), PolyA::parse(ctx, "T+1"));
      RatK w(random_poly(ctx, rng, 2));
      EXPECT_EQ(carlitz_action(a + b, z), carlitz_action(a, z) + carlitz_action(b, z));
      EXPECT_EQ(carlitz_action(a * b, z), carlitz_action(a, carlitz_action(b, z)));
      EXPECT_EQ(carlitz_action(a, z + w), carlitz_action(a, z) + carlitz_action(a, w));
    }
  }
}
