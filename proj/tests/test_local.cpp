#include <gtest/gtest.h>

#include <random>

#include "vmz/error.hpp"
#include "vmz/local.hpp"

using namespace vmz;

namespace {

RatK R(const FqContext& ctx, const char* s) { return RatK::parse(ctx, s); }

RatK random_ratk(const FqContext& ctx, std::mt19937& rng) {
  std::uniform_int_distribution<Code> coef(0, ctx.q() - 1);
  std::uniform_int_distribution<int> deg(0, 4);
  auto poly = [&] {
    std::vector<Code> c(deg(rng) + 1);
    for (auto& x : c) x = coef(rng);
    return PolyA(ctx, c);
  };
  PolyA n = poly(), d = poly();
  while (d.is_zero()) d = poly();
  return RatK(n, d);
}

}  // namespace

TEST(Place, RejectsHigherDegree) {
  const auto& f3 = FqContext::get(3);
  EXPECT_THROW(Place::from_uniformizer(PolyA::parse(f3, "T^2+1")), DomainError);
  EXPECT_EQ(Place::from_uniformizer(PolyA::parse(f3, "T+2")).lambda(), 2u);
}

TEST(Embed, Examples) {
  const auto& f3 = FqContext::get(3);
  const Place v = Place::finite(f3, 0);
  LocalNum t = embed(RatK::theta(f3), v, 1);
  EXPECT_EQ(t.nu(), 1);
  EXPECT_EQ(t.digits(), std::vector<Code>{1});
  EXPECT_EQ(embed(R(f3, "1/(1-T)"), v, 3).to_string(), "1 + v^1 + v^2 + O(v^3)");
  const auto& f2 = FqContext::get(2);
  LocalNum t2 = embed(RatK::theta(f2), Place::finite(f2, 1), 2);
  EXPECT_EQ(t2.nu(), 0);
  EXPECT_EQ(t2.to_string(), "1 + v^1 + O(v^2)");
}

TEST(LocalArith, Examples) {
  const auto& f3 = FqContext::get(3);
  const Place v = Place::finite(f3, 0);
  LocalNum x = LocalNum::parse(v, "v^1 + O(v^5)");
  EXPECT_EQ((x * x).to_string(), "v^2 + O(v^6)");
  LocalNum y = LocalNum::parse(v, "1 + v^1 + O(v^3)");
  EXPECT_EQ(y.inv().to_string(), "1 + 2*v^1 + v^2 + O(v^3)");
  LocalNum a = embed(R(f3, "T+1"), v, 20);
  EXPECT_TRUE(agree_to(a.qpow(), embed(R(f3, "(T+1)^3"), v, 20), 20));
  EXPECT_TRUE(agree_to(a.qpow(), a * a * a, 20));
  EXPECT_THROW(LocalNum::exact_zero(v).inv(), DivisionByZero);
  EXPECT_THROW(LocalNum::zero_to(v, 4).inv(), PrecisionLoss);
}

TEST(Valuation, Examples) {
  const auto& f3 = FqContext::get(3);
  const Place v = Place::finite(f3, 0);
  EXPECT_EQ(embed(R(f3, "T^3-T"), v, 5).valuation().value, 1);
  EXPECT_TRUE(embed(R(f3, "T^3-T"), v, 5).valuation().exact);
  EXPECT_EQ(embed(R(f3, "1"), v, 5).valuation().value, 0);
  Valuation z = LocalNum::zero_to(v, 7).valuation();
  EXPECT_FALSE(z.exact);
  EXPECT_EQ(z.to_string(), ">= 7");
  EXPECT_EQ(v.ord(R(f3, "T^3-T")), 1);
  EXPECT_EQ(Place::infinite(f3).ord(R(f3, "1/(T^3-T)")), 3);
}

TEST(LocalArith, RingMorphismAndValuations) {
  std::mt19937 rng(17);
  for (std::uint64_t q : {2, 3, 4}) {
    const auto& ctx = FqContext::for_q(q);
    std::vector<Place> places{Place::finite(ctx, 0), Place::finite(ctx, 1), Place::infinite(ctx)};
    for (const auto& pl : places) {
      for (int it = 0; it < 30; ++it) {
        RatK r = random_ratk(ctx, rng), s = random_ratk(ctx, rng);
        if (r.is_zero() || s.is_zero()) continue;
        const std::int64_t n = 25;
        LocalNum er = embed_abs(r, pl, n), es = embed_abs(s, pl, n);
        const std::int64_t common = std::min(er.nu() + es.abs_precision(), es.nu() + er.abs_precision());
        EXPECT_TRUE(agree_to(embed_abs(r * s, pl, common), er * es, common));
        EXPECT_TRUE(agree_to(embed_abs(r + s, pl, n), er + es, n));
        EXPECT_EQ((er * es).valuation().value, er.valuation().value + es.valuation().value);
        EXPECT_EQ(er.valuation().value, pl.ord(r));
        const LocalNum sum = er + es;
        if (!sum.is_zero_to_precision()) {
          EXPECT_GE(sum.nu(), std::min(er.nu(), es.nu()));
          if (er.nu() != es.nu()) EXPECT_EQ(sum.nu(), std::min(er.nu(), es.nu()));
        }
        EXPECT_TRUE(agree_to(er / es * es, er, er.nu() + std::min(er.window(), es.window())));
      }
    }
  }
}

TEST(LocalArith, FrobeniusMatchesMultiplication) {
  std::mt19937 rng(23);
  for (std::uint64_t q : {2, 3, 4}) {
    const auto& ctx = FqContext::for_q(q);
    const Place v = Place::finite(ctx, 1);
    for (int it = 0; it < 20; ++it) {
      RatK r = random_ratk(ctx, rng);
      if (r.is_zero()) continue;
      LocalNum x = embed(r, v, 12);
      LocalNum byfrob = x.frobenius(2);
      LocalNum bymul = x.pow(q * q);
      EXPECT_TRUE(agree_to(byfrob, bymul, bymul.abs_precision()));
      EXPECT_GE(byfrob.abs_precision(), bymul.abs_precision());
      EXPECT_TRUE(agree_to(byfrob, embed(r.frobenius(2), v, 40), std::min<std::int64_t>(byfrob.abs_precision(), 40 + v.ord(r) * static_cast<std::int64_t>(q * q))));
    }
  }
}

TEST(LocalText, RoundTrip) {
  std::mt19937 rng(29);
  for (std::uint64_t q : {3, 4, 9}) {
    const auto& ctx = FqContext::for_q(q);
    for (const auto& pl : {Place::finite(ctx, 0), Place::infinite(ctx)}) {
      for (int it = 0; it < 20; ++it) {
        RatK r = random_ratk(ctx, rng);
        LocalNum x = embed(r, pl, 10);
        LocalNum y = LocalNum::parse(pl, x.to_string());
        EXPECT_EQ(y.to_string(), x.to_string());
        EXPECT_TRUE(agree_to(x, y, x.abs_precision()));
      }
    }
  }
  const auto& f3 = FqContext::get(3);
  EXPECT_EQ(LocalNum::parse(Place::infinite(f3), "w^-2 + 2*w^1 + O(w^4)").to_string(),
            "w^-2 + 2*w^1 + O(w^4)");
  EXPECT_EQ(LocalNum::parse(Place::finite(f3, 0), "O(v^40)").to_string(), "O(v^40)");
  EXPECT_THROW(LocalNum::parse(Place::finite(f3, 0), "v^2"), ParseError);
}

TEST(LocalArith, PrecisionSemantics) {
  const auto& f3 = FqContext::get(3);
  const Place v = Place::finite(f3, 0);
  LocalNum a = LocalNum::parse(v, "1 + v^1 + O(v^3)");
  LocalNum b = LocalNum::parse(v, "2 + O(v^5)");
  LocalNum s = a + b;
  EXPECT_EQ(s.to_string(), "v^1 + O(v^3)");
  EXPECT_EQ(s.valuation().value, 1);
  LocalNum z = LocalNum::zero_to(v, 4);
  EXPECT_EQ((z * a).to_string(), "O(v^4)");
  EXPECT_EQ((z + a).abs_precision(), 3);
  EXPECT_TRUE((LocalNum::exact_zero(v) * a).is_exact_zero());
  EXPECT_THROW(a.digit(3), PrecisionLoss);
}
