#include <gtest/gtest.h>

#include <random>

#include "vmz/error.hpp"
#include "vmz/linalg.hpp"
#include "vmz/tmodule.hpp"

using namespace vmz;

namespace {

const FqContext& F3() { return FqContext::get(3); }
RatK R(const char* s, const FqContext& ctx = F3()) { return RatK::parse(ctx, s); }
PolyA P(const char* s, const FqContext& ctx = F3()) { return PolyA::parse(ctx, s); }

PolyA random_poly(const FqContext& ctx, std::mt19937& rng, int deg) {
  std::vector<Code> c(deg + 1);
  for (auto& x : c) x = rng() % ctx.q();
  return PolyA(ctx, c);
}

}  // namespace

TEST(Linalg, DeterminantInverseKernel) {
  Matrix<RatK> m(2, 2, std::vector<RatK>{R("T"), R("1"), R("1"), R("T")});
  EXPECT_EQ(determinant(m), R("T^2-1"));
  auto inv = inverse(m);
  ASSERT_TRUE(inv);
  EXPECT_EQ(m * *inv, (Matrix<RatK>::identity(2, R("0"), R("1"))));
  Matrix<RatK> sing(2, 2, std::vector<RatK>{R("T"), R("T^2"), R("1"), R("T")});
  EXPECT_FALSE(inverse(sing));
  EXPECT_TRUE(determinant(sing).is_zero());
  auto ker = kernel(sing);
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_TRUE((R("T") * ker[0][0] + R("T^2") * ker[0][1]).is_zero());
}

TEST(Linalg, FqMinpoly) {
  const auto& ctx = F3();
  EXPECT_EQ(fq_minpoly(ctx, Matrix<Code>(2, 2, std::vector<Code>{0, 1, 1, 0})), (std::vector<Code>{2, 0, 1}));
  EXPECT_EQ(fq_minpoly(ctx, Matrix<Code>(2, 2, std::vector<Code>{1, 0, 0, 1})), (std::vector<Code>{2, 1}));
  EXPECT_EQ(fq_minpoly(ctx, Matrix<Code>(2, 2, std::vector<Code>{0, 1, 0, 0})), (std::vector<Code>{0, 0, 1}));
  EXPECT_EQ(fq_rank(ctx, {{1, 2}, {2, 1}}, 2), 1u);
}

TEST(TModule, CarlitzAction) {
  const auto spec = tensor_carlitz_spec(F3(), 1);
  const RatK z = R("(1+T)/T^2");
  EXPECT_EQ(tm_action(spec, P("T"), {z})[0], R("T") * z + z.pow(3));
  EXPECT_EQ(tm_action(spec, P("1"), {z})[0], z);
  for (const char* a : {"T^2+2", "T^3+T", "2*T^2+T+1"}) {
    EXPECT_EQ(tm_action(spec, P(a), {z})[0], carlitz_action(P(a), z)) << a;
  }
}

TEST(TModule, RingAction) {
  std::mt19937 rng(7);
  for (int s = 1; s <= 3; ++s) {
    const auto spec = tensor_carlitz_spec(F3(), s);
    std::vector<RatK> z;
    for (int i = 0; i < s; ++i) z.push_back(RatK(random_poly(F3(), rng, 2)));
    for (int trial = 0; trial < 3; ++trial) {
      const PolyA a = random_poly(F3(), rng, 2), b = random_poly(F3(), rng, 2);
      const auto fa = tm_action(spec, a, z), fb = tm_action(spec, b, z);
      const auto fab = tm_action(spec, a * b, z), fa_b = tm_action(spec, a, fb);
      const auto fsum = tm_action(spec, a + b, z);
      for (int i = 0; i < s; ++i) {
        EXPECT_EQ(fab[i], fa_b[i]);
        EXPECT_EQ(fsum[i], fa[i] + fb[i]);
      }
    }
  }
}

TEST(TModule, LocalActionMatchesExact) {
  const Place v = Place::finite(F3(), 1);
  const auto spec = tensor_carlitz_spec(F3(), 2);
  const std::vector<RatK> z{R("T+1"), R("1/(T+2)")};
  const auto exact = tm_action(spec, P("T^2+T"), z);
  const auto local = tm_action(spec, P("T^2+T"), {embed_abs(z[0], v, 30), embed_abs(z[1], v, 30)});
  for (int i = 0; i < 2; ++i) EXPECT_TRUE(agree_to(local[i], embed_abs(exact[i], v, 30), 30));
}

TEST(TModule, CarlitzLogCoefficients) {
  const auto c = explog_coeffs(tensor_carlitz_spec(F3(), 1), 4);
  const auto id = Matrix<RatK>::identity(1, R("0"), R("1"));
  EXPECT_EQ(c.P[0], id);
  EXPECT_EQ(c.Q[0], id);
  EXPECT_EQ(c.P[1](0, 0), R("1/(T-T^3)"));
  for (int i = 0; i <= 4; ++i) EXPECT_EQ(c.P[i](0, 0), RatK(L_factorial(F3(), i)).inv()) << i;
  // exp coefficients 1/D_i with D_1 = T^3 - T.
  EXPECT_EQ(c.Q[1](0, 0), R("1/(T^3-T)"));
}

TEST(TModule, ExpLogInverse) {
  for (std::uint64_t q : {2, 3}) {
    const auto& ctx = FqContext::for_q(q);
    for (int s = 1; s <= 3; ++s) {
      const auto c = explog_coeffs(tensor_carlitz_spec(ctx, s), 4);
      EXPECT_TRUE(exp_log_identity_holds(c, ctx)) << q << " " << s;
    }
  }
  // Same check on a module with a nontrivial N0 and a non-corner B1.
  TModuleSpec spec = tensor_carlitz_spec(F3(), 2);
  spec.B1(0, 0) = R("T");
  spec.B1(1, 1) = R("1+T");
  EXPECT_TRUE(exp_log_identity_holds(explog_coeffs(spec, 4), F3()));
}

TEST(TModule, TensorLogLastColumnIsPolylogCoefficient) {
  for (int s = 1; s <= 3; ++s) {
    const auto c = explog_coeffs(tensor_carlitz_spec(F3(), s), 3);
    for (int i = 0; i <= 3; ++i) {
      EXPECT_EQ(c.P[i](s - 1, s - 1), RatK(L_factorial(F3(), i)).pow(-s)) << s << " " << i;
    }
  }
}

TEST(TModule, ResidueAnnihilatorExamples) {
  const Place v0 = Place::finite(F3(), 0);
  auto c1 = residue_annihilator(tensor_carlitz_spec(F3(), 1), v0);
  EXPECT_EQ(c1.a, P("T-1"));
  EXPECT_FALSE(c1.divisible_by_uniformizer);
  const auto& F2 = FqContext::get(2);
  auto c2 = residue_annihilator(tensor_carlitz_spec(F2, 1), Place::finite(F2, 1));
  EXPECT_EQ(c2.a, P("T", F2));
  auto c3 = residue_annihilator(tensor_carlitz_spec(F3(), 2), v0);
  EXPECT_EQ(c3.a, P("T^2-1"));
  EXPECT_EQ(c3.residue_matrix, (Matrix<Code>(2, 2, std::vector<Code>{0, 1, 1, 0})));
}

TEST(TModule, AnnihilatorSendsIntegralPointsToDisk) {
  for (std::uint64_t q : {2, 3}) {
    const auto& ctx = FqContext::for_q(q);
    for (Code lam = 0; lam < 2; ++lam) {
      const Place v = Place::finite(ctx, lam);
      for (int s = 1; s <= 3; ++s) {
        const auto spec = tensor_carlitz_spec(ctx, s);
        const auto ann = residue_annihilator(spec, v);
        std::vector<RatK> z(s, RatK(ctx));
        z[s - 1] = RatK::one(ctx);
        z[0] = z[0] + RatK::theta(ctx);
        for (const auto& w : tm_action(spec, ann.a, z)) {
          if (!w.is_zero()) EXPECT_GE(v.ord(w), 1) << q << " " << lam << " " << s;
        }
      }
    }
  }
}

TEST(TModule, LogFunctionalEquationDepthOne) {
  const Place v = Place::finite(F3(), 0);
  const auto spec = tensor_carlitz_spec(F3(), 1);
  const std::vector<RatK> z{R("T+T^2")};
  const auto lhs = log_eval(spec, tm_action(spec, P("T"), z), v, 40);
  const auto rhs = log_eval(spec, z, v, 40);
  EXPECT_TRUE(agree_to(lhs.value[0], embed_abs(R("T"), v, 40) * rhs.value[0], 40));
}

TEST(TModule, ValidationTensorPowers) {
  const Place v = Place::finite(F3(), 0);
  for (int s = 1; s <= 3; ++s) {
    ValidationCertificate cert;
    EXPECT_TRUE(validate_tmodule(tensor_carlitz_spec(F3(), s), v, 30, &cert)) << s << " " << cert.to_string();
  }
  auto broken = tensor_carlitz_spec(F3(), 2);
  broken.B1(1, 0) = R("0");
  EXPECT_FALSE(validate_tmodule(broken, v, 30));
  auto transposed = tensor_carlitz_spec(F3(), 2);
  transposed.B1(1, 0) = R("0");
  transposed.B1(0, 1) = R("1");
  EXPECT_FALSE(validate_tmodule(transposed, v, 30));
}

TEST(TModule, JsonRoundTrip) {
  const auto spec = tensor_carlitz_spec(F3(), 2);
  const auto back = TModuleSpec::from_json(F3(), spec.to_json());
  EXPECT_EQ(back.to_json(), spec.to_json());
  EXPECT_EQ(back.B1, spec.B1);
  EXPECT_EQ(back.N0, spec.N0);
  EXPECT_THROW(TModuleSpec::from_json(F3(), nlohmann::json::parse(R"({"dimension": 2})")), ParseError);
}

TEST(TModule, ShippedSpecFilesValidate) {
  const Place v = Place::finite(F3(), 0);
  for (int s = 1; s <= 3; ++s) {
    const auto spec = TModuleSpec::load(F3(), "data/tmodules/tensor_" + std::to_string(s) + ".json");
    EXPECT_EQ(spec.to_json(), tensor_carlitz_spec(F3(), s).to_json());
    EXPECT_TRUE(validate_tmodule(spec, v, 30));
  }
}

TEST(Extended, AgreesWithSeriesInsideConvV) {
  const Place v = Place::finite(F3(), 0);
  for (int s = 1; s <= 3; ++s) {
    const auto tm = validate_tmodule(tensor_carlitz_spec(F3(), s), v, 30);
    ASSERT_TRUE(tm);
    for (const char* u : {"T", "T^2", "T+T^2"}) {
      const ArgTuple args{R(u)};
      const auto ext = extended_cmspl_v(*tm, args, v, 30);
      EXPECT_TRUE(agree_to(ext.value, cmspl_eval(Index{s}, args, v, 30), 30)) << s << " " << u;
    }
  }
}

TEST(Extended, CarlitzZetaOne) {
  // ζ_A(1)_v = Li_1(1)_v on the extended domain; its twist by C_θ lands in
  // ConvV: Li_1(C_{θ-1}(1)) = (θ-1)·Li_1(1).
  const Place v = Place::finite(F3(), 0);
  const auto tm = validate_tmodule(tensor_carlitz_spec(F3(), 1), v, 30);
  ASSERT_TRUE(tm);
  const auto ext = extended_cmspl_v(*tm, {R("1")}, v, 40);
  EXPECT_EQ(ext.annihilator, P("T-1"));
  const RatK w = carlitz_action(P("T-1"), R("1"));
  EXPECT_TRUE(agree_to(ext.value * embed_abs(R("T-1"), v, 40), cmpl_eval(Index{1}, {w}, v, 40), 40));
  EXPECT_FALSE(ext.value.is_zero_to_precision());
}

TEST(Extended, GossVanishingDepthOneQEven) {
  const Place v = Place::finite(F3(), 0);
  const auto tm = validate_tmodule(tensor_carlitz_spec(F3(), 2), v, 30);
  ASSERT_TRUE(tm);
  const auto ext = extended_cmspl_v(*tm, {R("1")}, v, 40);
  EXPECT_TRUE(ext.value.is_zero_to_precision()) << ext.value.to_string();
  EXPECT_GE(ext.value.abs_precision(), 40);
}

TEST(Extended, AnnihilatorInvariance) {
  const Place v = Place::finite(F3(), 0);
  for (int s = 1; s <= 2; ++s) {
    const auto tm = validate_tmodule(tensor_carlitz_spec(F3(), s), v, 30);
    ASSERT_TRUE(tm);
    for (const char* u : {"1", "1+T", "T"}) {
      const auto a = extended_cmspl_v(*tm, {R(u)}, v, 30);
      const auto a2 = extended_cmspl_v(*tm, {R(u)}, v, 30, a.annihilator);
      EXPECT_TRUE(agree_to(a.value, a2.value, 30)) << s << " " << u;
    }
  }
}

TEST(Extended, RejectsDivisibleFactor) {
  const Place v = Place::finite(F3(), 0);
  const auto tm = validate_tmodule(tensor_carlitz_spec(F3(), 1), v, 30);
  ASSERT_TRUE(tm);
  EXPECT_THROW(extended_cmspl_v(*tm, {R("1")}, v, 30, P("T")), DomainError);
  EXPECT_THROW(extended_cmspl_v(*tm, {R("1/T")}, v, 30), DomainError);
}
