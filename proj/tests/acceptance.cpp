// One line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "vmz/abp_toolkit.hpp"
#include "vmz/diffsys.hpp"
#include "vmz/error.hpp"
#include "vmz/relations.hpp"
#include "vmz/tmodule.hpp"

using namespace vmz;

namespace {

const FqContext& F3() { return FqContext::get(3); }
RatK R(const char* s, const FqContext& ctx = F3()) { return RatK::parse(ctx, s); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) {
    o.pass = false;
    o.detail += " [over the " + std::to_string(static_cast<int>(limit_s)) + " s budget]";
  }
  if (!o.pass) ++failures;
  std::printf("CRITERION %2d %s (%.2f s) %s\n", n, o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
  std::fflush(stdout);
}

// Instance set shared by criteria 2 and 3.
std::vector<std::pair<Index, ArgTuple>> deformation_instances() {
  std::vector<std::pair<Index, ArgTuple>> out;
  const std::vector<const char*> firsts{"T", "T^2", "T+T^2"}, laters{"1+T", "T"};
  for (const Index& s : {Index{1}, Index{2}, Index{2, 1}, Index{1, 1, 1}}) {
    for (const char* f : firsts) {
      std::vector<ArgTuple> partial{{R(f)}};
      for (int l = 1; l < s.depth(); ++l) {
        std::vector<ArgTuple> next;
        for (const auto& p : partial) {
          for (const char* x : laters) {
            auto q = p;
            q.push_back(R(x));
            next.push_back(q);
          }
        }
        partial = next;
      }
      for (const auto& u : partial) out.emplace_back(s, u);
    }
  }
  return out;
}

std::string ord(std::int64_t n) { return n >= kInfPrec ? "inf" : std::to_string(n); }

}  // namespace

int main() {
  const Place v = Place::finite(F3(), 0);
  const RatK pi(v.uniformizer());

  criterion(1, 5, [] {
    std::int64_t worst = kInfPrec;
    for (std::uint64_t q : {2, 3}) {
      const auto& ctx = FqContext::for_q(q);
      for (Code lam : {0u, 1u}) {
        const Place pl = Place::finite(ctx, lam);
        const auto rep = verify_difference(build_omega_system(RatK(pl.uniformizer()), pl), 40, 40);
        if (!rep.verified) worst = std::min(worst, rep.residual_ord);
      }
    }
    return Outcome{worst >= kInfPrec, "Omega system, q in {2,3}, lambda in {0,1}, mod (t^40, v^40)" +
                                          (worst < kInfPrec ? ", residual_ord " + ord(worst) : std::string())};
  });

  criterion(2, 60, [&] {
    const std::int64_t D = 40, N = 40;
    const TSeries om1 = omega_product(pi, v, D, N).twist(1);
    const TSeries lin = TSeries::linear(LocalNum::one(v, N), -embed_abs(pi.pow(3), v, N), D, N);
    int count = 0, bad = 0;
    for (const auto& [s, u] : deformation_instances()) {
      const int r = s.depth();
      const TSeries L = deformation_build(s, u, v, D, N);
      const TSeries Lp = r == 1 ? TSeries::one(v, D, N)
                                : deformation_build(s.prefix(r - 1), ArgTuple(u.begin(), u.end() - 1), v, D, N);
      const int sr = s[r - 1];
      const TSeries rhs =
          (lin.pow(sr) * om1.pow(sr) * Lp.twist(1)).shift(s.weight() - sr).scale(embed_abs(u[r - 1], v, N)) +
          L.twist(1).shift(s.weight());
      const bool eq_ok = min_coeff_ord(L - rhs) >= N;
      const bool sys_ok = verify_difference(build_cmpl_system(s, u, v), D, N).verified;
      ++count;
      if (!eq_ok || !sys_ok) ++bad;
    }
    return Outcome{bad == 0, std::to_string(count) + " instances, functional equation and Phi/psi system mod (t^40, v^40), " +
                                 std::to_string(bad) + " failing"};
  });

  criterion(3, 0, [&] {
    // Literal identity, as stated. The corrected identity carries the factor v^(-N q^N wt).
    const std::int64_t n = 40;
    int lit_fail = 0, lit_fail0 = 0, cor_fail = 0, count = 0;
    std::int64_t worst_lit = kInfPrec;
    for (const auto& [s, u] : deformation_instances()) {
      const LocalNum target = pi_tilde(pi, v, n + 20).pow(static_cast<std::uint64_t>(s.weight())) * cmpl_eval(s, u, v, n + 20);
      for (int N = 0; N <= 1; ++N) {
        const LocalNum lhs = deformation_specialize(s, u, v, N, n);
        const LocalNum lit = target.frobenius(static_cast<unsigned>(N), n + 20);
        const std::int64_t e = specialization_shift(s, v, N);
        const LocalNum cor = target.frobenius(static_cast<unsigned>(N), n + 20 - e).shift(e);
        ++count;
        if (!agree_to(lhs, lit, n)) {
          ++lit_fail;
          if (N == 0) ++lit_fail0;
          worst_lit = std::min(worst_lit, diff_ord(lhs, lit));
        }
        if (!agree_to(lhs, cor, n)) ++cor_fail;
      }
    }
    std::ostringstream os;
    os << count << " (instance, N) pairs mod v^40: literal identity fails on " << lit_fail
       << " (" << lit_fail0 << " at N = 0; lowest agreement ord " << ord(worst_lit) << "); with the factor v^(-N q^N wt) "
       << (cor_fail == 0 ? "all hold" : std::to_string(cor_fail) + " fail");
    return Outcome{lit_fail == 0, os.str()};
  });

  criterion(4, 0, [&] {
    bool ok = true;
    for (int N = 1; N <= 3; ++N) ok = ok && omega_at_inverse_power(pi, v, N, 30).is_exact_zero();
    const Index s{2, 1};
    const ArgTuple u{R("T"), R("1+T")};
    int zeros = 0, total = 0;
    for (int N = 1; N <= 2; ++N) {
      for (int i1 = 1; i1 <= 4; ++i1) {
        for (int i2 = 0; i2 < i1; ++i2) {
          if (i2 >= N) continue;  // only chains with some i_l < N
          ++total;
          if (deformation_summand_at(s, u, v, {i1, i2}, N, 30).is_exact_zero()) ++zeros;
        }
      }
    }
    const bool nonzero_kept = !deformation_summand_at(s, u, v, {2, 1}, 1, 30).is_zero_to_precision();
    ok = ok && zeros == total && nonzero_kept;
    return Outcome{ok, "Omega(v^(-q^N)) exact 0 for N = 1..3; " + std::to_string(zeros) + "/" + std::to_string(total) +
                           " summands with i_l < N exact 0"};
  });

  criterion(5, 120, [&] {
    auto z2 = Decomposition::load("data/decompositions/zeta_2_q3.json");
    const std::int64_t r2 = verify_decomposition_inf(z2, 60);
    auto z1 = Decomposition::load("data/decompositions/zeta_1_q3.json");
    verify_decomposition_inf(z1, 60);
    const auto lookup = tmodule_lookup_dir(F3(), "data/tmodules", v, 30);
    const auto v2 = eval_vmzv(z2, v, 40, lookup);
    const auto v1 = eval_vmzv(z1, v, 40, lookup);
    std::ifstream gin("tests/golden/zeta_1_v_q3_l0.txt");
    std::string line, golden;
    while (std::getline(gin, line)) {
      if (line.rfind("value=", 0) == 0) golden = line.substr(6);
    }
    const bool zero2 = v2.value.is_zero_to_precision() && v2.value.abs_precision() >= 40;
    const bool odd_ok = !v1.value.is_zero_to_precision() && v1.value.to_string() == golden;
    return Outcome{zero2 && odd_ok, "zeta(2) certified at inf (residual ord " + ord(r2) + "), zeta(2)_v = " +
                                        v2.value.to_string() + ", zeta(1)_v valuation " +
                                        v1.value.valuation().to_string() + (odd_ok ? ", matches golden" : ", golden mismatch")};
  });

  criterion(6, 0, [&] {
    int agree = 0, total = 0, inv_ok = 0, inv_total = 0;
    for (int s = 1; s <= 3; ++s) {
      const auto spec = TModuleSpec::load(F3(), "data/tmodules/tensor_" + std::to_string(s) + ".json");
      const auto tm = validate_tmodule(spec, v, 30);
      if (!tm) return Outcome{false, "tensor_" + std::to_string(s) + " failed validation"};
      for (const char* u : {"T", "T^2", "T+T^2"}) {
        const ArgTuple args{R(u)};
        ++total;
        if (agree_to(extended_cmspl_v(*tm, args, v, 30).value, cmspl_eval(Index{s}, args, v, 30), 30)) ++agree;
      }
      for (const char* u : {"1", "1+T", "T"}) {
        const auto a = extended_cmspl_v(*tm, {R(u)}, v, 30);
        const auto a2 = extended_cmspl_v(*tm, {R(u)}, v, 30, a.annihilator);
        ++inv_total;
        if (agree_to(a.value, a2.value, 30)) ++inv_ok;
      }
    }
    return Outcome{agree == total && inv_ok == inv_total,
                   std::to_string(agree) + "/" + std::to_string(total) + " ConvV points agree mod v^30; a vs a^2 " +
                       std::to_string(inv_ok) + "/" + std::to_string(inv_total)};
  });

  criterion(7, 0, [&] {
    const Place inf = Place::infinite(F3());
    int ok = 0, total = 0;
    struct Case {
      Index s;
      ArgTuple u;
    };
    for (const Case& c : {Case{Index{1, 2}, {R("T"), R("1+T")}}, Case{Index{2, 2}, {R("T^2"), R("T")}},
                          Case{Index{2, 1, 1}, {R("T^2"), R("1"), R("T+T^2")}},
                          Case{Index{1, 1, 1}, {R("T"), R("T"), R("1+T")}}}) {
      LocalNum sum = LocalNum::exact_zero(v);
      for (const auto& t : star_expand(c.s)) sum += cmpl_eval(t.merged, merge_args(c.u, t.blocks), v, 30).scale(t.coeff);
      ++total;
      if (agree_to(cmspl_eval(c.s, c.u, v, 30), sum, 30)) ++ok;
    }
    struct St {
      int s, t;
      const char *u, *w;
      const Place* pl;
    };
    for (const St& c : {St{1, 2, "T", "T+T^2", &v}, St{2, 2, "T^2", "T", &v}, St{1, 2, "T", "1", &inf},
                        St{3, 1, "T^2", "1+T", &inf}}) {
      const RatK u = R(c.u), w = R(c.w);
      const LocalNum lhs = cmpl_eval(Index{c.s}, {u}, *c.pl, 30) * cmpl_eval(Index{c.t}, {w}, *c.pl, 30);
      const LocalNum rhs = cmpl_eval(Index{c.s, c.t}, {u, w}, *c.pl, 30) + cmpl_eval(Index{c.t, c.s}, {w, u}, *c.pl, 30) +
                           cmpl_eval(Index{c.s + c.t}, {u * w}, *c.pl, 30);
      ++total;
      if (agree_to(lhs, rhs, std::min<std::int64_t>(lhs.abs_precision(), 30))) ++ok;
    }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                                    " (depth 2 and 3 star recombination at v, depth-1 stuffle at v and inf)"};
  });

  criterion(8, 0, [] {
    int balls = 0, ball_ok = 0, sup_ok = 0, liou_ok = 0, small_ok = 0;
    for (std::uint64_t q : {2, 3}) {
      for (int n = 0; n <= 3; ++n) {
        const auto b = norm_ball_count(Place::finite(FqContext::for_q(q), 0), n);
        ++balls;
        if (b.count == b.formula) ++ball_ok;
      }
    }
    std::mt19937 rng(2024);
    auto rpoly = [&](const FqContext& ctx, int deg, bool nonzero) {
      for (;;) {
        std::vector<Code> c(static_cast<std::size_t>(rng() % (deg + 1)) + 1);
        for (auto& x : c) x = static_cast<Code>(rng() % ctx.q());
        PolyA p(ctx, c);
        if (!nonzero || !p.is_zero()) return p;
      }
    };
    for (int i = 0; i < 20; ++i) {
      const auto& ctx = FqContext::for_q(2 + i % 2);
      const Place pl = Place::finite(ctx, static_cast<Code>(i % ctx.q()));
      FactoredPoly f{RatK(rpoly(ctx, 3, true), rpoly(ctx, 2, true)), static_cast<int>(rng() % 3), {}};
      for (int k = 0, m = 1 + static_cast<int>(rng() % 4); k < m; ++k) {
        f.roots.push_back(RatK(rpoly(ctx, 3, true), rpoly(ctx, 2, true)));
      }
      const PolyKT e = f.expand();
      bool all = true;
      for (std::int64_t rho = -3; rho <= 3; ++rho) all = all && sup_norm_disk(e, pl, rho) == sup_norm_disk_factored(f, pl, rho);
      if (all) ++sup_ok;
    }
    for (int i = 0; i < 20; ++i) {
      const auto& ctx = FqContext::for_q(2 + i % 2);
      const Place pl = Place::finite(ctx, static_cast<Code>(i % ctx.q()));
      const RatK lam(rpoly(ctx, 3, true), rpoly(ctx, 2, true));
      const int mu = 1 + static_cast<int>(rng() % 3);
      std::vector<PolyA> f{rpoly(ctx, 2, true), rpoly(ctx, 2, false), rpoly(ctx, 1, true)};
      for (int k = 0; k < mu; ++k) {
        std::vector<PolyA> nf(f.size() + 1, PolyA(ctx));
        for (std::size_t j = 0; j < f.size(); ++j) {
          nf[j] -= f[j] * lam.num();
          nf[j + 1] += f[j] * lam.den();
        }
        f = nf;
      }
      if (liouville_check(f, lam, mu, pl).holds) ++liou_ok;
    }
    for (int i = 0; i < 10; ++i) {
      const auto& ctx = FqContext::for_q(2 + i % 2);
      const Place pl = Place::finite(ctx, static_cast<Code>(rng() % ctx.q()));
      const std::size_t r = 1 + rng() % 2, s = r + 1 + rng() % 2;
      const std::int64_t c = 1 + static_cast<std::int64_t>(rng() % 2);
      RvMatrix M(r, std::vector<RvPoly>(s));
      for (auto& row : M) {
        for (auto& e : row) {
          for (int k = 0, td = static_cast<int>(rng() % 2); k <= td; ++k) {
            std::vector<Code> cs(static_cast<std::size_t>(c));
            for (auto& x : cs) x = static_cast<Code>(rng() % ctx.q());
            e.emplace_back(ctx, cs);
          }
        }
      }
      for (int e = 0; e <= 8; ++e) {
        try {
          if (verify_small_solution(pl, M, c, small_solution(pl, M, c, e))) ++small_ok;
          break;
        } catch (const NoSolutionInBudget&) {
        }
      }
    }
    std::ostringstream os;
    os << "ball counts " << ball_ok << "/" << balls << ", sup-norm two routes " << sup_ok << "/20, Liouville "
       << liou_ok << "/20, small solutions " << small_ok << "/10";
    return Outcome{ball_ok == balls && sup_ok == 20 && liou_ok == 20 && small_ok == 10, os.str()};
  });

  criterion(9, 120, [&] {
    const auto x = cmpl_handle(Index{1}, {R("T^2+T^3")}, v, 70);
    const auto y = cmpl_handle(Index{1}, {R("T")}, v, 70);
    const auto rels = find_k_relations({x, y}, 1, 40, 60);
    bool found = false;
    std::string shown;
    for (const auto& r : rels) {
      shown = r.to_string();
      const Code lead = r.coeffs[0].coeff(0);
      if (lead == 0) continue;
      const Code inv = F3().inv(lead);
      found = found || (r.coeffs[0].scale(inv) == PolyA::one(F3()) && r.coeffs[1].scale(inv) == -PolyA::theta(F3()) &&
                        r.residual_ord >= 60);
    }
    const std::vector<ValueHandle> sample{
        cmpl_handle(Index{1}, {R("T")}, v, 60),     cmpl_handle(Index{1}, {R("T^2")}, v, 60),
        cmpl_handle(Index{2}, {R("T")}, v, 60),     cmpl_handle(Index{2}, {R("T+T^2")}, v, 60),
        cmpl_handle(Index{3}, {R("T")}, v, 60),     cmpl_handle(Index{2, 1}, {R("T"), R("1+T")}, v, 60)};
    int mixing = 0;
    const auto srels = find_k_relations(sample, 3, 40, 50);
    for (const auto& r : srels) {
      std::set<int> w;
      for (std::size_t i = 0; i < sample.size(); ++i) {
        if (!r.coeffs[i].is_zero()) w.insert(sample[i].weight);
      }
      if (w.size() > 1) ++mixing;
    }
    return Outcome{found && rels.size() == 1 && mixing == 0,
                   "recovered " + shown + " (recheck 60); 6-value sample weights 1-3: " + std::to_string(srels.size()) +
                       " relations, " + std::to_string(mixing) + " mixing weights"};
  });

  criterion(10, 0, [&] {
    const std::vector<std::pair<Index, ArgTuple>> systems{{Index{1}, {R("T")}},
                                                         {Index{2}, {R("T")}},
                                                         {Index{2, 1}, {R("T"), R("1+T")}},
                                                         {Index{1, 1, 1}, {R("T"), R("T"), R("1+T")}}};
    int lit_pass = 0, cor_pass = 0;
    std::string lit_detail;
    for (const auto& [s, u] : systems) {
      const auto sys = build_cmpl_system(s, u, v);
      const PolyKT f = PolyKT::t_power(F3(), static_cast<std::size_t>(s.weight()));
      const auto lit = mpl_certificate(sys, s.weight(), f, {1, 2}, 30, SpecializationForm::Literal);
      const auto cor = mpl_certificate(sys, s.weight(), f, {1, 2}, 30, SpecializationForm::Corrected);
      if (lit.passed) ++lit_pass;
      else if (lit_detail.empty()) lit_detail = "condition " + std::to_string(lit.failed_condition) + " (" + lit.detail + ")";
      if (cor.passed) ++cor_pass;
    }
    const auto om = build_omega_system(pi, v);
    const auto two = block_sum({om, om});
    const PolyKT one = PolyKT::constant(R("1"));
    const RatK gamma = pi.inv();
    const bool v1 = vabp_certify(two, gamma, {R("1"), R("-1")}, {one, -one}, 30, 30);
    const bool v2 = vabp_certify(two, gamma, {R("0"), R("0")}, {PolyKT(F3()), PolyKT(F3())}, 30, 30);
    const bool v3 = !vabp_certify(om, gamma, {R("1")}, {one}, 30, 30);
    std::ostringstream os;
    os << "literal mpl_certificate with f = t^w, N in {1,2}: " << lit_pass << "/" << systems.size() << " pass";
    if (!lit_detail.empty()) os << ", first failure " << lit_detail;
    os << "; with the factor v^(-N q^N w): " << cor_pass << "/" << systems.size() << "; vabp examples "
       << (v1 && v2 && v3 ? "3/3 as expected" : "MISMATCH");
    return Outcome{lit_pass == static_cast<int>(systems.size()) && v1 && v2 && v3, os.str()};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
