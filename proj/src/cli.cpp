#include "vmz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "vmz/abp_toolkit.hpp"
#include "vmz/diffsys.hpp"
#include "vmz/error.hpp"
#include "vmz/relations.hpp"
#include "vmz/tmodule.hpp"

namespace vmz {

namespace {

struct RunConfig {
  std::uint64_t q = 3;
  std::uint32_t p = 0;
  std::uint32_t e = 1;
  std::vector<std::uint32_t> modulus;
  std::string lambda = "0";
  std::int64_t prec = 30;
  std::int64_t t_order = 40;
  std::int64_t inf_prec = 60;
  std::string data_dir = "data";
  std::string format = "machine";
  bool trust = false;

  const FqContext* ctx = nullptr;
  std::optional<Place> place;

  void finalize() {
    if (p != 0) {
      ctx = modulus.empty() ? &FqContext::get(p, e) : &FqContext::get(p, e, modulus);
    } else {
      ctx = &FqContext::for_q(q);
    }
    place = Place::finite(*ctx, ctx->parse(lambda));
  }
};

class Report {
 public:
  void add(const std::string& k, const std::string& v) { rows_.emplace_back(k, v); }
  void add(const std::string& k, std::int64_t v) { add(k, ord(v)); }
  void add(const std::string& k, bool v) { add(k, std::string(v ? "true" : "false")); }
  void raw(const std::string& line) { rows_.emplace_back("", line); }
  void print(std::ostream& out, bool human) const {
    std::size_t w = 0;
    for (const auto& [k, v] : rows_) w = std::max(w, k.size());
    for (const auto& [k, v] : rows_) {
      if (k.empty()) {
        out << v << "\n";
      } else if (human) {
        out << k << std::string(w - k.size(), ' ') << " : " << v << "\n";
      } else {
        out << k << "=" << v << "\n";
      }
    }
  }
  static std::string ord(std::int64_t n) { return n >= kInfPrec ? "inf" : std::to_string(n); }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string status(bool ok) { return ok ? "ok" : "fail"; }

// ζ_A(s) data: an explicit file, the shipped file, or the depth-one candidate.
std::pair<Decomposition, std::string> find_decomposition(const RunConfig& cfg, const Index& s,
                                                         const std::string& file) {
  if (!file.empty()) return {Decomposition::load(file), file};
  std::string name = s.to_string();
  std::replace(name.begin(), name.end(), ',', '-');
  const std::string path = cfg.data_dir + "/decompositions/zeta_" + name + "_q" + std::to_string(cfg.ctx->q()) + ".json";
  if (std::filesystem::exists(path)) return {Decomposition::load(path), path};
  if (s.depth() == 1) return {depth_one_candidate(*cfg.ctx, s[0]), "depth_one_candidate"};
  throw MissingTModuleSpec("no decomposition for zeta(" + s.to_string() + ")");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"v-adic multiple polylogarithms and zeta values", "vmz"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file with default settings");
  RunConfig cfg;
  app.add_option("--q", cfg.q, "field size (prime power)");
  app.add_option("--p", cfg.p, "characteristic; overrides --q");
  app.add_option("--e", cfg.e, "extension degree with --p");
  app.add_option("--modulus", cfg.modulus, "modulus coefficients over F_p, ascending");
  app.add_option("--lambda", cfg.lambda, "place v = T + lambda");
  app.add_option("--prec", cfg.prec, "v-adic absolute precision");
  app.add_option("--t-order", cfg.t_order, "t-adic truncation order");
  app.add_option("--inf-prec", cfg.inf_prec, "precision at infinity");
  app.add_option("--data-dir", cfg.data_dir, "directory holding decompositions/ and tmodules/");
  app.add_option("--format", cfg.format, "output mode")->check(CLI::IsMember({"machine", "human"}));
  app.add_flag("--trust-unvalidated", cfg.trust, "use t-module specs without validating them");

  std::string index = "1", argstr, place_opt = "v", file, form = "corrected", nlist = "1,2", gamma = "1/T",
              rho, pvec, alpha, matrix, poly, roots, lam_coef = "1", fpoly;
  int N = 1, copies = 2, degree = 1, n_ball = 0, e_budget = 0, zeros = 0, weight = 0, tensor = 0;
  std::int64_t recheck = 0, rho_exp = 0, cexp = 2;
  std::vector<std::string> values;
  bool write = false, dump = false;

  std::map<CLI::App*, std::function<int(Report&)>> handlers;
  auto needs = [](CLI::App* sub, const char* name, auto& var, const char* help) {
    return sub->add_option(name, var, help);
  };

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a value");
  eval->require_subcommand(1);
  for (const char* kind : {"cmpl", "cmspl"}) {
    auto* sub = eval->add_subcommand(kind, std::string(kind == std::string("cmpl") ? "Li" : "Li*") + "_s(u)");
    needs(sub, "--index", index, "index s, comma separated")->required();
    needs(sub, "--args", argstr, "arguments u, comma separated")->required();
    needs(sub, "--place", place_opt, "v or inf")->check(CLI::IsMember({"v", "inf"}));
    const bool star = kind == std::string("cmspl");
    handlers[sub] = [&, star](Report& r) {
      const Index s = Index::parse(index);
      const ArgTuple u = parse_args(*cfg.ctx, argstr);
      const Place pl = place_opt == "inf" ? Place::infinite(*cfg.ctx) : *cfg.place;
      const LocalNum x = star ? cmspl_eval(s, u, pl, cfg.prec) : cmpl_eval(s, u, pl, cfg.prec);
      r.add("value", x.to_string());
      r.add("valuation", x.valuation().to_string());
      return 0;
    };
  }
  {
    auto* sub = eval->add_subcommand("mzv-inf", "zeta_A(s) at infinity");
    needs(sub, "--index", index, "index s")->required();
    handlers[sub] = [&](Report& r) {
      const Index s = Index::parse(index);
      const int D_max = static_cast<int>((cfg.prec + s[0] - 1) / s[0]);
      const Place inf = Place::infinite(*cfg.ctx);
      const LocalNum x = mzv_inf(*cfg.ctx, s, D_max, cfg.prec);
      r.add("value", x.to_string());
      r.add("place", inf.to_string());
      r.add("degrees_summed", std::to_string(D_max));
      return 0;
    };
  }
  {
    auto* sub = eval->add_subcommand("mzv-v", "zeta_A(s)_v through a certified decomposition");
    needs(sub, "--index", index, "index s")->required();
    needs(sub, "--decomposition", file, "decomposition JSON file");
    handlers[sub] = [&](Report& r) {
      const Index s = Index::parse(index);
      auto [dec, source] = find_decomposition(cfg, s, file);
      const std::int64_t res = verify_decomposition_inf(dec, cfg.inf_prec);
      const auto lookup =
          tmodule_lookup_dir(*cfg.ctx, cfg.data_dir + "/tmodules", *cfg.place, cfg.prec, cfg.trust);
      const auto val = eval_vmzv(dec, *cfg.place, cfg.prec, lookup);
      r.add("value", val.value.to_string());
      r.add("is_zero_to_prec", val.value.is_zero_to_precision());
      r.add("valuation", val.value.valuation().to_string());
      std::string routes;
      for (const auto& x : val.routes) routes += (routes.empty() ? "" : ",") + x;
      r.add("routes", routes);
      r.add("decomposition", source);
      r.add("inf_residual_ord", res);
      if (cfg.trust) r.add("tmodule_validation", std::string("skipped"));
      return 0;
    };
  }

  // verify
  auto* verify = app.add_subcommand("verify", "check an identity to precision");
  verify->require_subcommand(1);
  {
    auto* sub = verify->add_subcommand("omega", "Omega difference equation");
    needs(sub, "--alpha", alpha, "alpha (defaults to the uniformizer)");
    handlers[sub] = [&](Report& r) {
      const RatK a = alpha.empty() ? RatK(cfg.place->uniformizer()) : RatK::parse(*cfg.ctx, alpha);
      const auto rep = verify_difference(build_omega_system(a, *cfg.place), cfg.t_order, cfg.prec);
      r.add("residual_ord", rep.verified ? kInfPrec : rep.residual_ord);
      r.add("checked_to", "t^" + std::to_string(cfg.t_order) + ",v^" + std::to_string(cfg.prec));
      r.add("status", status(rep.verified));
      return rep.verified ? 0 : 1;
    };
  }
  for (const char* kind : {"deformation", "system"}) {
    auto* sub = verify->add_subcommand(kind, kind == std::string("system") ? "Phi/psi system for Li_s(u)"
                                                                            : "functional equations of the deformation series");
    needs(sub, "--index", index, "index s")->required();
    needs(sub, "--args", argstr, "arguments u")->required();
    if (kind == std::string("system")) sub->add_flag("--dump", dump, "print the system");
    handlers[sub] = [&](Report& r) {
      const auto sys = build_cmpl_system(Index::parse(index), parse_args(*cfg.ctx, argstr), *cfg.place);
      if (dump) r.raw(sys.dump(std::min<std::int64_t>(cfg.t_order, 6), std::min<std::int64_t>(cfg.prec, 10)));
      const auto rep = verify_difference(sys, cfg.t_order, cfg.prec);
      r.add("size", std::to_string(sys.size()));
      r.add("residual_ord", rep.verified ? kInfPrec : rep.residual_ord);
      r.add("checked_to", "t^" + std::to_string(cfg.t_order) + ",v^" + std::to_string(cfg.prec));
      r.add("status", status(rep.verified));
      return rep.verified ? 0 : 1;
    };
  }
  {
    auto* sub = verify->add_subcommand("specialize", "deformation series at t = v^(-q^N)");
    needs(sub, "--index", index, "index s")->required();
    needs(sub, "--args", argstr, "arguments u")->required();
    needs(sub, "--N", N, "twist N >= 0");
    needs(sub, "--form", form, "identity checked")->check(CLI::IsMember({"literal", "corrected"}));
    handlers[sub] = [&](Report& r) {
      const Index s = Index::parse(index);
      const ArgTuple u = parse_args(*cfg.ctx, argstr);
      const Place& v = *cfg.place;
      const LocalNum lhs = deformation_specialize(s, u, v, N, cfg.prec);
      const std::int64_t work = cfg.prec + 10;
      const LocalNum base = (pi_tilde(RatK(v.uniformizer()), v, work).pow(static_cast<std::uint64_t>(s.weight())) *
                             cmpl_eval(s, u, v, work))
                                .frobenius(static_cast<unsigned>(N));
      const std::int64_t shift = specialization_shift(s, v, N);
      const std::int64_t lit = std::min(diff_ord(lhs, base), cfg.prec);
      const std::int64_t cor = std::min(diff_ord(lhs, base.shift(shift)), cfg.prec);
      r.add("value", lhs.to_string());
      r.add("literal_agreement", lit);
      r.add("corrected_agreement", cor);
      r.add("shift", shift);
      const bool ok = (form == "literal" ? lit : cor) >= cfg.prec;
      r.add("form", form);
      r.add("status", status(ok));
      return ok ? 0 : 1;
    };
  }
  {
    auto* sub = verify->add_subcommand("decomposition", "certify zeta_A(s) = sum b Li*(u) at infinity");
    needs(sub, "--file", file, "decomposition JSON file")->required();
    sub->add_flag("--write", write, "append the certification block to the file");
    handlers[sub] = [&](Report& r) {
      auto dec = Decomposition::load(file);
      try {
        const std::int64_t res = verify_decomposition_inf(dec, cfg.inf_prec);
        r.add("residual_ord", res);
        r.add("certified_prec", cfg.inf_prec);
        r.add("status", status(true));
        if (write) dec.save(file);
        return 0;
      } catch (const CertificationFailed& e) {
        r.add("residual_ord", e.residual_ord());
        r.add("status", status(false));
        return 1;
      }
    };
  }
  {
    auto* sub = verify->add_subcommand("tmodule", "validate a t-module spec against the series");
    needs(sub, "--file", file, "t-module JSON spec");
    needs(sub, "--tensor", tensor, "built-in tensor power instead of a file");
    handlers[sub] = [&](Report& r) {
      if (file.empty() && tensor < 1) throw ParseError("give --file or --tensor");
      const TModuleSpec spec = file.empty() ? tensor_carlitz_spec(*cfg.ctx, tensor) : TModuleSpec::load(*cfg.ctx, file);
      ValidationCertificate cert;
      const bool ok = validate_tmodule(spec, *cfg.place, cfg.prec, &cert).has_value();
      std::string ag;
      for (auto a : cert.agreement) ag += (ag.empty() ? "" : ",") + Report::ord(a);
      r.add("index", spec.index.to_string());
      r.add("agreement", ag);
      r.add("status", status(ok));
      return ok ? 0 : 1;
    };
  }

  // certify
  auto* certify = app.add_subcommand("certify", "check a certificate");
  certify->require_subcommand(1);
  {
    auto* sub = certify->add_subcommand("mpl", "MPL property of the system for Li_s(u)");
    needs(sub, "--index", index, "index s")->required();
    needs(sub, "--args", argstr, "arguments u")->required();
    needs(sub, "--N-list", nlist, "twists to check, comma separated");
    needs(sub, "--weight", weight, "claimed weight (default wt(s))");
    needs(sub, "--f", fpoly, "claimed type f(t) (default t^w)");
    needs(sub, "--form", form, "specialization identity")->check(CLI::IsMember({"literal", "corrected"}));
    handlers[sub] = [&](Report& r) {
      const Index s = Index::parse(index);
      const auto sys = build_cmpl_system(s, parse_args(*cfg.ctx, argstr), *cfg.place);
      const int w = weight > 0 ? weight : s.weight();
      const PolyKT f = fpoly.empty() ? PolyKT::t_power(*cfg.ctx, static_cast<std::size_t>(w))
                                     : PolyKT::parse(*cfg.ctx, fpoly);
      const auto rep = mpl_certificate(sys, w, f, parse_int_list(nlist), cfg.prec,
                                       form == "literal" ? SpecializationForm::Literal : SpecializationForm::Corrected,
                                       cfg.t_order);
      std::string ag;
      for (auto a : rep.condition4_agreement) ag += (ag.empty() ? "" : ",") + Report::ord(a);
      r.add("form", form);
      r.add("failed_condition", std::to_string(rep.failed_condition));
      r.add("condition4_agreement", ag);
      if (!rep.detail.empty()) r.add("detail", rep.detail);
      r.add("status", status(rep.passed));
      return rep.passed ? 0 : 1;
    };
  }
  {
    auto* sub = certify->add_subcommand("vabp", "P(gamma) = rho and P psi = 0 for copies of the Omega system");
    needs(sub, "--copies", copies, "number of Omega blocks");
    needs(sub, "--gamma", gamma, "gamma");
    needs(sub, "--rho", rho, "rho, comma separated")->required();
    needs(sub, "--P", pvec, "entries of P in A[t], comma separated")->required();
    handlers[sub] = [&](Report& r) {
      const Place& v = *cfg.place;
      const auto om = build_omega_system(RatK(v.uniformizer()), v);
      const auto sys = block_sum(std::vector<DiffSystem>(static_cast<std::size_t>(copies), om));
      const ArgTuple rv = parse_args(*cfg.ctx, rho);
      std::vector<PolyKT> P;
      for (const auto& e : split(pvec, ',')) P.push_back(PolyKT::parse(*cfg.ctx, e));
      if (rv.size() != P.size() || static_cast<int>(P.size()) != copies) throw ParseError("rho and P need one entry per block");
      const bool det = det_nonvanishing(sys, RatK::parse(*cfg.ctx, gamma), 5);
      const bool ok = det && vabp_certify(sys, RatK::parse(*cfg.ctx, gamma), rv, P, cfg.t_order, cfg.prec);
      r.add("det_nonvanishing", det);
      r.add("status", status(ok));
      return ok ? 0 : 1;
    };
  }

  // relations
  auto* rel = app.add_subcommand("relations", "linear relations among v-adic values");
  rel->require_subcommand(1);
  {
    auto* sub = rel->add_subcommand("find", "search for A-linear relations");
    sub->add_option("--value", values, "kind:index:args with kind cmpl, cmspl or one")->required();
    needs(sub, "--degree", degree, "coefficient degree bound");
    needs(sub, "--recheck", recheck, "recheck precision (default prec + 20)");
    handlers[sub] = [&](Report& r) {
      const std::int64_t rc = recheck > 0 ? recheck : cfg.prec + 20;
      std::vector<ValueHandle> vals;
      for (const auto& spec : values) {
        const auto parts = split(spec, ':');
        if (parts.size() == 1 && parts[0] == "one") {
          vals.push_back({"1", 0, LocalNum::one(*cfg.place, rc), "constant"});
          continue;
        }
        if (parts.size() != 3) throw ParseError("value '" + spec + "' is not kind:index:args");
        const Index s = Index::parse(parts[1]);
        const ArgTuple u = parse_args(*cfg.ctx, parts[2]);
        if (parts[0] == "cmpl") {
          vals.push_back(cmpl_handle(s, u, *cfg.place, rc));
        } else if (parts[0] == "cmspl") {
          vals.push_back(cmspl_handle(s, u, *cfg.place, rc));
        } else {
          throw ParseError("unknown value kind '" + parts[0] + "'");
        }
      }
      const auto rels = find_k_relations(vals, degree, cfg.prec, rc);
      r.add("relations", std::to_string(rels.size()));
      r.add("recheck_prec", rc);
      for (const auto& x : rels) r.raw(x.to_string());
      return 0;
    };
  }

  // appendix
  auto* appx = app.add_subcommand("appendix", "norm and small-solution checks over R_v");
  appx->require_subcommand(1);
  {
    auto* sub = appx->add_subcommand("count-ball", "count x in R_v with |x| <= q^n");
    needs(sub, "--n", n_ball, "exponent n")->required();
    handlers[sub] = [&](Report& r) {
      const auto b = norm_ball_count(*cfg.place, n_ball);
      r.add("count", std::to_string(b.count));
      r.add("formula", std::to_string(b.formula));
      r.add("status", status(b.count == b.formula));
      return b.count == b.formula ? 0 : 1;
    };
  }
  {
    auto* sub = appx->add_subcommand("sup-norm", "sup of |f| on the disk |t| <= q^rho");
    needs(sub, "--poly", poly, "f in k[t] (T is theta, t the variable)");
    needs(sub, "--rho", rho_exp, "disk radius exponent")->required();
    needs(sub, "--const", lam_coef, "factored form: leading constant");
    needs(sub, "--roots", roots, "factored form: nonzero roots, comma separated");
    needs(sub, "--zeros", zeros, "factored form: multiplicity of 0");
    handlers[sub] = [&](Report& r) {
      const bool factored = poly.empty();
      FactoredPoly fp{RatK::parse(*cfg.ctx, lam_coef), zeros, roots.empty() ? ArgTuple{} : parse_args(*cfg.ctx, roots)};
      const PolyKT f = factored ? fp.expand() : PolyKT::parse(*cfg.ctx, poly);
      const std::int64_t a = sup_norm_disk(f, *cfg.place, rho_exp);
      r.add("sup_norm", qpow_string(a));
      if (!factored) return 0;
      const std::int64_t b = sup_norm_disk_factored(fp, *cfg.place, rho_exp);
      r.add("sup_norm_factored", qpow_string(b));
      r.add("status", status(a == b));
      return a == b ? 0 : 1;
    };
  }
  {
    auto* sub = appx->add_subcommand("small-solution", "nonzero x with Mx = 0 and small norm");
    needs(sub, "--matrix", matrix, "rows separated by ';', entries by ','")->required();
    needs(sub, "--C", cexp, "C = q^c, give c");
    needs(sub, "--e", e_budget, "t-degree budget");
    handlers[sub] = [&](Report& r) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : split(matrix, ';')) rows.push_back(split(row, ','));
      const auto M = parse_rv_matrix(*cfg.place, rows);
      const auto sol = small_solution(*cfg.place, M, cexp, e_budget);
      std::string xs;
      for (const auto& xi : sol.x) {
        std::vector<RatK> c;
        for (const auto& a : xi) c.push_back(a.to_ratk(*cfg.place));
        xs += (xs.empty() ? "" : "; ") + PolyKT(*cfg.ctx, c).to_string();
      }
      const bool ok = verify_small_solution(*cfg.place, M, cexp, sol);
      r.add("x", xs);
      r.add("norm", qpow_string(sol.norm));
      std::ostringstream bound;
      bound << "q^" << sol.bound_exponent;
      r.add("bound", bound.str());
      r.add("status", status(ok));
      return ok ? 0 : 1;
    };
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* leaf = nullptr;
  for (const auto& [sub, h] : handlers) {
    if (sub->parsed()) leaf = sub;
  }
  if (!leaf) {
    err << "missing subcommand\n";
    return 2;
  }
  Report report;
  int code = 0;
  try {
    cfg.finalize();
    code = handlers[leaf](report);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationFailed& e) {
    report.add("residual_ord", e.residual_ord());
    report.add("status", std::string("fail"));
    report.add("error", std::string(e.what()));
    code = 1;
  } catch (const Error& e) {
    report.add("status", std::string("fail"));
    report.add("error", std::string(e.what()));
    code = 1;
  }
  report.print(out, cfg.format == "human");
  return code;
}

}  // namespace vmz
