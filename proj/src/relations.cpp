#include "vmz/relations.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "vmz/error.hpp"
#include "vmz/linalg.hpp"

namespace vmz {

using nlohmann::json;

namespace {

std::string label_of(const char* name, const Index& s, const ArgTuple& u) {
  return std::string(name) + "_" + s.to_string() + "(" + args_to_string(u) + ")";
}

std::int64_t residual_of(const LocalNum& x) {
  const Valuation val = x.valuation();
  return val.infinite ? kInfPrec : val.value;
}

std::string ord_string(std::int64_t n) { return n >= kInfPrec ? "inf" : std::to_string(n); }

// F_q coordinates of Σ_i c_i x_i, columns i·(d+1)+j for c_{i,j}θ^j.
std::vector<PolyA> unflatten(const FqContext& ctx, const FqRow& z, std::size_t nvals, int d) {
  std::vector<PolyA> c;
  for (std::size_t i = 0; i < nvals; ++i) {
    std::vector<Code> cs(z.begin() + static_cast<std::ptrdiff_t>(i * (d + 1)),
                         z.begin() + static_cast<std::ptrdiff_t>((i + 1) * (d + 1)));
    c.emplace_back(ctx, cs);
  }
  return c;
}

int max_degree(const FqRow& z, int d) {
  int m = -1;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] != 0) m = std::max(m, static_cast<int>(k % static_cast<std::size_t>(d + 1)));
  }
  return m;
}

FqRow theta_shift(const FqRow& z, int d, int k) {
  FqRow out(z.size(), 0);
  for (std::size_t col = 0; col < z.size(); ++col) {
    if (z[col] == 0) continue;
    const int j = static_cast<int>(col % static_cast<std::size_t>(d + 1));
    if (j + k > d) return {};
    out[col + static_cast<std::size_t>(k)] = z[col];
  }
  return out;
}

// Vectors in span(basis) whose coordinates vanish on the rows given.
std::vector<FqRow> restrict_kernel(const FqContext& ctx, const std::vector<FqRow>& basis,
                                   const std::vector<FqRow>& rows) {
  if (basis.empty()) return {};
  std::vector<FqRow> m;
  for (const auto& r : rows) {
    FqRow out(basis.size(), 0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Code acc = 0;
      for (std::size_t col = 0; col < r.size(); ++col) acc = ctx.add(acc, ctx.mul(r[col], basis[b][col]));
      out[b] = acc;
    }
    m.push_back(out);
  }
  std::vector<FqRow> res;
  for (const auto& comb : fq_kernel(ctx, m, basis.size())) {
    FqRow z(basis[0].size(), 0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      for (std::size_t col = 0; col < z.size(); ++col) z[col] = ctx.add(z[col], ctx.mul(comb[b], basis[b][col]));
    }
    res.push_back(z);
  }
  return res;
}

}  // namespace

ValueHandle cmpl_handle(const Index& s, const ArgTuple& u, const Place& v, std::int64_t prec) {
  return {label_of("Li", s, u), s.weight(), cmpl_eval(s, u, v, prec), "cmpl_eval@" + v.to_string()};
}

ValueHandle cmspl_handle(const Index& s, const ArgTuple& u, const Place& v, std::int64_t prec) {
  return {label_of("Li*", s, u), s.weight(), cmspl_eval(s, u, v, prec), "cmspl_eval@" + v.to_string()};
}

std::string RelationReport::to_string() const {
  std::string out = "coeffs=[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ",";
    out += coeffs[i].to_string();
  }
  return out + "] residual_ord=" + ord_string(residual_ord);
}

std::vector<RelationReport> find_k_relations(const std::vector<ValueHandle>& values, int d, std::int64_t N,
                                             std::int64_t N_recheck) {
  if (values.empty()) return {};
  if (d < 0) throw DomainError("coefficient degree bound must be >= 0");
  if (N_recheck <= N) throw DomainError("N_recheck must exceed N");
  const Place& v = values[0].value.place();
  const FqContext& ctx = v.ctx();
  for (const auto& h : values) {
    if (h.value.place() != v) throw DomainError("values live at different places");
    if (h.value.abs_precision() < N_recheck) {
      throw PrecisionLoss(h.label + " is known only to " + std::to_string(h.value.abs_precision()));
    }
  }
  const std::size_t nv = values.size(), ncols = nv * static_cast<std::size_t>(d + 1);
  const LocalNum theta = embed_abs(RatK::theta(ctx), v, N_recheck + 10);
  std::vector<LocalNum> prods;
  std::int64_t lo = N;
  for (const auto& h : values) {
    LocalNum p = h.value.truncate(N_recheck);
    for (int j = 0; j <= d; ++j) {
      if (!p.is_zero_to_precision()) lo = std::min(lo, p.nu());
      prods.push_back(p);
      p = (p * theta).truncate(N_recheck);
    }
  }
  auto rows_between = [&](std::int64_t a, std::int64_t b) {
    std::vector<FqRow> rows;
    for (std::int64_t k = a; k < b; ++k) {
      FqRow r(ncols, 0);
      for (std::size_t col = 0; col < ncols; ++col) r[col] = prods[col].digit(k);
      rows.push_back(r);
    }
    return rows;
  };
  const auto first = fq_kernel(ctx, rows_between(lo, N), ncols);
  const auto survivors = restrict_kernel(ctx, first, rows_between(std::max(lo, N), N_recheck));

  std::vector<RelationReport> out;
  std::vector<FqRow> span;
  for (int e = 0; e <= d; ++e) {
    std::vector<FqRow> high;
    for (std::size_t col = 0; col < ncols; ++col) {
      if (static_cast<int>(col % static_cast<std::size_t>(d + 1)) > e) {
        FqRow r(ncols, 0);
        r[col] = 1;
        high.push_back(r);
      }
    }
    for (const auto& z : restrict_kernel(ctx, survivors, high)) {
      auto grown = span;
      grown.push_back(z);
      if (fq_rank(ctx, grown, ncols) == fq_rank(ctx, span, ncols)) continue;
      for (int k = 0; k + max_degree(z, d) <= d; ++k) span.push_back(theta_shift(z, d, k));
      RelationReport rep;
      rep.coeffs = unflatten(ctx, z, nv, d);
      LocalNum acc = LocalNum::exact_zero(v);
      for (std::size_t i = 0; i < nv; ++i) {
        if (rep.coeffs[i].is_zero()) continue;
        acc += embed_abs(RatK(rep.coeffs[i]), v, N_recheck + 10) * values[i].value;
      }
      rep.residual_ord = std::min(residual_of(acc.truncate(N_recheck)), kInfPrec);
      rep.recheck_prec = N_recheck;
      out.push_back(rep);
    }
  }
  return out;
}

json Decomposition::to_json() const {
  json j;
  j["q"] = ctx->q();
  j["target"] = target.to_string();
  json ts = json::array();
  for (const auto& t : terms) {
    json a = json::array();
    for (const auto& x : t.args) a.push_back(x.to_string());
    ts.push_back({{"b", t.b.to_string()}, {"index", t.index.to_string()}, {"args", a}});
  }
  j["terms"] = ts;
  if (certified_prec) {
    j["certification"] = {{"prec", *certified_prec}, {"date", recorded_date}};
  } else if (recorded_prec) {
    j["certification"] = {{"prec", *recorded_prec}, {"date", recorded_date}};
  }
  return j;
}

Decomposition Decomposition::from_json(const json& j) {
  try {
    Decomposition dec;
    dec.ctx = &FqContext::for_q(j.at("q").get<std::uint64_t>());
    dec.target = Index::parse(j.at("target").get<std::string>());
    for (const auto& t : j.at("terms")) {
      DecompTerm term{RatK::parse(*dec.ctx, t.at("b").get<std::string>()),
                      Index::parse(t.at("index").get<std::string>()), {}};
      for (const auto& a : t.at("args")) term.args.push_back(RatK::parse(*dec.ctx, a.get<std::string>()));
      if (term.index.weight() != dec.target.weight()) {
        throw ParseError("term " + term.index.to_string() + " has weight " + std::to_string(term.index.weight()) +
                         ", target has " + std::to_string(dec.target.weight()));
      }
      if (term.index.depth() > dec.target.depth()) throw ParseError("term deeper than the target");
      if (static_cast<int>(term.args.size()) != term.index.depth()) throw ParseError("args do not match the index");
      dec.terms.push_back(term);
    }
    if (j.contains("certification")) {
      dec.recorded_prec = j["certification"].at("prec").get<std::int64_t>();
      dec.recorded_date = j["certification"].value("date", "");
    }
    return dec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("decomposition: ") + e.what());
  }
}

Decomposition Decomposition::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void Decomposition::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << to_json().dump(2) << "\n";
}

Decomposition depth_one_candidate(const FqContext& ctx, int s) {
  if (s < 1 || s > static_cast<int>(ctx.q()) - 1) throw DomainError("depth-one candidate needs 1 <= s <= q-1");
  Decomposition dec;
  dec.ctx = &ctx;
  dec.target = Index{s};
  dec.terms.push_back({RatK::one(ctx), Index{s}, {RatK::one(ctx)}});
  return dec;
}

std::int64_t verify_decomposition_inf(Decomposition& dec, std::int64_t N) {
  if (dec.terms.empty()) throw DomainError("empty decomposition");
  const FqContext& ctx = *dec.ctx;
  const Place inf = Place::infinite(ctx);
  const std::int64_t prec = N + 10;
  const int s1 = dec.target[0];
  const int D_max = static_cast<int>((prec + s1 - 1) / s1);
  LocalNum diff = mzv_inf(ctx, dec.target, D_max, prec);
  for (const auto& t : dec.terms) {
    if (!domain_check(t.index, t.args, DomainTag::ConvInf, inf)) {
      throw DomainError("term " + t.index.to_string() + " is outside the ∞-adic domain");
    }
    diff -= embed_abs(t.b, inf, prec + 10) * cmspl_eval(t.index, t.args, inf, prec + 10);
  }
  const std::int64_t r = residual_of(diff.truncate(prec));
  if (r < N) throw CertificationFailed("decomposition fails at ∞: residual ord " + std::to_string(r), r);
  dec.certified_prec = N;
  const std::time_t now = std::time(nullptr);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", std::gmtime(&now));
  dec.recorded_date = buf;
  return r;
}

TModuleLookup tmodule_lookup_dir(const FqContext& ctx, const std::string& dir, const Place& v, std::int64_t prec,
                                 bool trust) {
  return [&ctx, dir, v, prec, trust](const Index& s) -> std::optional<ValidatedTModule> {
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream in(entry.path());
      const json j = json::parse(in, nullptr, false);
      if (j.is_discarded() || j.value("q", 0u) != ctx.q()) continue;
      const TModuleSpec spec = TModuleSpec::from_json(ctx, j);
      if (!(spec.index == s)) continue;
      if (trust) return trust_unvalidated(spec);
      if (auto tm = validate_tmodule(spec, v, prec)) return tm;
    }
    return std::nullopt;
  };
}

VmzvValue eval_vmzv(const Decomposition& dec, const Place& v, std::int64_t prec, const TModuleLookup& lookup) {
  if (dec.terms.empty()) throw DomainError("empty decomposition");
  if (!dec.certified_prec) throw UncertifiedDecomposition("decomposition " + dec.target.to_string() + " is not certified at ∞");
  VmzvValue out{LocalNum::exact_zero(v), {}};
  for (const auto& t : dec.terms) {
    LocalNum term(v);
    if (domain_check(t.index, t.args, DomainTag::ConvV, v)) {
      term = cmspl_eval(t.index, t.args, v, prec + 10);
      out.routes.push_back("series");
    } else {
      auto tm = lookup ? lookup(t.index) : std::nullopt;
      if (!tm) throw MissingTModuleSpec("no validated t-module for index " + t.index.to_string());
      term = extended_cmspl_v(*tm, t.args, v, prec + 10).value;
      out.routes.push_back("extended");
    }
    out.value += embed_abs(t.b, v, prec + 10) * term;
  }
  out.value = out.value.truncate(prec);
  return out;
}

}  // namespace vmz
