#include "vmz/tmodule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vmz/error.hpp"
#include "vmz/linalg.hpp"
#include "vmz/satmath.hpp"

namespace vmz {

using nlohmann::json;

namespace {

RatK constant(const FqContext& ctx, Code c) { return RatK(PolyA::constant(ctx, c)); }

Matrix<RatK> zero_matrix(const FqContext& ctx, int d) { return Matrix<RatK>(d, d, RatK(ctx)); }

Matrix<RatK> n0_over_k(const TModuleSpec& spec) {
  return spec.N0.map([&](Code c) { return constant(*spec.ctx, c); });
}

Matrix<RatK> twist(const Matrix<RatK>& m, unsigned n) {
  return m.map([&](const RatK& x) { return x.frobenius(n); });
}

// Unique X with δX + NX - XN = C, δ = θ - θ^{q^i}. ad_N is nilpotent, so the
// Neumann series terminates.
Matrix<RatK> sylvester(const Matrix<RatK>& N, const RatK& delta, Matrix<RatK> C) {
  if (delta.is_zero()) throw SingularStep("θ - θ^{q^i} vanished");
  const RatK dinv = delta.inv();
  Matrix<RatK> X = C.map([&](const RatK& x) { return x * dinv; });
  RatK scale = dinv;
  const std::size_t bound = 2 * N.rows();
  for (std::size_t m = 1; m < bound; ++m) {
    C = N * C - C * N;
    bool zero = true;
    for (std::size_t i = 0; i < C.rows() && zero; ++i) {
      for (std::size_t j = 0; j < C.cols(); ++j) {
        if (!C(i, j).is_zero()) {
          zero = false;
          break;
        }
      }
    }
    if (zero) break;
    scale = -(scale * dinv);
    X = X + C.map([&](const RatK& x) { return x * scale; });
  }
  return X;
}

RatK theta_qpow_diff(const FqContext& ctx, int i) {
  const PolyA th = PolyA::theta(ctx);
  return RatK(th - th.frobenius(static_cast<unsigned>(i)));
}

std::int64_t min_ord(const Matrix<RatK>& m, const Place& v) {
  std::int64_t o = kInfPrec;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero()) o = std::min(o, v.ord(m(i, j)));
    }
  }
  return o;
}

// Incremental logarithm coefficients.
class LogSeries {
 public:
  explicit LogSeries(const TModuleSpec& spec) : spec_(spec), N_(n0_over_k(spec)) {
    P_.push_back(Matrix<RatK>::identity(spec.dimension, RatK(*spec.ctx), RatK::one(*spec.ctx)));
  }
  const Matrix<RatK>& at(int i) {
    while (static_cast<int>(P_.size()) <= i) {
      const int k = static_cast<int>(P_.size());
      Matrix<RatK> C = P_.back() * twist(spec_.B1, static_cast<unsigned>(k - 1));
      P_.push_back(sylvester(N_, theta_qpow_diff(*spec_.ctx, k), std::move(C)));
    }
    return P_[i];
  }

 private:
  const TModuleSpec& spec_;
  Matrix<RatK> N_;
  std::vector<Matrix<RatK>> P_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ParseError("t-module spec: " + msg);
}

}  // namespace

Matrix<RatK> TModuleSpec::B0() const {
  Matrix<RatK> m = n0_over_k(*this);
  for (int i = 0; i < dimension; ++i) m(i, i) = m(i, i) + RatK::theta(*ctx);
  return m;
}

std::vector<RatK> TModuleSpec::point_for(const ArgTuple& u) const {
  std::vector<Binding> b;
  for (std::size_t i = 0; i < u.size(); ++i) b.push_back({"u" + std::to_string(i + 1), u[i]});
  std::vector<RatK> z;
  for (const auto& e : point) z.push_back(parse_ratk(*ctx, e, b));
  return z;
}

json TModuleSpec::to_json() const {
  json j;
  j["q"] = ctx->q();
  j["dimension"] = dimension;
  json n0 = json::array(), b1 = json::array();
  for (int i = 0; i < dimension; ++i) {
    json rn = json::array(), rb = json::array();
    for (int k = 0; k < dimension; ++k) {
      rn.push_back(N0(i, k));
      rb.push_back(B1(i, k).to_string());
    }
    n0.push_back(rn);
    b1.push_back(rb);
  }
  j["N0"] = n0;
  j["B1"] = b1;
  j["readout"] = readout;
  j["index"] = index.to_string();
  j["point"] = point;
  json pts = json::array();
  for (const auto& u : validation_points) pts.push_back(args_to_string(u));
  j["validation_points"] = pts;
  return j;
}

TModuleSpec TModuleSpec::from_json(const FqContext& ctx, const json& j) {
  TModuleSpec s;
  s.ctx = &ctx;
  try {
    for (const char* key : {"dimension", "N0", "B1", "readout", "index", "point"}) {
      require(j.contains(key), std::string("missing field ") + key);
    }
    if (j.contains("q")) require(j.at("q").get<std::uint32_t>() == ctx.q(), "field size mismatch");
    s.dimension = j.at("dimension").get<int>();
    const int d = s.dimension;
    require(d >= 1, "dimension must be positive");
    s.N0 = Matrix<Code>(d, d, Code{0});
    s.B1 = zero_matrix(ctx, d);
    require(j.at("N0").size() == static_cast<std::size_t>(d) && j.at("B1").size() == static_cast<std::size_t>(d),
            "matrix row count");
    for (int i = 0; i < d; ++i) {
      require(j.at("N0")[i].size() == static_cast<std::size_t>(d) && j.at("B1")[i].size() == static_cast<std::size_t>(d),
              "matrix column count");
      for (int k = 0; k < d; ++k) {
        const Code c = j.at("N0")[i][k].get<Code>();
        require(c < ctx.q(), "N0 entry outside F_q");
        s.N0(i, k) = c;
        s.B1(i, k) = RatK(PolyA::parse(ctx, j.at("B1")[i][k].get<std::string>()));
      }
    }
    // Nilpotent iff the minimal polynomial is a power of x.
    const auto mp = fq_minpoly(ctx, s.N0);
    require(std::all_of(mp.begin(), mp.end() - 1, [](Code c) { return c == 0; }), "N0 must be nilpotent");
    s.readout = j.at("readout").get<int>();
    require(s.readout >= 1 && s.readout <= d, "readout out of range");
    s.index = Index::parse(j.at("index").get<std::string>());
    s.point = j.at("point").get<std::vector<std::string>>();
    require(s.point.size() == static_cast<std::size_t>(d), "point has wrong length");
    if (j.contains("validation_points")) {
      for (const auto& p : j.at("validation_points")) s.validation_points.push_back(parse_args(ctx, p.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("t-module spec: ") + e.what());
  }
  return s;
}

TModuleSpec TModuleSpec::load(const FqContext& ctx, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return from_json(ctx, json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TModuleSpec tensor_carlitz_spec(const FqContext& ctx, int s) {
  if (s < 1) throw DomainError("tensor power must be positive");
  TModuleSpec spec;
  spec.ctx = &ctx;
  spec.dimension = s;
  spec.N0 = Matrix<Code>(s, s, Code{0});
  for (int i = 0; i + 1 < s; ++i) spec.N0(i, i + 1) = 1;
  spec.B1 = zero_matrix(ctx, s);
  spec.B1(s - 1, 0) = RatK::one(ctx);
  spec.readout = s;
  spec.index = Index{s};
  spec.point.assign(s, "0");
  spec.point.back() = "u1";
  for (const char* u : {"T", "T^2", "T+T^2"}) spec.validation_points.push_back({RatK::parse(ctx, u)});
  return spec;
}

std::vector<RatK> tm_action(const TModuleSpec& spec, const PolyA& a, const std::vector<RatK>& z) {
  const auto B0 = spec.B0();
  const int d = spec.dimension;
  std::vector<RatK> acc(d, RatK(*spec.ctx)), y = z;
  for (int j = 0; j <= a.degree(); ++j) {
    if (j > 0) {
      std::vector<RatK> next(d, RatK(*spec.ctx));
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          if (!B0(r, c).is_zero()) next[r] += B0(r, c) * y[c];
          if (!spec.B1(r, c).is_zero()) next[r] += spec.B1(r, c) * y[c].frobenius(1);
        }
      }
      y = std::move(next);
    }
    const Code c = a.coeff(j);
    if (c == 0) continue;
    for (int r = 0; r < d; ++r) acc[r] += constant(*spec.ctx, c) * y[r];
  }
  return acc;
}

std::vector<LocalNum> tm_action(const TModuleSpec& spec, const PolyA& a, const std::vector<LocalNum>& z) {
  if (z.empty()) return {};
  const Place& v = z[0].place();
  std::int64_t prec = kInfPrec;
  for (const auto& x : z) prec = std::min(prec, x.abs_precision());
  if (prec >= kInfPrec) prec = 0;
  prec = std::max<std::int64_t>(prec, 0);
  auto emb = [&](const RatK& r) { return r.is_zero() ? LocalNum::exact_zero(v) : embed_abs(r, v, prec); };
  const auto B0 = spec.B0().map(emb);
  const auto B1 = spec.B1.map(emb);
  const int d = spec.dimension;
  std::vector<LocalNum> acc(d, LocalNum::exact_zero(v)), y = z;
  for (int j = 0; j <= a.degree(); ++j) {
    if (j > 0) {
      std::vector<LocalNum> next(d, LocalNum::exact_zero(v));
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          if (!spec.B0()(r, c).is_zero()) next[r] += B0(r, c) * y[c];
          if (!spec.B1(r, c).is_zero()) next[r] += B1(r, c) * y[c].qpow();
        }
      }
      y = std::move(next);
    }
    const Code c = a.coeff(j);
    if (c == 0) continue;
    for (int r = 0; r < d; ++r) acc[r] += y[r].scale(c);
  }
  return acc;
}

Matrix<RatK> d_action(const TModuleSpec& spec, const PolyA& a) {
  const auto B0 = spec.B0();
  const FqContext& ctx = *spec.ctx;
  Matrix<RatK> acc = zero_matrix(ctx, spec.dimension);
  Matrix<RatK> pw = Matrix<RatK>::identity(spec.dimension, RatK(ctx), RatK::one(ctx));
  for (int j = 0; j <= a.degree(); ++j) {
    if (j > 0) pw = pw * B0;
    const Code c = a.coeff(j);
    if (c != 0) acc = acc + pw.map([&](const RatK& x) { return x * constant(ctx, c); });
  }
  return acc;
}

LogCoeffs explog_coeffs(const TModuleSpec& spec, int I_max) {
  if (I_max < 0) throw DomainError("I_max must be >= 0");
  const FqContext& ctx = *spec.ctx;
  const auto N = n0_over_k(spec);
  LogCoeffs out;
  LogSeries logs(spec);
  for (int i = 0; i <= I_max; ++i) out.P.push_back(logs.at(i));
  out.Q.push_back(Matrix<RatK>::identity(spec.dimension, RatK(ctx), RatK::one(ctx)));
  for (int i = 1; i <= I_max; ++i) {
    Matrix<RatK> C = spec.B1 * twist(out.Q.back(), 1);
    C = C.map([](const RatK& x) { return -x; });
    out.Q.push_back(sylvester(N, theta_qpow_diff(ctx, i), std::move(C)));
  }
  return out;
}

bool exp_log_identity_holds(const LogCoeffs& c, const FqContext& ctx) {
  const int I = static_cast<int>(std::min(c.P.size(), c.Q.size())) - 1;
  const std::size_t d = c.P[0].rows();
  const auto zero = Matrix<RatK>(d, d, RatK(ctx));
  for (int n = 1; n <= I; ++n) {
    Matrix<RatK> acc = zero;
    for (int i = 0; i <= n; ++i) acc = acc + c.Q[i] * twist(c.P[n - i], static_cast<unsigned>(i));
    if (!(acc == zero)) return false;
  }
  return true;
}

Annihilator residue_annihilator(const TModuleSpec& spec, const Place& v) {
  if (v.is_infinite()) throw DomainError("residue annihilator needs a finite degree-one place");
  const FqContext& ctx = *spec.ctx;
  const Code x = ctx.neg(v.lambda());  // θ ≡ -λ mod ϖ
  const int d = spec.dimension;
  Matrix<Code> M(d, d, Code{0});
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const RatK& b = spec.B1(i, k);
      const Code den = b.den().eval(x);
      if (den == 0) throw DomainError("B1 is not v-integral");
      Code m = ctx.add(spec.N0(i, k), ctx.mul(b.num().eval(x), ctx.inv(den)));
      if (i == k) m = ctx.add(m, x);
      M(i, k) = m;
    }
  }
  PolyA a(ctx, fq_minpoly(ctx, M));
  const bool div = a.eval(x) == 0;
  return {std::move(a), std::move(M), div};
}

LogEvaluation log_eval(const TModuleSpec& spec, const std::vector<RatK>& z, const Place& v, std::int64_t prec,
                       int max_terms) {
  const int d = spec.dimension;
  LogEvaluation out;
  out.value.assign(d, LocalNum::exact_zero(v));
  std::int64_t mw = kInfPrec;
  for (const auto& x : z) {
    if (!x.is_zero()) mw = std::min(mw, v.ord(x));
  }
  if (mw >= kInfPrec) return out;
  if (mw < 1) throw DomainError("logarithm needs every coordinate of ord >= 1");

  const std::int64_t q = v.q();
  LogSeries logs(spec);
  std::vector<std::int64_t> pord;
  auto bound = [&](int j) { return sat_add(pord[j], sat_mul(sat_qpow(q, j), mw)); };
  int stop = -1;
  std::int64_t c = 0;
  for (int i = 0; i + 2 < max_terms; ++i) {
    while (static_cast<int>(pord.size()) <= i + 2) {
      const int j = static_cast<int>(pord.size());
      pord.push_back(min_ord(logs.at(j), v));
      if (j >= 1 && pord[j] < 0) c = std::max(c, ceil_div(-pord[j], j));
    }
    if (bound(i) < prec || bound(i + 1) < prec || bound(i + 2) < prec) continue;
    // f(j) = q^j·mw - c·j is increasing from j once q^j(q-1)mw >= c.
    const int j = i + 3;
    const std::int64_t qj = sat_qpow(q, j);
    if (sat_mul(qj, mw) - c * j >= prec && sat_mul(sat_mul(qj, q - 1), mw) >= c) {
      stop = i + 2;
      break;
    }
  }
  if (stop < 0) throw ConvergenceNotCertified("logarithm stopping rule not met within the term budget");
  out.growth = c;
  out.terms = stop + 1;

  std::vector<std::int64_t> zord(d, kInfPrec);
  for (int k = 0; k < d; ++k) {
    if (!z[k].is_zero()) zord[k] = v.ord(z[k]);
  }
  for (int j = 0; j <= stop; ++j) {
    if (bound(j) >= prec) continue;
    const auto& Pj = logs.at(j);
    const std::int64_t qj = sat_qpow(q, j);
    for (int k = 0; k < d; ++k) {
      if (zord[k] >= kInfPrec) continue;
      const std::int64_t ozj = sat_mul(qj, zord[k]);
      LocalNum zk(v);
      bool have = false;
      for (int r = 0; r < d; ++r) {
        const RatK& p = Pj(r, k);
        if (p.is_zero()) continue;
        const std::int64_t op = v.ord(p);
        if (sat_add(op, ozj) >= prec) continue;
        if (!have) {
          // Enough for the worst entry of this column: abs precision multiplies by q^j.
          const std::int64_t need = prec - pord[j];
          const std::int64_t a = std::max<std::int64_t>(zord[k] + 1, ceil_div(need, qj));
          zk = embed_abs(z[k], v, a).frobenius(static_cast<unsigned>(j));
          have = true;
        }
        out.value[r] += (embed_abs(p, v, prec - ozj) * zk).truncate(prec);
      }
    }
  }
  for (auto& x : out.value) {
    x = x.is_exact_zero() ? LocalNum::zero_to(v, prec) : x.truncate(prec);
  }
  return out;
}

std::string ValidationCertificate::to_string() const {
  std::ostringstream os;
  os << (passed ? "pass" : "fail") << " agreement=[";
  for (std::size_t i = 0; i < agreement.size(); ++i) os << (i ? "," : "") << agreement[i];
  os << "]";
  return os.str();
}

std::optional<ValidatedTModule> validate_tmodule(const TModuleSpec& spec, const Place& v, std::int64_t prec,
                                                 ValidationCertificate* cert) {
  ValidationCertificate local;
  ValidationCertificate& out = cert ? *cert : local;
  out = {};
  bool ok = spec.validation_points.size() >= 3;
  for (const auto& u : spec.validation_points) {
    std::int64_t agree = -1;
    try {
      if (!domain_check(spec.index, u, DomainTag::ConvV, v)) throw DomainError("validation point outside ConvV");
      const auto log = log_eval(spec, spec.point_for(u), v, prec);
      agree = diff_ord(log.value[spec.readout - 1], cmspl_eval(spec.index, u, v, prec));
    } catch (const Error&) {
      agree = -1;
    }
    out.agreement.push_back(agree);
    if (agree < prec) ok = false;
  }
  out.passed = ok;
  if (!ok) return std::nullopt;
  return ValidatedTModule(spec, false);
}

ValidatedTModule trust_unvalidated(const TModuleSpec& spec) { return ValidatedTModule(spec, true); }

ExtendedValue extended_cmspl_v(const ValidatedTModule& tm, const ArgTuple& u, const Place& v, std::int64_t prec,
                               const std::optional<PolyA>& extra_factor) {
  const TModuleSpec& spec = tm.spec();
  if (!domain_check(spec.index, u, DomainTag::DefV, v)) throw DomainError("arguments outside the extended domain");
  const Code x = spec.ctx->neg(v.lambda());
  PolyA a = residue_annihilator(spec, v).a;
  if (extra_factor) {
    if (extra_factor->eval(x) == 0) throw DomainError("extra annihilator factor is divisible by the uniformizer");
    a = a * *extra_factor;
  }
  const auto w = tm_action(spec, a, spec.point_for(u));
  for (const auto& c : w) {
    if (!c.is_zero() && v.ord(c) < 1) throw AnnihilationFailure("φ_a(point) has a v-unit coordinate");
  }
  const auto inv = inverse(d_action(spec, a));
  if (!inv) throw SingularStep("d[a] is not invertible");
  const int row = spec.readout - 1;
  std::int64_t m = 0;
  for (int k = 0; k < spec.dimension; ++k) {
    if (!(*inv)(row, k).is_zero()) m = std::min(m, v.ord((*inv)(row, k)));
  }
  const auto log = log_eval(spec, w, v, prec - m);
  LocalNum acc = LocalNum::zero_to(v, prec);
  for (int k = 0; k < spec.dimension; ++k) {
    const RatK& e = (*inv)(row, k);
    if (e.is_zero()) continue;
    acc += embed_abs(e, v, prec + 1) * log.value[k];
  }
  return {acc.truncate(prec), std::move(a), log.terms};
}

}  // namespace vmz
