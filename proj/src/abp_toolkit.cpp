#include "vmz/abp_toolkit.hpp"

#include <algorithm>

#include "vmz/error.hpp"
#include "vmz/linalg.hpp"

namespace vmz {

namespace {

// -log_q |r|_v
std::int64_t ordv(const RatK& r, const Place& v) { return v.ord(r); }

PolyA theta_minus_lambda(const Place& v) {
  // θ = ϖ - λ, as a polynomial in ϖ.
  return PolyA(v.ctx(), {v.ctx().neg(v.lambda()), 1});
}

}  // namespace

std::string qpow_string(std::int64_t e) { return "q^" + std::to_string(e); }

RvElem::RvElem(const FqContext& ctx_, std::vector<Code> coeffs) : ctx(&ctx_), c(std::move(coeffs)) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

RatK RvElem::to_ratk(const Place& v) const {
  if (is_zero()) return RatK(*ctx);
  const int D = degree();
  const PolyA w = v.uniformizer();
  // Σ c_j ϖ^{-j} = (Σ c_j ϖ^{D-j}) / ϖ^D
  PolyA rev(*ctx);
  for (int j = 0; j <= D; ++j) rev += PolyA::constant(*ctx, c[j]) * w.pow(static_cast<std::uint64_t>(D - j));
  return RatK(rev, w.pow(static_cast<std::uint64_t>(D)));
}

RvElem RvElem::from_ratk(const RatK& r, const Place& v) {
  const FqContext& ctx = r.ctx();
  if (r.is_zero()) return RvElem(ctx, {});
  if (v.is_infinite()) throw DomainError("R_v needs a finite place");
  const int M = r.den().degree();
  if (r.den() != v.uniformizer().pow(static_cast<std::uint64_t>(M)) || r.num().degree() > M) {
    throw DomainError("element has a pole away from v: " + r.to_string());
  }
  // num as a polynomial in ϖ: d_j ϖ^j; r = Σ d_j ϖ^{j-M}.
  const PolyA d = r.num().compose(theta_minus_lambda(v));
  std::vector<Code> c(static_cast<std::size_t>(M) + 1, 0);
  for (int j = 0; j <= d.degree(); ++j) c[static_cast<std::size_t>(M - j)] = d.coeff(j);
  return RvElem(ctx, c);
}

std::string RvElem::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int j = degree(); j >= 0; --j) {
    if (c[j] == 0) continue;
    if (!out.empty()) out += " + ";
    const std::string cs = format_coeff(*ctx, c[j]);
    if (j == 0) {
      out += cs;
    } else {
      out += (c[j] == 1 ? "" : cs + "*") + "v^-" + std::to_string(j);
    }
  }
  return out;
}

std::int64_t sup_norm_disk(const PolyKT& f, const Place& v, std::int64_t rho) {
  if (f.is_zero()) throw DomainError("sup norm of the zero polynomial");
  std::int64_t best = -kInfPrec;
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeff(i).is_zero()) continue;
    best = std::max(best, -ordv(f.coeff(i), v) + i * rho);
  }
  return best;
}

PolyKT FactoredPoly::expand() const {
  const FqContext& ctx = lambda.ctx();
  PolyKT p = PolyKT::constant(lambda) * PolyKT::t_power(ctx, static_cast<std::size_t>(zeros_at_origin));
  for (const auto& w : roots) p = p * PolyKT::one_minus(w.inv(), 1);
  return p;
}

std::int64_t sup_norm_disk_factored(const FactoredPoly& f, const Place& v, std::int64_t rho) {
  if (f.lambda.is_zero()) throw DomainError("factored form needs a nonzero constant");
  std::int64_t e = -ordv(f.lambda, v) + f.zeros_at_origin * rho;
  for (const auto& w : f.roots) {
    if (w.is_zero()) throw DomainError("zeros at the origin are counted separately");
    const std::int64_t absw = -ordv(w, v);
    if (absw < rho) e += rho - absw;
  }
  return e;
}

NormReport norm_bound_checks(const RvElem& x, const Place& v) {
  if (x.is_zero()) throw DomainError("norm bounds need x != 0");
  NormReport r{x.degree(), -ordv(x.to_ratk(v), v)};
  if (r.size < 0) throw AssertionFailure("‖x‖ < 1 for a nonzero element of R_v");
  if (r.value < 0) throw AssertionFailure("|x| < 1 for a nonzero element of R_v");
  return r;
}

LiouvilleReport liouville_check(const std::vector<PolyA>& f, const RatK& lam, int mu, const Place& v) {
  if (lam.is_zero()) throw DomainError("the root must be nonzero");
  if (mu < 1) throw DomainError("multiplicity must be positive");
  const FqContext& ctx = lam.ctx();
  std::vector<RatK> g;
  for (const auto& a : f) g.push_back(RatK(a));
  while (!g.empty() && g.back().is_zero()) g.pop_back();
  if (g.empty()) throw DomainError("f vanishes identically");
  // Divide by (z - λ) μ times; each remainder must vanish.
  for (int k = 0; k < mu; ++k) {
    if (g.size() < 2) throw RootCheckFailed("λ is not a root of the claimed multiplicity");
    std::vector<RatK> q(g.size() - 1, RatK(ctx));
    RatK carry(ctx);
    for (std::size_t i = g.size(); i-- > 1;) {
      carry = g[i] + carry * lam;
      q[i - 1] = carry;
    }
    if (!(g[0] + carry * lam).is_zero()) throw RootCheckFailed("λ is not a root of the claimed multiplicity");
    g = std::move(q);
  }
  int M = 0;
  for (const auto& a : f) M = std::max(M, a.degree());
  std::int64_t maxnorm = -kInfPrec;
  for (const auto& a : f) {
    if (a.is_zero()) continue;
    maxnorm = std::max<std::int64_t>(maxnorm, M - v.ord(a));
  }
  LiouvilleReport r{};
  r.lhs = -static_cast<std::int64_t>(mu) * ordv(lam, v);
  r.rhs = -maxnorm;
  r.holds = r.lhs >= r.rhs;
  r.scale = M;
  return r;
}

BallCount norm_ball_count(const Place& v, int n, std::uint64_t budget) {
  if (n < 0) throw DomainError("n must be >= 0");
  const std::uint64_t q = v.q();
  // Enumerate all of degree <= n+1 and keep those of norm <= q^n.
  std::uint64_t total = 1;
  for (int i = 0; i < n + 2; ++i) {
    total *= q;
    if (total > budget) throw TooLarge("enumeration exceeds the budget");
  }
  std::uint64_t count = 0;
  std::vector<Code> digits(static_cast<std::size_t>(n) + 2, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t k = idx;
    for (auto& d : digits) {
      d = static_cast<Code>(k % q);
      k /= q;
    }
    const RvElem x(v.ctx(), digits);
    if (x.is_zero() || -ordv(x.to_ratk(v), v) <= n) ++count;
  }
  std::uint64_t formula = 1;
  for (int i = 0; i < n + 1; ++i) formula *= q;
  return {count, formula};
}

RvMatrix parse_rv_matrix(const Place& v, const std::vector<std::vector<std::string>>& entries) {
  RvMatrix m;
  for (const auto& row : entries) {
    std::vector<RvPoly> r;
    for (const auto& e : row) {
      const PolyKT p = PolyKT::parse(v.ctx(), e);
      RvPoly rp;
      for (int i = 0; i <= p.degree(); ++i) rp.push_back(RvElem::from_ratk(p.coeff(i), v));
      r.push_back(rp);
    }
    m.push_back(r);
  }
  return m;
}

std::int64_t rv_norm(const RvMatrix& m) {
  std::int64_t n = -1;
  for (const auto& row : m) {
    for (const auto& e : row) {
      for (const auto& c : e) n = std::max<std::int64_t>(n, c.degree());
    }
  }
  return n;
}

namespace {

PolyKT to_polykt(const RvPoly& p, const Place& v) {
  std::vector<RatK> c;
  for (const auto& x : p) c.push_back(x.to_ratk(v));
  return PolyKT(v.ctx(), c);
}

std::int64_t solution_norm(const std::vector<RvPoly>& x) {
  std::int64_t n = -1;
  for (const auto& e : x) {
    for (const auto& c : e) n = std::max<std::int64_t>(n, c.degree());
  }
  return n;
}

}  // namespace

SmallSolution small_solution(const Place& v, const RvMatrix& M, std::int64_t c, int e) {
  const std::size_t r = M.size();
  if (r == 0) throw DomainError("empty matrix");
  const std::size_t s = M[0].size();
  for (const auto& row : M) {
    if (row.size() != s) throw DomainError("ragged matrix");
  }
  if (r >= s) throw DomainError("small_solution needs r < s");
  if (c < 1) throw DomainError("C must exceed 1");
  if (e < 0) throw DomainError("degree budget must be >= 0");
  if (rv_norm(M) >= c) throw DomainError("‖M‖ must be below C");
  const FqContext& ctx = v.ctx();
  // ‖x‖ = q^J < C^{r/(s-r)}  ⇔  J·(s-r) < c·r.
  const std::int64_t num = c * static_cast<std::int64_t>(r), den = static_cast<std::int64_t>(s - r);
  const std::int64_t J = (num - 1) / den;
  std::size_t d = 0;
  for (const auto& row : M) {
    for (const auto& entry : row) d = std::max(d, entry.empty() ? 0 : entry.size() - 1);
  }
  const std::int64_t degM = std::max<std::int64_t>(rv_norm(M), 0);
  const std::size_t nj = static_cast<std::size_t>(J) + 1, nm = static_cast<std::size_t>(e) + 1;
  const std::size_t ncols = s * nj * nm;
  const std::size_t tdeg = d + static_cast<std::size_t>(e) + 1, pdeg = static_cast<std::size_t>(J + degM) + 1;
  auto col = [&](std::size_t i, std::size_t j, std::size_t m) { return (i * nj + j) * nm + m; };
  auto row_of = [&](std::size_t k, std::size_t t, std::size_t l) { return (k * tdeg + t) * pdeg + l; };
  std::vector<FqRow> rows(r * tdeg * pdeg, FqRow(ncols, 0));
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < s; ++i) {
      const RvPoly& a = M[k][i];
      for (std::size_t p = 0; p < a.size(); ++p) {
        for (std::size_t l = 0; l < a[p].c.size(); ++l) {
          const Code coef = a[p].c[l];
          if (coef == 0) continue;
          for (std::size_t j = 0; j < nj; ++j) {
            for (std::size_t m = 0; m < nm; ++m) {
              Code& cell = rows[row_of(k, p + m, l + j)][col(i, j, m)];
              cell = ctx.add(cell, coef);
            }
          }
        }
      }
    }
  }
  const auto ker = fq_kernel(ctx, rows, ncols);
  if (ker.empty()) throw NoSolutionInBudget("no kernel vector inside the norm ball; raise the degree budget");
  const FqRow& z = ker[0];
  SmallSolution sol;
  for (std::size_t i = 0; i < s; ++i) {
    RvPoly xi;
    for (std::size_t m = 0; m < nm; ++m) {
      std::vector<Code> cs(nj, 0);
      for (std::size_t j = 0; j < nj; ++j) cs[j] = z[col(i, j, m)];
      xi.emplace_back(ctx, cs);
    }
    while (!xi.empty() && xi.back().is_zero()) xi.pop_back();
    sol.x.push_back(xi);
  }
  sol.norm = solution_norm(sol.x);
  sol.bound_exponent = static_cast<double>(num) / static_cast<double>(den);
  return sol;
}

bool verify_small_solution(const Place& v, const RvMatrix& M, std::int64_t c, const SmallSolution& sol) {
  const std::size_t r = M.size(), s = M[0].size();
  if (sol.x.size() != s) return false;
  bool nonzero = false;
  for (const auto& e : sol.x) nonzero = nonzero || !e.empty();
  if (!nonzero) return false;
  for (std::size_t k = 0; k < r; ++k) {
    PolyKT acc(v.ctx());
    for (std::size_t i = 0; i < s; ++i) acc = acc + to_polykt(M[k][i], v) * to_polykt(sol.x[i], v);
    if (!acc.is_zero()) return false;
  }
  const std::int64_t n = solution_norm(sol.x);
  return n * static_cast<std::int64_t>(s - r) < c * static_cast<std::int64_t>(r);
}

}  // namespace vmz
