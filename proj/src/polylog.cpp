#include "vmz/polylog.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "vmz/error.hpp"
#include "vmz/satmath.hpp"

namespace vmz {

Index::Index(std::initializer_list<int> l) : Index(std::vector<int>(l)) {}

Index::Index(std::vector<int> v) : s(std::move(v)) {
  if (s.empty()) throw DomainError("index must have depth >= 1");
  for (int x : s) {
    if (x < 1) throw DomainError("index entries must be positive");
  }
}

int Index::weight() const {
  int w = 0;
  for (int x : s) w += x;
  return w;
}

Index Index::prefix(int len) const {
  return Index(std::vector<int>(s.begin(), s.begin() + len));
}

std::string Index::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

namespace {

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Index Index::parse(std::string_view text) {
  std::string t = trim(std::string(text));
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  std::vector<int> v;
  for (const auto& part : split_top_level(t)) {
    const std::string p = trim(part);
    if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad index entry '" + p + "'");
    }
    v.push_back(std::stoi(p));
  }
  try {
    return Index(std::move(v));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string args_to_string(const ArgTuple& u) {
  std::string out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) out += ',';
    out += u[i].to_string();
  }
  return out;
}

ArgTuple parse_args(const FqContext& ctx, std::string_view text) {
  ArgTuple u;
  for (const auto& part : split_top_level(text)) u.push_back(RatK::parse(ctx, trim(part)));
  return u;
}

bool domain_check(const Index& s, const ArgTuple& u, DomainTag tag, const Place& v) {
  if (static_cast<int>(u.size()) != s.depth()) return false;
  for (const auto& x : u) {
    if (x.is_zero()) return false;
  }
  const std::int64_t q = v.q();
  switch (tag) {
    case DomainTag::ConvInf:
      for (std::size_t i = 0; i < u.size(); ++i) {
        if ((q - 1) * u[i].degree() >= static_cast<std::int64_t>(s[i]) * q) return false;
      }
      return true;
    case DomainTag::ConvV:
      if (v.is_infinite()) return false;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (v.ord(u[i]) < (i == 0 ? 1 : 0)) return false;
      }
      return true;
    case DomainTag::DefV:
      if (v.is_infinite()) return false;
      for (const auto& x : u) {
        if (v.ord(x) < 0) return false;
      }
      return true;
  }
  return false;
}

PolyA L_factorial(const FqContext& ctx, int i) {
  PolyA l = PolyA::one(ctx);
  const PolyA th = PolyA::theta(ctx);
  for (int j = 1; j <= i; ++j) l *= th - th.frobenius(static_cast<unsigned>(j));
  return l;
}

std::int64_t ord_L_inv(const Place& place, int i) {
  if (!place.is_infinite()) return -i;
  std::int64_t o = 0;
  for (int j = 1; j <= i; ++j) o = sat_add(o, sat_qpow(place.q(), j));
  return o;
}

namespace {

// Π (1 - π^{m}) over the given exponents, to the given window.
LocalNum unit_product(const Place& place, const std::vector<std::int64_t>& ms, std::int64_t window) {
  LocalNum u = LocalNum::one(place, window);
  const Code minus_one = place.ctx().neg(1);
  for (std::int64_t m : ms) {
    if (m >= window) continue;
    u *= LocalNum::sparse(place, {{0, 1}, {m, minus_one}}, window);
  }
  return u;
}

}  // namespace

LocalNum L_inv_pow(const Place& place, int i, int s, std::int64_t abs_prec) {
  const std::int64_t e = sat_mul(ord_L_inv(place, i), s);
  if (abs_prec <= e) return LocalNum::zero_to(place, abs_prec);
  const std::int64_t window = abs_prec - e;
  // At v each factor is ϖ(1 - ϖ^{q^j-1}); at ∞ it is -w^{-q^j}(1 - w^{q^j-1}).
  std::vector<std::int64_t> ms;
  for (int j = 1; j <= i; ++j) ms.push_back(sat_qpow(place.q(), j) - 1);
  LocalNum u = unit_product(place, ms, window).inv().pow(static_cast<std::uint64_t>(s));
  if (place.is_infinite() && (static_cast<std::int64_t>(i) * s) % 2 == 1) u = -u;
  return u.shift(e);
}

LocalNum embed_frob(const RatK& u, const Place& place, int i, std::int64_t abs_prec) {
  if (u.is_zero()) return LocalNum::exact_zero(place);
  const std::int64_t o = place.ord(u);
  const std::int64_t qi = sat_qpow(place.q(), i);
  const std::int64_t lead = sat_mul(qi, o);
  if (lead >= abs_prec) return LocalNum::zero_to(place, abs_prec);
  if (qi >= kSatMax) throw TooLarge("Frobenius power out of range");
  const std::int64_t a = std::max(ceil_div(abs_prec, qi), o + 1);
  return embed_abs(u, place, a).frobenius(static_cast<unsigned>(i), abs_prec);
}

namespace {

std::int64_t require_positive_ord(const RatK& alpha, const Place& place) {
  if (alpha.is_zero()) throw DomainError("alpha must be nonzero");
  const std::int64_t o = place.ord(alpha);
  if (o < 1) throw DomainError("alpha must satisfy |alpha| < 1 at the place");
  return o;
}

// f ← f·(1 - c t), in place.
void mul_one_minus(std::vector<LocalNum>& f, const LocalNum& c) {
  for (std::size_t k = f.size(); k-- > 1;) f[k] = f[k] - c * f[k - 1];
}

TSeries from_coeffs(const Place& place, const std::vector<LocalNum>& c, std::int64_t cap) {
  TSeries out(place, static_cast<std::int64_t>(c.size()), cap);
  for (std::size_t i = 0; i < c.size(); ++i) out.set(static_cast<std::int64_t>(i), c[i]);
  return out;
}

}  // namespace

TSeries omega_product(const RatK& alpha, const Place& place, std::int64_t D, std::int64_t N) {
  const std::int64_t o = require_positive_ord(alpha, place);
  std::vector<LocalNum> c(static_cast<std::size_t>(D), LocalNum::exact_zero(place));
  if (D > 0) c[0] = LocalNum::one(place, N);
  // Factors with q^i·ord(α) >= N are ≡ 1 mod ϖ^N.
  for (int i = 1; sat_mul(sat_qpow(place.q(), i), o) < N; ++i) {
    mul_one_minus(c, embed_frob(alpha, place, i, N));
  }
  return from_coeffs(place, c, N);
}

DecayBound omega_decay(const RatK& alpha, const Place& place) {
  const std::int64_t o = require_positive_ord(alpha, place);
  const std::int64_t q = place.q();
  return DecayBound{[o, q](std::int64_t j) { return sat_mul(o, (sat_qpow(q, j + 1) - q) / (q - 1)); }, 0};
}

LocalNum pi_tilde(const RatK& alpha, const Place& place, std::int64_t N) {
  const std::int64_t o = require_positive_ord(alpha, place);
  LocalNum p = LocalNum::one(place, N);
  for (int i = 1;; ++i) {
    const std::int64_t e = sat_qpow(place.q(), i) - 1;
    if (sat_mul(e, o) >= N) break;
    p *= LocalNum::one(place, N) - embed_abs(alpha.pow(e), place, N);
  }
  return p.truncate(N);
}

LocalNum omega_at_inverse_power(const RatK& alpha, const Place& place, int N, std::int64_t prec) {
  if (N == 0) return pi_tilde(alpha, place, prec);
  require_positive_ord(alpha, place);
  if (N < 0) throw DomainError("negative twist");
  // The factor 1 - α^{q^N}·α^{-q^N} of the product is zero.
  const RatK a = alpha.frobenius(static_cast<unsigned>(N));
  if (!(RatK::one(alpha.ctx()) - a * a.inv()).is_zero()) throw AssertionFailure("vanishing factor is nonzero");
  return LocalNum::exact_zero(place);
}

namespace {

void check_eval_domain(const Index& s, const ArgTuple& u, const Place& place, bool star) {
  if (static_cast<int>(u.size()) != s.depth()) throw DomainError("argument count does not match the index");
  if (place.is_infinite()) {
    if (!domain_check(s, u, DomainTag::ConvInf, place)) {
      throw DomainError("arguments outside the ∞-adic convergence domain");
    }
    return;
  }
  if (!domain_check(s, u, DomainTag::ConvV, place)) {
    if (star && domain_check(s, u, DomainTag::DefV, place)) {
      throw DomainError("point requires extended domain (use the t-module route)");
    }
    throw DomainError(star ? "arguments outside ConvV; requires extended domain if |u_l| <= 1"
                           : "arguments outside the v-adic convergence domain");
  }
}

// Valuation of the i-th term u^{q^i}/L_i^s.
std::int64_t term_ord(const Place& place, std::int64_t o, int s, int i) {
  return sat_add(sat_mul(sat_qpow(place.q(), i), o), sat_mul(ord_L_inv(place, i), s));
}

// Sums Π_ℓ T_ℓ[i_ℓ] over chains i_1 > ... > i_r (or >=) with i_1 <= I.
template <class T, class Zero>
T chain_sum(const std::vector<std::vector<T>>& terms, bool star, Zero zero) {
  const std::size_t r = terms.size();
  std::vector<T> acc = terms[r - 1];
  for (std::size_t l = r - 1; l-- > 0;) {
    std::vector<T> next;
    T prefix = zero();
    for (std::size_t i = 0; i < terms[l].size(); ++i) {
      if (star) prefix += acc[i];
      next.push_back(terms[l][i] * prefix);
      if (!star) prefix += acc[i];
    }
    acc = std::move(next);
  }
  T total = zero();
  for (const auto& x : acc) total += x;
  return total;
}

LocalNum eval_chain(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec, bool star) {
  check_eval_domain(s, u, place, star);
  const int I = cmpl_truncation(s, u, place, prec);
  const int r = s.depth();
  if (I < 0) return LocalNum::zero_to(place, prec);
  std::vector<std::int64_t> o(r);
  std::int64_t low = 0;
  for (int l = 0; l < r; ++l) {
    o[l] = place.ord(u[l]);
    std::int64_t m = 0;
    for (int i = 0; i <= I; ++i) m = std::min(m, term_ord(place, o[l], s[l], i));
    low = sat_add(low, m);
  }
  for (int attempt = 0; attempt < 4; ++attempt) {
    const std::int64_t work = sat_add(prec, sat_add(-low, 4 * attempt));
    std::vector<std::vector<LocalNum>> terms(r);
    for (int l = 0; l < r; ++l) {
      for (int i = 0; i <= I; ++i) {
        const std::int64_t ou = sat_mul(sat_qpow(place.q(), i), o[l]);
        const std::int64_t ol = sat_mul(ord_L_inv(place, i), s[l]);
        if (sat_add(ou, ol) >= work) {
          terms[l].push_back(LocalNum::zero_to(place, work));
          continue;
        }
        terms[l].push_back(embed_frob(u[l], place, i, work - ol) * L_inv_pow(place, i, s[l], work - ou));
      }
    }
    LocalNum total = chain_sum(terms, star, [&] { return LocalNum::exact_zero(place); });
    total += LocalNum::zero_to(place, prec);
    if (total.abs_precision() >= prec) return total.truncate(prec);
  }
  throw PrecisionLoss("polylog evaluation lost precision");
}

RatK partial_chain(const Index& s, const ArgTuple& u, int I, bool star) {
  if (static_cast<int>(u.size()) != s.depth()) throw DomainError("argument count does not match the index");
  const FqContext& ctx = u[0].ctx();
  if (I < 0) return RatK(ctx);
  std::vector<std::vector<RatK>> terms(s.depth());
  for (int l = 0; l < s.depth(); ++l) {
    for (int i = 0; i <= I; ++i) {
      terms[l].push_back(u[l].frobenius(static_cast<unsigned>(i)) * RatK(L_factorial(ctx, i)).pow(-s[l]));
    }
  }
  return chain_sum(terms, star, [&] { return RatK(ctx); });
}

}  // namespace

int cmpl_truncation(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec) {
  const std::int64_t q = place.q();
  const std::int64_t o1 = place.ord(u[0]);
  if (place.is_infinite()) {
    // Each g_ℓ(i) = q^i o_ℓ + s_ℓ(q^{i+1}-q)/(q-1) increases with i on the
    // convergence domain, so the tail past i_1 is bounded by g_1(i_1) + Σ o_ℓ.
    std::int64_t rest = 0;
    for (int l = 1; l < s.depth(); ++l) rest = sat_add(rest, place.ord(u[l]));
    for (int i = 0;; ++i) {
      if (sat_add(term_ord(place, o1, s[0], i), rest) >= prec) return i - 1;
    }
  }
  // At v: q^{i_1}·ord(u_1) - wt·i_1, nondecreasing once q^i(q-1)ord(u_1) >= wt.
  const std::int64_t wt = s.weight();
  for (int i = 0;; ++i) {
    const std::int64_t qi = sat_qpow(q, i);
    const std::int64_t b = sat_add(sat_mul(qi, o1), -wt * i);
    if (b >= prec && sat_mul(sat_mul(qi, q - 1), o1) >= wt) return i - 1;
  }
}

LocalNum cmpl_eval(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec) {
  return eval_chain(s, u, place, prec, false);
}

LocalNum cmspl_eval(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec) {
  return eval_chain(s, u, place, prec, true);
}

RatK cmpl_partial(const Index& s, const ArgTuple& u, int I) { return partial_chain(s, u, I, false); }
RatK cmspl_partial(const Index& s, const ArgTuple& u, int I) { return partial_chain(s, u, I, true); }

std::vector<StarTerm> star_expand(const Index& s) {
  const int r = s.depth();
  std::vector<StarTerm> out;
  // Bit g of the mask merges positions g and g+1.
  for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
    std::vector<int> merged, blocks;
    int acc = s[0], len = 1;
    for (int g = 0; g + 1 < r; ++g) {
      if (mask & (1u << g)) {
        acc += s[g + 1];
        ++len;
      } else {
        merged.push_back(acc);
        blocks.push_back(len);
        acc = s[g + 1];
        len = 1;
      }
    }
    merged.push_back(acc);
    blocks.push_back(len);
    out.push_back(StarTerm{1, Index(merged), blocks});
  }
  return out;
}

ArgTuple merge_args(const ArgTuple& u, const std::vector<int>& blocks) {
  ArgTuple out;
  std::size_t pos = 0;
  for (int b : blocks) {
    RatK p = u.at(pos++);
    for (int j = 1; j < b; ++j) p *= u.at(pos++);
    out.push_back(p);
  }
  if (pos != u.size()) throw DomainError("merge pattern does not cover the arguments");
  return out;
}

// e_d(X) - D_d = Π_{a monic, deg d}(X - a), so 1 - e_d(X)/D_d = Π(1 - X/a)
// = 1 + Σ_i g_{q^i} X^{q^i} with g_{q^i} = -(-1)^{d-i}/(D_i·ℓ_{d-i}^{q^i}),
// where D_i = Π_{j<i}(θ^{q^i}-θ^{q^j}) and ℓ_m = Π_{j=1}^m(θ^{q^j}-θ).
// Logarithmic differentiation gives
//   p_k = -Σ_{q^i<k} g_{q^i} p_{k-q^i} - [k=1] g_1.
LocalNum power_sum_inf(const FqContext& ctx, int d, int k, std::int64_t prec) {
  if (d < 0 || k < 1) throw DomainError("power sum needs d >= 0 and k >= 1");
  const Place inf = Place::infinite(ctx);
  const std::int64_t q = ctx.q();
  std::vector<LocalNum> g;  // g[i] for q^i <= k, i <= d
  std::int64_t gmin = kSatMax;
  for (int i = 0; i <= d && sat_qpow(q, i) <= k; ++i) {
    const std::int64_t qi = sat_qpow(q, i);
    const std::int64_t ord = sat_add(sat_mul(i, qi), sat_mul(qi, (sat_qpow(q, d - i + 1) - q) / (q - 1)));
    gmin = std::min(gmin, ord);
    if (ord >= prec) {
      g.push_back(LocalNum::zero_to(inf, prec));
      continue;
    }
    std::vector<std::int64_t> ms;
    for (int j = 0; j < i; ++j) ms.push_back(qi - sat_qpow(q, j));
    for (int j = 1; j <= d - i; ++j) ms.push_back(sat_qpow(q, i + j) - qi);
    LocalNum v = unit_product(inf, ms, prec - ord).inv().shift(ord);
    if ((d - i) % 2 == 0) v = -v;
    g.push_back(v);
  }
  if (gmin >= prec) return LocalNum::zero_to(inf, prec);
  std::vector<LocalNum> p(static_cast<std::size_t>(k) + 1, LocalNum::exact_zero(inf));
  for (int n = 1; n <= k; ++n) {
    LocalNum acc = n == 1 ? -g[0] : LocalNum::exact_zero(inf);
    for (std::size_t i = 0; i < g.size() && sat_qpow(q, i) < n; ++i) {
      acc -= g[i] * p[static_cast<std::size_t>(n - sat_qpow(q, i))];
    }
    p[static_cast<std::size_t>(n)] = acc.truncate(prec);
  }
  return p[static_cast<std::size_t>(k)];
}

RatK power_sum_exact(const FqContext& ctx, int d, int k) {
  RatK sum(ctx);
  for (const auto& a : monic_enumerate(ctx, d)) sum += RatK(a).pow(-k);
  return sum;
}

LocalNum mzv_partial(const FqContext& ctx, const Index& s, int D_max, std::int64_t prec) {
  const Place inf = Place::infinite(ctx);
  std::vector<std::vector<LocalNum>> terms(s.depth());
  for (int l = 0; l < s.depth(); ++l) {
    for (int d = 0; d <= D_max; ++d) terms[l].push_back(power_sum_inf(ctx, d, s[l], prec));
  }
  LocalNum total = chain_sum(terms, false, [&] { return LocalNum::exact_zero(inf); });
  return (total + LocalNum::zero_to(inf, prec)).truncate(prec);
}

LocalNum mzv_inf(const FqContext& ctx, const Index& s, int D_max, std::int64_t prec) {
  const std::int64_t tail = sat_mul(D_max + 1, s[0]);
  const std::int64_t n = std::min(prec, tail);
  return mzv_partial(ctx, s, D_max, n);
}

RatK mzv_partial_exact(const FqContext& ctx, const Index& s, int D_max) {
  std::vector<std::vector<RatK>> terms(s.depth());
  for (int l = 0; l < s.depth(); ++l) {
    for (int d = 0; d <= D_max; ++d) terms[l].push_back(power_sum_exact(ctx, d, s[l]));
  }
  return chain_sum(terms, false, [&] { return RatK(ctx); });
}

namespace {

void check_deformation_domain(const Index& s, const ArgTuple& u, const Place& v) {
  if (v.is_infinite()) throw DomainError("deformation series live at a finite place");
  if (!domain_check(s, u, DomainTag::ConvV, v)) throw DomainError("deformation series need arguments in ConvV");
}

// Visits strictly decreasing chains i_1 > ... > i_r >= lo with i_1 <= hi.
void for_each_chain(int r, int lo, int hi, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> chain(r);
  std::function<void(int, int)> rec = [&](int l, int top) {
    if (l == r) {
      f(chain);
      return;
    }
    const int floor = lo + (r - 1 - l);
    for (int i = floor; i <= top; ++i) {
      chain[l] = i;
      rec(l + 1, i - 1);
    }
  };
  rec(0, hi);
}

}  // namespace

TSeries deformation_build(const Index& s, const ArgTuple& u, const Place& v, std::int64_t D, std::int64_t N) {
  check_deformation_domain(s, u, v);
  const int r = s.depth();
  const std::int64_t q = v.q();
  const std::int64_t o1 = v.ord(u[0]);
  // Summands with q^{i_1}·ord(u_1) >= N vanish mod ϖ^N; t-degree is at least i_1·s_1.
  int hi = -1;
  while (sat_mul(sat_qpow(q, hi + 1), o1) < N && (hi + 1) * static_cast<std::int64_t>(s[0]) < D) ++hi;

  // (t^i Π_{j>i}(1 - ϖ^{q^j} t))^e, memoized.
  std::map<std::pair<int, int>, TSeries> epow;
  auto factor = [&](int i, int e) -> const TSeries& {
    auto it = epow.find({i, e});
    if (it != epow.end()) return it->second;
    std::vector<LocalNum> c(static_cast<std::size_t>(D), LocalNum::exact_zero(v));
    if (D > 0) c[0] = LocalNum::one(v, N);
    for (int j = i + 1; sat_qpow(q, j) < N; ++j) mul_one_minus(c, LocalNum::monomial(v, 1, sat_qpow(q, j), N));
    TSeries base = from_coeffs(v, c, N).shift(i);
    return epow.emplace(std::make_pair(i, e), base.pow(static_cast<std::uint64_t>(e))).first->second;
  };

  TSeries total(v, D, N);
  for_each_chain(r, 0, hi, [&](const std::vector<int>& chain) {
    std::int64_t tdeg = 0;
    for (int l = 0; l < r; ++l) tdeg += static_cast<std::int64_t>(chain[l]) * s[l];
    if (tdeg >= D) return;
    LocalNum c = LocalNum::one(v, N);
    for (int l = 0; l < r; ++l) c *= embed_frob(u[l], v, chain[l], N);
    if (c.is_zero_to_precision() && c.nu() >= N) return;
    TSeries term = factor(chain[0], s[0]);
    for (int l = 1; l < r; ++l) term = term * factor(chain[l], s[l]);
    total += term.scale(c);
  });
  return total;
}

LocalNum deformation_summand_at(const Index& s, const ArgTuple& u, const Place& v, const std::vector<int>& chain,
                                int N_twist, std::int64_t prec) {
  check_deformation_domain(s, u, v);
  const int r = s.depth();
  if (static_cast<int>(chain.size()) != r) throw DomainError("chain length does not match the index");
  for (int l = 0; l < r; ++l) {
    if (chain[l] < 0 || (l > 0 && chain[l] >= chain[l - 1])) throw DomainError("chain must be strictly decreasing");
  }
  if (N_twist < 0) throw DomainError("negative twist");
  // t^i Π_{j>i}(1 - ϖ^{q^j} t) has the factor j = N at t = ϖ^{-q^N} when i < N.
  if (chain[r - 1] < N_twist) return LocalNum::exact_zero(v);
  const std::int64_t q = v.q();
  const std::int64_t Q = sat_qpow(q, N_twist);
  std::int64_t shift = 0, ord_u = 0;
  std::vector<std::int64_t> ou(r);
  for (int l = 0; l < r; ++l) {
    shift = sat_add(shift, -sat_mul(Q, static_cast<std::int64_t>(chain[l]) * s[l]));
    ou[l] = sat_mul(sat_qpow(q, chain[l]), v.ord(u[l]));
    ord_u = sat_add(ord_u, ou[l]);
  }
  if (sat_add(ord_u, shift) >= prec) return LocalNum::zero_to(v, prec);
  const std::int64_t need = prec - shift;  // absolute precision before the shift
  LocalNum U = LocalNum::one(v, need);
  for (int l = 0; l < r; ++l) U *= embed_frob(u[l], v, chain[l], need - (ord_u - ou[l]));
  const std::int64_t window = need - ord_u;
  LocalNum F = LocalNum::one(v, window);
  for (int l = 0; l < r; ++l) {
    std::vector<std::int64_t> ms;
    for (int j = chain[l] + 1; sat_qpow(q, j) - Q < window; ++j) ms.push_back(sat_qpow(q, j) - Q);
    F *= unit_product(v, ms, window).pow(static_cast<std::uint64_t>(s[l]));
  }
  return (U * F).shift(shift).truncate(prec);
}

std::int64_t specialization_shift(const Index& s, const Place& v, int N_twist) {
  return -sat_mul(sat_mul(N_twist, sat_qpow(v.q(), N_twist)), s.weight());
}

LocalNum deformation_specialize(const Index& s, const ArgTuple& u, const Place& v, int N_twist, std::int64_t prec) {
  check_deformation_domain(s, u, v);
  const int r = s.depth();
  const std::int64_t q = v.q();
  const std::int64_t Q = sat_qpow(q, N_twist);
  const std::int64_t o1 = v.ord(u[0]);
  const std::int64_t slope = sat_mul(s.weight(), Q);
  // Summand order >= q^{i_1}·ord(u_1) - wt·q^N·i_1.
  int hi = 0;
  for (int i = 0;; ++i) {
    const std::int64_t qi = sat_qpow(q, i);
    if (sat_add(sat_mul(qi, o1), -sat_mul(slope, i)) >= prec && sat_mul(sat_mul(qi, q - 1), o1) >= slope) {
      hi = i - 1;
      break;
    }
  }
  LocalNum total = LocalNum::zero_to(v, prec);
  for_each_chain(r, N_twist, hi, [&](const std::vector<int>& chain) {
    total += deformation_summand_at(s, u, v, chain, N_twist, prec);
  });
  return total;
}

}  // namespace vmz
