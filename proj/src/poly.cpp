#include "vmz/poly.hpp"

#include <algorithm>

#include "vmz/error.hpp"
#include "vmz/expr.hpp"

namespace vmz {

PolyA::PolyA(const FqContext& ctx, std::vector<Code> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) {
  strip();
}

void PolyA::strip() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyA PolyA::constant(const FqElem& c) { return constant(c.ctx(), c.code()); }

PolyA PolyA::constant(const FqContext& ctx, Code c) { return PolyA(ctx, {c}); }

PolyA PolyA::from_int(const FqContext& ctx, std::int64_t n) {
  return constant(ctx, ctx.from_int(n));
}

PolyA PolyA::monomial(const FqContext& ctx, Code c, std::size_t k) {
  if (c == 0) return PolyA(ctx);
  std::vector<Code> v(k + 1, 0);
  v[k] = c;
  return PolyA(ctx, std::move(v));
}

std::size_t PolyA::num_terms() const {
  return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](Code c) { return c != 0; }));
}

PolyA PolyA::operator+(const PolyA& o) const {
  std::vector<Code> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->add(coeff(i), o.coeff(i));
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::operator-(const PolyA& o) const {
  std::vector<Code> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->sub(coeff(i), o.coeff(i));
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::operator-() const {
  std::vector<Code> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->neg(c_[i]);
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::operator*(const PolyA& o) const {
  if (is_zero() || o.is_zero()) return PolyA(*ctx_);
  std::vector<Code> r(c_.size() + o.c_.size() - 1);
  convolve(*ctx_, c_.data(), c_.size(), o.c_.data(), o.c_.size(), r.data(), r.size());
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::scale(Code c) const {
  std::vector<Code> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->mul(c_[i], c);
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::shift(std::size_t k) const {
  if (is_zero()) return *this;
  std::vector<Code> r(k, 0);
  r.insert(r.end(), c_.begin(), c_.end());
  return PolyA(*ctx_, std::move(r));
}

PolyA PolyA::monic() const {
  if (is_zero()) return *this;
  return scale(ctx_->inv(c_.back()));
}

PolyA PolyA::pow(std::uint64_t n) const {
  PolyA r = one(*ctx_), b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return r;
}

PolyA PolyA::frobenius(unsigned n) const {
  if (n == 0 || is_zero()) return *this;
  std::uint64_t qn = 1;
  for (unsigned i = 0; i < n; ++i) {
    qn *= ctx_->q();
    if (qn * static_cast<std::uint64_t>(degree() + 1) > (std::uint64_t{1} << 28)) {
      throw TooLarge("Frobenius twist of polynomial too large");
    }
  }
  std::vector<Code> r(static_cast<std::size_t>(degree()) * qn + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * qn] = c_[i];
  return PolyA(*ctx_, std::move(r));
}

Code PolyA::eval(Code x) const {
  Code acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = ctx_->add(ctx_->mul(acc, x), c_[i]);
  return acc;
}

PolyA PolyA::compose(const PolyA& g) const {
  PolyA acc(*ctx_);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + constant(*ctx_, c_[i]);
  return acc;
}

std::string format_coeff(const FqContext& ctx, Code c) {
  if (ctx.in_prime_field(c)) return std::to_string(c);
  return "[" + ctx.format(c) + "]";
}

std::string PolyA::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Code c = c_[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += format_coeff(*ctx_, c);
      continue;
    }
    if (c != 1) out += format_coeff(*ctx_, c) + "*";
    out += "T";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

struct PolyAlgebra {
  using Value = PolyA;
  const FqContext* c;
  const FqContext& ctx() const { return *c; }
  Value from_fq(Code x) const { return PolyA::constant(*c, x); }
  Value symbol(const std::string& name) const {
    if (name == "T") return PolyA::theta(*c);
    throw ParseError("unknown symbol '" + name + "' in polynomial");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const {
    auto [qt, r] = divmod(a, b);
    if (!r.is_zero()) throw ParseError("non-exact division in polynomial");
    return qt;
  }
  Value pow(const Value& a, std::int64_t n) const {
    if (n < 0) throw ParseError("negative exponent in polynomial");
    return a.pow(static_cast<std::uint64_t>(n));
  }
};

}  // namespace

PolyA PolyA::parse(const FqContext& ctx, std::string_view s) {
  return parse_expression(PolyAlgebra{&ctx}, s);
}

std::pair<PolyA, PolyA> divmod(const PolyA& f, const PolyA& g) {
  if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
  const FqContext& ctx = f.ctx();
  if (f.degree() < g.degree()) return {PolyA(ctx), f};
  std::vector<Code> r = f.coeffs();
  const int dg = g.degree();
  const Code inv_lead = ctx.inv(g.coeffs().back());
  std::vector<Code> qt(static_cast<std::size_t>(f.degree() - dg + 1), 0);
  const auto& gc = g.coeffs();
  for (int i = f.degree(); i >= dg; --i) {
    const Code c = ctx.mul(r[i], inv_lead);
    if (c == 0) continue;
    qt[i - dg] = c;
    for (int j = 0; j <= dg; ++j) {
      r[i - dg + j] = ctx.sub(r[i - dg + j], ctx.mul(c, gc[j]));
    }
  }
  return {PolyA(ctx, std::move(qt)), PolyA(ctx, std::move(r))};
}

PolyA gcd(const PolyA& f, const PolyA& g) {
  if (f.is_zero() && g.is_zero()) throw DivisionByZero("gcd(0, 0) is undefined");
  PolyA a = f, b = g;
  while (!b.is_zero()) {
    PolyA r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyA powmod(const PolyA& f, std::uint64_t n, const PolyA& m) {
  PolyA r = divmod(PolyA::one(f.ctx()), m).second;
  PolyA b = divmod(f, m).second;
  while (n > 0) {
    if (n & 1) r = divmod(r * b, m).second;
    n >>= 1;
    if (n > 0) b = divmod(b * b, m).second;
  }
  return r;
}

std::vector<PolyA> monic_enumerate(const FqContext& ctx, int d) {
  if (d < 0) throw DomainError("degree must be non-negative");
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) {
    count *= ctx.q();
    if (count > (std::uint64_t{1} << 26)) throw TooLarge("monic enumeration too large");
  }
  std::vector<PolyA> out;
  out.reserve(count);
  // Lexicographic by coefficient vector (c_{d-1}, ..., c_0).
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Code> c(d + 1, 0);
    std::uint64_t t = idx;
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<Code>(t % ctx.q());
      t /= ctx.q();
    }
    c[d] = 1;
    out.emplace_back(ctx, std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const PolyA& a, const PolyA& b) {
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    return std::lexicographical_compare(ca.rbegin(), ca.rend(), cb.rbegin(), cb.rend());
  });
  return out;
}

bool irreducible_test(const PolyA& f) {
  if (f.is_zero()) throw DomainError("irreducible_test of zero");
  const int n = f.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  const PolyA m = f.monic();
  const FqContext& ctx = f.ctx();
  const PolyA x = PolyA::theta(ctx);
  // powers[k] = θ^{q^k} mod m
  std::vector<PolyA> powers{divmod(x, m).second};
  for (int k = 1; k <= n; ++k) powers.push_back(powmod(powers.back(), ctx.q(), m));
  if (powers[n] != divmod(x, m).second) return false;
  int rest = n;
  for (int r = 2; r <= rest; ++r) {
    if (rest % r != 0) continue;
    while (rest % r == 0) rest /= r;
    if (!gcd(powers[n / r] - x, m).is_one()) return false;
  }
  return true;
}

}  // namespace vmz
