#include "vmz/polykt.hpp"

#include <algorithm>

#include "vmz/error.hpp"
#include "vmz/expr.hpp"

namespace vmz {

PolyKT::PolyKT(const FqContext& ctx, std::vector<RatK> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) {
  strip();
}

void PolyKT::strip() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

PolyKT PolyKT::constant(const RatK& c) { return PolyKT(c.ctx(), {c}); }

PolyKT PolyKT::t_power(const FqContext& ctx, std::size_t k) {
  std::vector<RatK> c(k + 1, RatK(ctx));
  c[k] = RatK::one(ctx);
  return PolyKT(ctx, std::move(c));
}

PolyKT PolyKT::one_minus(const RatK& c, std::size_t n) {
  PolyKT base(c.ctx(), {RatK::one(c.ctx()), -c});
  return base.pow(n);
}

PolyKT PolyKT::operator+(const PolyKT& o) const {
  std::vector<RatK> r(std::max(c_.size(), o.c_.size()), RatK(*ctx_));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return PolyKT(*ctx_, std::move(r));
}

PolyKT PolyKT::operator-() const {
  std::vector<RatK> r;
  for (const auto& c : c_) r.push_back(-c);
  return PolyKT(*ctx_, std::move(r));
}

PolyKT PolyKT::operator-(const PolyKT& o) const { return *this + (-o); }

PolyKT PolyKT::operator*(const PolyKT& o) const {
  if (is_zero() || o.is_zero()) return PolyKT(*ctx_);
  std::vector<RatK> r(c_.size() + o.c_.size() - 1, RatK(*ctx_));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (!o.c_[j].is_zero()) r[i + j] += c_[i] * o.c_[j];
    }
  }
  return PolyKT(*ctx_, std::move(r));
}

PolyKT PolyKT::scale(const RatK& c) const {
  std::vector<RatK> r;
  for (const auto& x : c_) r.push_back(x * c);
  return PolyKT(*ctx_, std::move(r));
}

PolyKT PolyKT::pow(std::size_t n) const {
  PolyKT r = constant(RatK::one(*ctx_));
  PolyKT b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return r;
}

PolyKT PolyKT::twist(unsigned n) const {
  std::vector<RatK> r;
  for (const auto& x : c_) r.push_back(x.frobenius(n));
  return PolyKT(*ctx_, std::move(r));
}

RatK PolyKT::eval(const RatK& t) const {
  RatK acc(*ctx_);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
  return acc;
}

TSeries PolyKT::to_tseries(const Place& place, std::int64_t order, std::int64_t cap) const {
  TSeries r(place, order, cap);
  for (std::size_t i = 0; i < c_.size() && static_cast<std::int64_t>(i) < order; ++i) {
    r.set(static_cast<std::int64_t>(i), embed_abs(c_[i], place, cap));
  }
  return r;
}

std::string PolyKT::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const RatK& c = c_[i];
    if (c.is_zero()) continue;
    if (!out.empty()) out += "+";
    std::string cs = c.to_string();
    if (i == 0) {
      out += cs;
      continue;
    }
    const bool simple = c.is_polynomial() && c.num().num_terms() == 1;
    if (!c.is_one()) out += (simple ? cs : "(" + cs + ")") + "*";
    out += "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

struct KtAlgebra {
  using Value = PolyKT;
  const FqContext* c;
  const FqContext& ctx() const { return *c; }
  Value from_fq(Code x) const { return PolyKT::constant(RatK(PolyA::constant(*c, x))); }
  Value symbol(const std::string& name) const {
    if (name == "T") return PolyKT::constant(RatK::theta(*c));
    if (name == "t") return PolyKT::t_power(*c, 1);
    throw ParseError("unknown symbol '" + name + "' in k[t] polynomial");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const {
    if (b.degree() != 0) throw ParseError("division in k[t] only by nonzero elements of k");
    return a.scale(b.coeff(0).inv());
  }
  Value pow(const Value& a, std::int64_t n) const {
    if (n < 0) {
      if (a.degree() != 0) throw ParseError("negative power of a non-constant");
      return PolyKT::constant(a.coeff(0).pow(n));
    }
    return a.pow(static_cast<std::size_t>(n));
  }
};

}  // namespace

PolyKT PolyKT::parse(const FqContext& ctx, std::string_view s) {
  return parse_expression(KtAlgebra{&ctx}, s);
}

}  // namespace vmz
