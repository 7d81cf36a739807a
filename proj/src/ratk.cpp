#include "vmz/ratk.hpp"

#include "vmz/error.hpp"
#include "vmz/expr.hpp"

namespace vmz {

RatK::RatK(PolyA num) : num_(std::move(num)), den_(PolyA::one(num_.ctx())) {}

RatK::RatK(PolyA num, PolyA den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DivisionByZero("zero denominator");
  if (num_.is_zero()) {
    den_ = PolyA::one(num_.ctx());
    return;
  }
  if (!den_.is_one()) {
    const PolyA g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
  }
  if (!den_.is_monic()) {
    const Code li = num_.ctx().inv(den_.coeffs().back());
    num_ = num_.scale(li);
    den_ = den_.scale(li);
  }
}

RatK RatK::operator+(const RatK& o) const {
  if (den_ == o.den_) return RatK(num_ + o.num_, den_);
  return RatK(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatK RatK::operator-(const RatK& o) const {
  if (den_ == o.den_) return RatK(num_ - o.num_, den_);
  return RatK(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatK RatK::operator-() const {
  RatK r(*this);
  r.num_ = -num_;
  return r;
}

RatK RatK::operator*(const RatK& o) const {
  if (is_polynomial() && o.is_polynomial()) return RatK(num_ * o.num_);
  return RatK(num_ * o.num_, den_ * o.den_);
}

RatK RatK::operator/(const RatK& o) const {
  if (o.is_zero()) throw DivisionByZero("division by zero in k");
  return RatK(num_ * o.den_, den_ * o.num_);
}

RatK RatK::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero in k");
  return RatK(den_, num_);
}

RatK RatK::pow(std::int64_t n) const {
  if (n < 0) return inv().pow(-n);
  RatK r = one(ctx());
  r.num_ = num_.pow(static_cast<std::uint64_t>(n));
  r.den_ = den_.pow(static_cast<std::uint64_t>(n));
  return r;
}

RatK RatK::frobenius(unsigned n) const {
  // Coprimality and monicity survive the Frobenius endomorphism.
  RatK r(*this);
  r.num_ = num_.frobenius(n);
  r.den_ = den_.frobenius(n);
  return r;
}

std::string RatK::to_string() const {
  if (is_polynomial()) return num_.to_string();
  std::string n = num_.to_string();
  std::string d = den_.to_string();
  if (num_.num_terms() > 1) n = "(" + n + ")";
  if (den_.num_terms() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

namespace {

struct RatAlgebra {
  using Value = RatK;
  const FqContext* c;
  const std::vector<Binding>* bindings;
  const FqContext& ctx() const { return *c; }
  Value from_fq(Code x) const { return RatK(PolyA::constant(*c, x)); }
  Value symbol(const std::string& name) const {
    if (name == "T") return RatK::theta(*c);
    if (bindings) {
      for (const auto& b : *bindings) {
        if (b.name == name) return b.value;
      }
    }
    throw ParseError("unknown symbol '" + name + "'");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const {
    if (b.is_zero()) throw ParseError("division by zero");
    return a / b;
  }
  Value pow(const Value& a, std::int64_t n) const {
    if (n < 0 && a.is_zero()) throw ParseError("zero to a negative power");
    return a.pow(n);
  }
};

}  // namespace

RatK RatK::parse(const FqContext& ctx, std::string_view s) {
  return parse_expression(RatAlgebra{&ctx, nullptr}, s);
}

RatK parse_ratk(const FqContext& ctx, std::string_view s, const std::vector<Binding>& bindings) {
  return parse_expression(RatAlgebra{&ctx, &bindings}, s);
}

RatK carlitz_action(const PolyA& a, const RatK& z) {
  const FqContext& ctx = z.ctx();
  const RatK th = RatK::theta(ctx);
  RatK acc(ctx);
  RatK w = z;  // w = C_{θ^j}(z)
  for (std::size_t j = 0; j < a.coeffs().size(); ++j) {
    if (j > 0) w = th * w + w.frobenius(1);
    const Code c = a.coeff(j);
    if (c != 0) acc += RatK(PolyA::constant(ctx, c)) * w;
  }
  return acc;
}

}  // namespace vmz
