#include "vmz/tseries.hpp"

#include <algorithm>

#include "vmz/error.hpp"

namespace vmz {

TSeries::TSeries(const Place& place, std::int64_t order, std::int64_t cap)
    : place_(place), cap_(cap), a_(static_cast<std::size_t>(std::max<std::int64_t>(order, 0)), LocalNum(place)) {}

TSeries TSeries::constant(const LocalNum& c, std::int64_t order, std::int64_t cap) {
  TSeries r(c.place(), order, cap);
  if (order > 0) r.set(0, c);
  return r;
}

TSeries TSeries::one(const Place& place, std::int64_t order, std::int64_t cap) {
  return constant(LocalNum::one(place, cap), order, cap);
}

TSeries TSeries::linear(const LocalNum& c0, const LocalNum& c1, std::int64_t order, std::int64_t cap) {
  TSeries r(c0.place(), order, cap);
  if (order > 0) r.set(0, c0);
  if (order > 1) r.set(1, c1);
  return r;
}

void TSeries::set(std::int64_t i, const LocalNum& c) {
  if (c.place() != place_) throw DomainError("coefficient from a different place");
  a_[static_cast<std::size_t>(i)] = c.truncate(cap_);
}

TSeries TSeries::operator+(const TSeries& o) const {
  if (place_ != o.place_) throw DomainError("series from different places");
  TSeries r(place_, std::min(order(), o.order()), std::min(cap_, o.cap_));
  for (std::int64_t i = 0; i < r.order(); ++i) r.set(i, coeff(i) + o.coeff(i));
  return r;
}

TSeries TSeries::operator-() const {
  TSeries r(place_, order(), cap_);
  for (std::int64_t i = 0; i < order(); ++i) r.a_[i] = -a_[i];
  return r;
}

TSeries TSeries::operator-(const TSeries& o) const { return *this + (-o); }

TSeries TSeries::operator*(const TSeries& o) const {
  if (place_ != o.place_) throw DomainError("series from different places");
  const std::int64_t d = std::min(order(), o.order());
  TSeries r(place_, d, std::min(cap_, o.cap_));
  for (std::int64_t k = 0; k < d; ++k) {
    LocalNum acc(place_);
    for (std::int64_t i = 0; i <= k; ++i) {
      const LocalNum& x = coeff(i);
      const LocalNum& y = o.coeff(k - i);
      if (x.is_exact_zero() || y.is_exact_zero()) continue;
      acc += (x * y).truncate(r.cap_);
    }
    r.set(k, acc);
  }
  return r;
}

TSeries TSeries::scale(const LocalNum& c) const {
  TSeries r(place_, order(), cap_);
  for (std::int64_t i = 0; i < order(); ++i) r.set(i, coeff(i) * c);
  return r;
}

TSeries TSeries::pow(std::uint64_t n) const {
  TSeries r = one(place_, order(), cap_);
  TSeries b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return r;
}

TSeries TSeries::shift(std::int64_t k) const {
  TSeries r(place_, order(), cap_);
  for (std::int64_t i = 0; i + k < order(); ++i) {
    if (i + k >= 0) r.a_[i + k] = a_[i];
  }
  return r;
}

TSeries TSeries::twist(unsigned n) const {
  TSeries r(place_, order(), cap_);
  for (std::int64_t i = 0; i < order(); ++i) r.a_[i] = a_[i].frobenius(n, cap_);
  return r;
}

TSeries TSeries::truncate(std::int64_t order, std::int64_t cap) const {
  TSeries r(place_, std::min(order, this->order()), std::min(cap, cap_));
  for (std::int64_t i = 0; i < r.order(); ++i) r.set(i, coeff(i));
  return r;
}

std::string TSeries::to_string() const {
  std::string out;
  for (std::int64_t i = 0; i < order(); ++i) {
    if (a_[i].is_exact_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + a_[i].to_string() + ") * t^" + std::to_string(i);
  }
  if (!out.empty()) out += " + ";
  return out + "O(t^" + std::to_string(order()) + ")";
}

std::string GaussNorm::to_string() const {
  switch (kind) {
    case Kind::Zero:
      return "0";
    case Kind::Exact:
      return "q^" + std::to_string(log_q);
    case Kind::LowerBound:
      return ">= q^" + std::to_string(log_q);
    case Kind::UpperBound:
      return "<= q^" + std::to_string(log_q);
  }
  return "";
}

GaussNorm gauss_norm(const TSeries& f) {
  std::int64_t known = kInfPrec, unknown = kInfPrec;
  for (const auto& c : f.coeffs()) {
    if (c.is_exact_zero()) continue;
    if (c.is_zero_to_precision()) {
      unknown = std::min(unknown, c.nu());
    } else {
      known = std::min(known, c.nu());
    }
  }
  if (known == kInfPrec && unknown == kInfPrec) return {0, GaussNorm::Kind::Zero};
  if (known == kInfPrec) return {-unknown, GaussNorm::Kind::UpperBound};
  if (unknown > known) return {-known, GaussNorm::Kind::Exact};
  return {-known, GaussNorm::Kind::LowerBound};
}

std::int64_t min_coeff_ord(const TSeries& f) {
  std::int64_t m = kInfPrec;
  for (const auto& c : f.coeffs()) {
    if (!c.is_exact_zero()) m = std::min(m, c.nu());
  }
  return m;
}

LocalNum eval_series(const TSeries& f, const LocalNum& x, const std::optional<DecayBound>& decay) {
  const Place& pl = f.place();
  if (f.order() == 0) throw DomainError("evaluating an empty series");
  if (x.is_exact_zero()) return f.coeff(0);
  const std::int64_t ox = x.nu();
  const std::int64_t d = f.order();
  std::int64_t tail;
  if (decay) {
    tail = kInfPrec;
    const std::int64_t last = std::max(d, decay->crossover);
    for (std::int64_t i = d; i <= last; ++i) tail = std::min(tail, decay->ord_lower(i) + i * ox);
  } else {
    if (ox <= 0 || !x.valuation().exact) {
      throw DecayNotCertified("evaluation at |x| >= 1 needs an explicit decay bound");
    }
    const std::int64_t b = min_coeff_ord(f);
    tail = b >= kInfPrec ? kInfPrec : b + d * ox;
  }
  LocalNum acc(pl);
  LocalNum xp = LocalNum::one(pl, std::max<std::int64_t>(x.window(), 1));
  for (std::int64_t i = 0; i < d; ++i) {
    if (i > 0) xp = xp * x;
    const LocalNum& a = f.coeff(i);
    if (a.is_exact_zero()) continue;
    if (decay && a.is_zero_to_precision()) {
      const std::int64_t lo = decay->ord_lower(i);
      if (lo > a.abs_precision()) {
        acc += LocalNum::zero_to(pl, lo) * xp;
        continue;
      }
    }
    acc += a * xp;
  }
  if (tail < kInfPrec) acc = acc + LocalNum::zero_to(pl, tail);
  return acc;
}

}  // namespace vmz
