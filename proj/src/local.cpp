#include "vmz/local.hpp"

#include <algorithm>
#include <cctype>

#include "vmz/error.hpp"

namespace vmz {

namespace {

constexpr std::int64_t kMaxDigits = std::int64_t{1} << 26;

void check_size(std::int64_t n) {
  if (n > kMaxDigits) throw TooLarge("local expansion window too large");
}

// Saturating x * q^n for x >= 0 sized quantities; returns false on overflow.
bool mul_qpow(std::int64_t x, std::uint64_t q, unsigned n, std::int64_t* out) {
  __int128 v = x;
  for (unsigned i = 0; i < n; ++i) {
    v *= q;
    if (v > kInfPrec || v < -kInfPrec) return false;
  }
  *out = static_cast<std::int64_t>(v);
  return true;
}

// Inverse of a unit power series with w digits.
std::vector<Code> series_inverse(const FqContext& ctx, const std::vector<Code>& x) {
  const std::size_t w = x.size();
  std::vector<Code> y(w, 0);
  const Code y0 = ctx.inv(x[0]);
  y[0] = y0;
  if (ctx.e() == 1) {
    const std::uint64_t p = ctx.p();
    const Code ny0 = ctx.neg(y0);
    for (std::size_t k = 1; k < w; ++k) {
      std::uint64_t acc = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        acc += static_cast<std::uint64_t>(x[j]) * y[k - j];
        if ((j & 0xffff) == 0) acc %= p;
      }
      y[k] = static_cast<Code>(static_cast<std::uint64_t>(ny0) * (acc % p) % p);
    }
    return y;
  }
  for (std::size_t k = 1; k < w; ++k) {
    Code acc = 0;
    for (std::size_t j = 1; j <= k; ++j) acc = ctx.add(acc, ctx.mul(x[j], y[k - j]));
    y[k] = ctx.mul(ctx.neg(y0), acc);
  }
  return y;
}

}  // namespace

Place Place::finite(const FqContext& ctx, Code lambda) {
  if (lambda >= ctx.q()) throw DomainError("lambda must lie in F_q");
  return Place(ctx, PlaceKind::Finite, lambda);
}

Place Place::infinite(const FqContext& ctx) { return Place(ctx, PlaceKind::Infinite, 0); }

Place Place::from_uniformizer(const PolyA& w) {
  if (w.degree() != 1 || !w.is_monic()) {
    throw DomainError("only degree-one places θ+λ are supported, got " + w.to_string());
  }
  return finite(w.ctx(), w.coeff(0));
}

PolyA Place::uniformizer() const {
  if (is_infinite()) throw DomainError("the infinite place has no polynomial uniformizer");
  return PolyA(*ctx_, {lambda_, 1});
}

std::string Place::to_string() const {
  if (is_infinite()) return "inf";
  return "v(T+" + ctx_->format(lambda_) + ")";
}

std::int64_t Place::ord(const PolyA& f) const {
  if (f.is_zero()) throw DomainError("valuation of zero");
  if (is_infinite()) return -f.degree();
  std::vector<Code> c = f.coeffs();
  const Code a = ctx_->neg(lambda_);  // root of θ + λ
  std::int64_t k = 0;
  while (true) {
    // Synthetic division by (θ - a).
    const std::size_t n = c.size();
    std::vector<Code> b(n - 1);
    Code carry = 0;
    for (std::size_t i = n; i-- > 1;) {
      carry = ctx_->add(c[i], ctx_->mul(a, carry));
      b[i - 1] = carry;
    }
    const Code rem = ctx_->add(c[0], ctx_->mul(a, carry));
    if (rem != 0) return k;
    c = std::move(b);
    ++k;
  }
}

std::int64_t Place::ord(const RatK& r) const { return ord(r.num()) - ord(r.den()); }

std::string Valuation::to_string() const {
  if (infinite) return "inf";
  return exact ? std::to_string(value) : ">= " + std::to_string(value);
}

LocalNum LocalNum::zero_to(const Place& place, std::int64_t abs_prec) {
  LocalNum r(place);
  r.exact_zero_ = false;
  r.nu_ = abs_prec;
  return r;
}

LocalNum LocalNum::from_digits(const Place& place, std::int64_t nu, std::vector<Code> digits) {
  LocalNum r(place);
  r.exact_zero_ = false;
  r.nu_ = nu;
  r.d_ = std::move(digits);
  r.normalize();
  return r;
}

LocalNum LocalNum::constant(const Place& place, Code c, std::int64_t abs_prec) {
  return monomial(place, c, 0, abs_prec);
}

LocalNum LocalNum::monomial(const Place& place, Code c, std::int64_t k, std::int64_t abs_prec) {
  if (abs_prec <= k) return zero_to(place, abs_prec);
  check_size(abs_prec - k);
  std::vector<Code> d(static_cast<std::size_t>(abs_prec - k), 0);
  d[0] = c;
  return from_digits(place, k, std::move(d));
}

LocalNum LocalNum::sparse(const Place& place, const std::vector<std::pair<std::int64_t, Code>>& terms,
                          std::int64_t abs_prec) {
  std::int64_t lo = abs_prec;
  for (const auto& [k, c] : terms) {
    if (c != 0) lo = std::min(lo, k);
  }
  if (lo >= abs_prec) return zero_to(place, abs_prec);
  check_size(abs_prec - lo);
  std::vector<Code> d(static_cast<std::size_t>(abs_prec - lo), 0);
  const FqContext& ctx = place.ctx();
  for (const auto& [k, c] : terms) {
    if (k < abs_prec) d[k - lo] = ctx.add(d[k - lo], c);
  }
  return from_digits(place, lo, std::move(d));
}

void LocalNum::normalize() {
  if (exact_zero_) return;
  std::size_t z = 0;
  while (z < d_.size() && d_[z] == 0) ++z;
  if (z == 0) return;
  nu_ += static_cast<std::int64_t>(z);
  d_.erase(d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(z));
}

Valuation LocalNum::valuation() const {
  if (exact_zero_) return {kInfPrec, true, true};
  return {nu_, !d_.empty(), false};
}

Code LocalNum::digit(std::int64_t k) const {
  if (exact_zero_ || k < nu_) return 0;
  if (k >= abs_precision()) {
    throw PrecisionLoss("digit " + std::to_string(k) + " beyond precision " +
                        std::to_string(abs_precision()));
  }
  return d_[static_cast<std::size_t>(k - nu_)];
}

LocalNum LocalNum::operator+(const LocalNum& o) const {
  if (place_ != o.place_) throw DomainError("adding numbers from different places");
  if (exact_zero_) return o;
  if (o.exact_zero_) return *this;
  const std::int64_t n = std::min(abs_precision(), o.abs_precision());
  const std::int64_t lo = std::min(nu_, o.nu_);
  if (lo >= n) return zero_to(place_, n);
  check_size(n - lo);
  std::vector<Code> d(static_cast<std::size_t>(n - lo), 0);
  const FqContext& ctx = place_.ctx();
  for (std::size_t i = 0; i < d_.size() && nu_ + static_cast<std::int64_t>(i) < n; ++i) {
    d[nu_ - lo + i] = d_[i];
  }
  for (std::size_t i = 0; i < o.d_.size() && o.nu_ + static_cast<std::int64_t>(i) < n; ++i) {
    Code& t = d[o.nu_ - lo + i];
    t = ctx.add(t, o.d_[i]);
  }
  return from_digits(place_, lo, std::move(d));
}

LocalNum LocalNum::operator-() const {
  LocalNum r(*this);
  for (auto& c : r.d_) c = place_.ctx().neg(c);
  return r;
}

LocalNum LocalNum::operator-(const LocalNum& o) const { return *this + (-o); }

LocalNum LocalNum::operator*(const LocalNum& o) const {
  if (place_ != o.place_) throw DomainError("multiplying numbers from different places");
  if (exact_zero_ || o.exact_zero_) return exact_zero(place_);
  if (d_.empty() || o.d_.empty()) return zero_to(place_, nu_ + o.nu_);
  const std::size_t w = std::min(d_.size(), o.d_.size());
  std::vector<Code> d(w);
  convolve(place_.ctx(), d_.data(), std::min(w, d_.size()), o.d_.data(), std::min(w, o.d_.size()),
           d.data(), w);
  LocalNum r(place_);
  r.exact_zero_ = false;
  r.nu_ = nu_ + o.nu_;
  r.d_ = std::move(d);
  return r;
}

LocalNum LocalNum::inv() const {
  if (exact_zero_) throw DivisionByZero("inverse of exact zero");
  if (d_.empty()) {
    throw PrecisionLoss("inverse of a number known only to be O(" + std::string(1, place_.symbol()) +
                        "^" + std::to_string(nu_) + ")");
  }
  LocalNum r(place_);
  r.exact_zero_ = false;
  r.nu_ = -nu_;
  r.d_ = series_inverse(place_.ctx(), d_);
  return r;
}

LocalNum LocalNum::scale(Code c) const {
  if (exact_zero_) return *this;
  if (c == 0) return exact_zero(place_);
  LocalNum r(*this);
  for (auto& x : r.d_) x = place_.ctx().mul(x, c);
  return r;
}

LocalNum LocalNum::pow(std::uint64_t n) const {
  if (n == 0) return one(place_, std::max<std::int64_t>(window(), 1));
  LocalNum b = *this;
  while ((n & 1) == 0) {
    b = b * b;
    n >>= 1;
  }
  LocalNum r = b;
  n >>= 1;
  while (n > 0) {
    b = b * b;
    if (n & 1) r = r * b;
    n >>= 1;
  }
  return r;
}

LocalNum LocalNum::frobenius(unsigned n, std::int64_t abs_cap) const {
  if (exact_zero_) return *this;
  if (n == 0) return truncate(abs_cap);
  const std::uint64_t q = place_.q();
  std::int64_t new_nu = 0;
  if (!mul_qpow(nu_, q, n, &new_nu)) {
    if (nu_ > 0) return zero_to(place_, abs_cap);
    throw TooLarge("Frobenius twist overflows the valuation range");
  }
  if (d_.empty() || new_nu >= abs_cap) return zero_to(place_, std::min(new_nu, abs_cap));
  std::int64_t qn = 0;
  mul_qpow(1, q, n, &qn);
  std::int64_t full = 0;
  std::int64_t rel = abs_cap - new_nu;
  if (mul_qpow(window(), q, n, &full)) rel = std::min(rel, full);
  check_size(rel);
  std::vector<Code> d(static_cast<std::size_t>(rel), 0);
  for (std::size_t i = 0; i < d_.size(); ++i) {
    const __int128 pos = static_cast<__int128>(i) * qn;
    if (pos >= rel) break;
    d[static_cast<std::size_t>(pos)] = d_[i];
  }
  LocalNum r(place_);
  r.exact_zero_ = false;
  r.nu_ = new_nu;
  r.d_ = std::move(d);
  return r;
}

LocalNum LocalNum::truncate(std::int64_t abs_prec) const {
  if (exact_zero_ || abs_prec >= abs_precision()) return *this;
  if (abs_prec <= nu_) return zero_to(place_, abs_prec);
  LocalNum r(*this);
  r.d_.resize(static_cast<std::size_t>(abs_prec - nu_));
  return r;
}

LocalNum LocalNum::truncate_relative(std::int64_t window) const {
  if (exact_zero_ || d_.empty() || window >= this->window()) return *this;
  return truncate(nu_ + std::max<std::int64_t>(window, 0));
}

LocalNum LocalNum::shift(std::int64_t k) const {
  if (exact_zero_) return *this;
  LocalNum r(*this);
  r.nu_ += k;
  return r;
}

std::string LocalNum::to_string() const {
  if (exact_zero_) return "0";
  const char s = place_.symbol();
  std::string out;
  for (std::size_t i = 0; i < d_.size(); ++i) {
    const Code c = d_[i];
    if (c == 0) continue;
    const std::int64_t k = nu_ + static_cast<std::int64_t>(i);
    std::string term;
    if (k == 0) {
      term = format_coeff(place_.ctx(), c);
    } else {
      if (c != 1) term = format_coeff(place_.ctx(), c) + "*";
      term += std::string(1, s) + "^" + std::to_string(k);
    }
    if (!out.empty()) out += " + ";
    out += term;
  }
  if (!out.empty()) out += " + ";
  out += "O(" + std::string(1, s) + "^" + std::to_string(abs_precision()) + ")";
  return out;
}

LocalNum LocalNum::parse(const Place& place, std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s == "0") return exact_zero(place);
  // Split on '+' outside brackets and parentheses.
  std::vector<std::string> terms;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      terms.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  terms.push_back(cur);
  const std::string sym(1, place.symbol());
  const std::string big_o = "O(" + sym + "^";
  if (terms.back().rfind(big_o, 0) != 0 || terms.back().back() != ')') {
    throw ParseError("local number must end with " + big_o + "N)");
  }
  const std::string& last = terms.back();
  std::int64_t abs_prec = 0;
  try {
    abs_prec = std::stoll(last.substr(big_o.size(), last.size() - big_o.size() - 1));
  } catch (const std::exception&) {
    throw ParseError("bad precision in '" + last + "'");
  }
  std::vector<std::pair<std::int64_t, Code>> parsed;
  const FqContext& ctx = place.ctx();
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    const std::string& t = terms[i];
    std::string coef = "1";
    std::string mono = t;
    const std::size_t star = t.rfind('*');
    if (star != std::string::npos && t.compare(star + 1, 1, sym) == 0) {
      coef = t.substr(0, star);
      mono = t.substr(star + 1);
    } else if (t.rfind(sym, 0) != 0) {
      coef = t;
      mono.clear();
    }
    std::int64_t k = 0;
    if (!mono.empty()) {
      if (mono == sym) {
        k = 1;
      } else if (mono.rfind(sym + "^", 0) == 0) {
        try {
          k = std::stoll(mono.substr(2));
        } catch (const std::exception&) {
          throw ParseError("bad exponent in '" + t + "'");
        }
      } else {
        throw ParseError("bad term '" + t + "'");
      }
    }
    Code c;
    if (!coef.empty() && coef.front() == '[') {
      if (coef.back() != ']') throw ParseError("bad coefficient '" + coef + "'");
      c = ctx.parse(coef.substr(1, coef.size() - 2));
    } else {
      c = ctx.parse(coef);
    }
    if (k >= abs_prec) throw ParseError("term beyond stated precision: '" + t + "'");
    parsed.emplace_back(k, c);
  }
  return sparse(place, parsed, abs_prec);
}

bool agree_to(const LocalNum& x, const LocalNum& y, std::int64_t n) {
  const LocalNum d = x - y;
  return d.is_exact_zero() || d.nu() >= n;
}

std::int64_t diff_ord(const LocalNum& x, const LocalNum& y) {
  const LocalNum d = x - y;
  if (d.is_exact_zero()) return kInfPrec;
  return d.nu();
}

std::vector<Code> expansion_digits(const PolyA& f, const Place& place, std::int64_t count,
                                   std::int64_t* ord) {
  if (f.is_zero()) throw DomainError("expansion of zero");
  const FqContext& ctx = place.ctx();
  std::vector<Code> out;
  if (place.is_infinite()) {
    *ord = -f.degree();
    for (std::int64_t i = 0; i < count; ++i) {
      const std::int64_t k = f.degree() - i;
      out.push_back(k >= 0 ? f.coeff(static_cast<std::size_t>(k)) : 0);
    }
    return out;
  }
  // Taylor digits at -λ via repeated synthetic division.
  std::vector<Code> c = f.coeffs();
  const Code a = ctx.neg(place.lambda());
  std::int64_t k = 0;
  bool started = false;
  while (static_cast<std::int64_t>(out.size()) < count) {
    if (c.empty()) {
      out.push_back(0);
      continue;
    }
    const std::size_t n = c.size();
    std::vector<Code> b(n - 1);
    Code carry = 0;
    for (std::size_t i = n; i-- > 1;) {
      carry = ctx.add(c[i], ctx.mul(a, carry));
      b[i - 1] = carry;
    }
    const Code rem = ctx.add(c[0], ctx.mul(a, carry));
    c = std::move(b);
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (!started && rem == 0) {
      ++k;
      continue;
    }
    started = true;
    out.push_back(rem);
  }
  *ord = k;
  return out;
}

LocalNum embed(const RatK& r, const Place& place, std::int64_t window) {
  if (r.is_zero()) return LocalNum::exact_zero(place);
  window = std::max<std::int64_t>(window, 1);
  check_size(window);
  std::int64_t on = 0, od = 0;
  std::vector<Code> n = expansion_digits(r.num(), place, window, &on);
  if (r.den().is_one()) return LocalNum::from_digits(place, on, std::move(n));
  std::vector<Code> d = expansion_digits(r.den(), place, window, &od);
  const std::vector<Code> di = series_inverse(place.ctx(), d);
  std::vector<Code> out(static_cast<std::size_t>(window));
  convolve(place.ctx(), n.data(), n.size(), di.data(), di.size(), out.data(), out.size());
  return LocalNum::from_digits(place, on - od, std::move(out));
}

LocalNum embed_abs(const RatK& r, const Place& place, std::int64_t abs_prec) {
  if (r.is_zero()) return LocalNum::exact_zero(place);
  const std::int64_t o = place.ord(r);
  if (abs_prec <= o) return LocalNum::zero_to(place, abs_prec);
  return embed(r, place, abs_prec - o);
}

}  // namespace vmz
