#include "vmz/fq.hpp"

#include <cctype>
#include <deque>
#include <mutex>

#include "vmz/error.hpp"

namespace vmz {

namespace {

using Coeffs = std::vector<std::uint32_t>;

void strip(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b over Z/p.
Coeffs mod_monic(Coeffs a, const Coeffs& b, std::uint32_t p) {
  strip(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<std::uint32_t>(
          (a[shift + i] + (p - lead) * b[i]) % p);
    }
    strip(a);
  }
  return a;
}

bool irreducible_mod_p(const Coeffs& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return true;
  // Trial division by every monic polynomial of degree 1..n/2.
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Coeffs g(d + 1);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[d] = 1;
      if (mod_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

Coeffs default_modulus(std::uint32_t p, std::uint32_t e) {
  if (e == 1) return {0, 1};
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < e; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Coeffs f(e + 1);
    std::uint64_t t = idx;
    for (std::uint32_t i = 0; i < e; ++i) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    f[e] = 1;
    if (irreducible_mod_p(f, p)) return f;
  }
  throw DomainError("no irreducible polynomial found");
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::deque<FqContext>& registry() {
  static std::deque<FqContext> r;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const FqContext& FqContext::get(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
  if (e == 0) throw DomainError("extension degree must be at least 1");
  return get(p, e, default_modulus(p, e));
}

const FqContext& FqContext::get(std::uint32_t p, std::uint32_t e,
                                const std::vector<std::uint32_t>& modulus) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  for (const auto& ctx : registry()) {
    if (ctx.p_ == p && ctx.e_ == e && ctx.modulus_ == modulus) return ctx;
  }
  registry().emplace_back(p, e, modulus);
  return registry().back();
}

const FqContext& FqContext::for_q(std::uint64_t q) {
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    if (!is_prime(p)) break;
    std::uint32_t e = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++e;
    }
    if (t != 1) break;
    return get(static_cast<std::uint32_t>(p), e);
  }
  throw DomainError("q must be a prime power, got " + std::to_string(q));
}

FqContext::FqContext(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus)
    : p_(p), e_(e), modulus_(std::move(modulus)) {
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
  if (modulus_.size() != e + 1 || modulus_.back() != 1) {
    throw DomainError("modulus must be monic of degree e");
  }
  for (auto c : modulus_) {
    if (c >= p) throw DomainError("modulus coefficients must be reduced mod p");
  }
  if (e > 1 && !irreducible_mod_p(modulus_, p)) {
    throw DomainError("modulus is not irreducible over F_p");
  }
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) q *= p;
  if (q > (1u << 24)) throw DomainError("field too large");
  q_ = static_cast<std::uint32_t>(q);
  if (e > 1 && q_ <= 256) {
    mul_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (Code a = 0; a < q_; ++a) {
      for (Code b = 0; b < q_; ++b) mul_table_[a * q_ + b] = mul_slow(a, b);
    }
  }
  if (q_ <= 65536) {
    inv_table_.assign(q_, 0);
    for (Code a = 1; a < q_; ++a) inv_table_[a] = pow(a, q_ - 2);
  }
}

Code FqContext::add(Code a, Code b) const {
  if (e_ == 1) {
    const Code s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Code r = 0, pw = 1;
  while (a != 0 || b != 0) {
    Code d = a % p_ + b % p_;
    if (d >= p_) d -= p_;
    r += d * pw;
    pw *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

Code FqContext::neg(Code a) const {
  if (e_ == 1) return a == 0 ? 0 : p_ - a;
  Code r = 0, pw = 1;
  while (a != 0) {
    const Code d = a % p_;
    r += (d == 0 ? 0 : p_ - d) * pw;
    pw *= p_;
    a /= p_;
  }
  return r;
}

Code FqContext::sub(Code a, Code b) const { return add(a, neg(b)); }

Code FqContext::mul_slow(Code a, Code b) const {
  const Coeffs ca = coords(a), cb = coords(b);
  Coeffs prod(2 * e_, 0);
  for (std::uint32_t i = 0; i < e_; ++i) {
    for (std::uint32_t j = 0; j < e_; ++j) {
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % p_);
    }
  }
  Coeffs r = mod_monic(prod, modulus_, p_);
  r.resize(e_, 0);
  return from_coords(r);
}

Code FqContext::mul(Code a, Code b) const {
  if (e_ == 1) return static_cast<Code>(static_cast<std::uint64_t>(a) * b % p_);
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  return mul_slow(a, b);
}

Code FqContext::pow(Code a, std::uint64_t n) const {
  Code r = 1;
  while (n > 0) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

Code FqContext::inv(Code a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in F_q");
  if (!inv_table_.empty()) return inv_table_[a];
  return pow(a, q_ - 2);
}

Code FqContext::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Code>(r);
}

Code FqContext::generator() const {
  if (e_ == 1) throw DomainError("x is only available for e > 1");
  return p_;
}

std::vector<std::uint32_t> FqContext::coords(Code a) const {
  Coeffs c(e_);
  for (std::uint32_t i = 0; i < e_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

Code FqContext::from_coords(const std::vector<std::uint32_t>& c) const {
  Code r = 0, pw = 1;
  for (std::uint32_t i = 0; i < e_ && i < c.size(); ++i) {
    r += (c[i] % p_) * pw;
    pw *= p_;
  }
  return r;
}

FqElem FqContext::elem(Code c) const { return FqElem(*this, c); }
FqElem FqContext::zero() const { return FqElem(*this, 0); }
FqElem FqContext::one() const { return FqElem(*this, 1); }

std::string FqContext::format(Code a) const {
  if (e_ == 1 || a < p_) return std::to_string(a);
  const Coeffs c = coords(a);
  std::string out;
  for (int i = static_cast<int>(e_) - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += "x";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Code FqContext::parse(std::string_view s) const {
  std::string t;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  if (t.empty()) throw ParseError("empty F_q element");
  Coeffs acc(e_, 0);
  std::size_t i = 0;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      if (t[i] == '-') sign = -1;
      ++i;
    }
    std::int64_t coef = 1;
    bool have_num = false;
    if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      coef = 0;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
        coef = (coef * 10 + (t[i] - '0')) % p_;
        ++i;
      }
      have_num = true;
    }
    std::size_t power = 0;
    if (i < t.size() && t[i] == '*') {
      ++i;
      if (i >= t.size() || t[i] != 'x') throw ParseError("expected x in '" + t + "'");
    }
    if (i < t.size() && t[i] == 'x') {
      if (e_ == 1) throw ParseError("x not allowed for a prime field");
      ++i;
      power = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        power = 0;
        if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i]))) {
          throw ParseError("bad exponent in '" + t + "'");
        }
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
          power = power * 10 + (t[i] - '0');
          ++i;
        }
      }
    } else if (!have_num) {
      throw ParseError("cannot parse F_q element '" + t + "'");
    }
    // Reduce x^power modulo the modulus.
    Coeffs mono(power + 1, 0);
    mono[power] = 1;
    Coeffs red = mod_monic(mono, modulus_, p_);
    red.resize(e_, 0);
    const std::int64_t c = ((sign * coef) % p_ + p_) % p_;
    for (std::uint32_t k = 0; k < e_; ++k) {
      acc[k] = static_cast<std::uint32_t>((acc[k] + c * red[k]) % p_);
    }
    if (i < t.size() && t[i] != '+' && t[i] != '-') {
      throw ParseError("unexpected character in '" + t + "'");
    }
  }
  return from_coords(acc);
}

}  // namespace vmz

namespace vmz {

void convolve(const FqContext& ctx, const Code* a, std::size_t na, const Code* b,
              std::size_t nb, Code* out, std::size_t nout) {
  if (ctx.e() == 1) {
    const std::uint64_t p = ctx.p();
    const std::uint64_t bound = (p - 1) * (p - 1);
    // Number of products that can be summed before a uint64 could overflow.
    const std::size_t chunk =
        bound == 0 ? SIZE_MAX : static_cast<std::size_t>(UINT64_MAX / bound - 1);
    for (std::size_t k = 0; k < nout; ++k) {
      const std::size_t lo = k >= nb ? k - nb + 1 : 0;
      const std::size_t hi = std::min(k + 1, na);
      std::uint64_t acc = 0;
      std::size_t since = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        acc += static_cast<std::uint64_t>(a[i]) * b[k - i];
        if (++since == chunk) {
          acc %= p;
          since = 0;
        }
      }
      out[k] = static_cast<Code>(acc % p);
    }
    return;
  }
  for (std::size_t k = 0; k < nout; ++k) out[k] = 0;
  for (std::size_t i = 0; i < na && i < nout; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb && i + j < nout; ++j) {
      if (b[j] == 0) continue;
      out[i + j] = ctx.add(out[i + j], ctx.mul(a[i], b[j]));
    }
  }
}

}  // namespace vmz
