#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vmz/ratk.hpp"

namespace vmz {

// Absolute precision used for exact zeros and uncapped operations.
inline constexpr std::int64_t kInfPrec = std::numeric_limits<std::int64_t>::max() / 4;

enum class PlaceKind { Finite, Infinite };

// A degree-one finite place (uniformizer θ + λ) or the infinite place
// (uniformizer 1/θ).
class Place {
 public:
  static Place finite(const FqContext& ctx, Code lambda);
  static Place infinite(const FqContext& ctx);
  // Accepts only monic polynomials of degree one.
  static Place from_uniformizer(const PolyA& w);

  const FqContext& ctx() const { return *ctx_; }
  PlaceKind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == PlaceKind::Infinite; }
  Code lambda() const { return lambda_; }
  char symbol() const { return is_infinite() ? 'w' : 'v'; }
  std::uint32_t q() const { return ctx_->q(); }
  // θ + λ at a finite place.
  PolyA uniformizer() const;

  // Exact valuations; throw DomainError on zero.
  std::int64_t ord(const PolyA& f) const;
  std::int64_t ord(const RatK& r) const;

  bool operator==(const Place& o) const {
    return ctx_ == o.ctx_ && kind_ == o.kind_ && lambda_ == o.lambda_;
  }
  bool operator!=(const Place& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  Place(const FqContext& ctx, PlaceKind kind, Code lambda) : ctx_(&ctx), kind_(kind), lambda_(lambda) {}

  const FqContext* ctx_;
  PlaceKind kind_;
  Code lambda_;
};

struct Valuation {
  std::int64_t value;  // exact valuation, or a lower bound
  bool exact;          // false: only "≥ value" is known
  bool infinite;       // exact zero
  std::string to_string() const;
};

// Truncated Laurent expansion ϖ^nu · Σ digits[i] ϖ^i + O(ϖ^{nu+W}).
// W = 0 encodes "zero to precision nu"; a separate flag marks exact zero.
class LocalNum {
 public:
  explicit LocalNum(const Place& place) : place_(place), nu_(kInfPrec), exact_zero_(true) {}

  static LocalNum exact_zero(const Place& place) { return LocalNum(place); }
  static LocalNum zero_to(const Place& place, std::int64_t abs_prec);
  // Leading zero digits are absorbed into nu.
  static LocalNum from_digits(const Place& place, std::int64_t nu, std::vector<Code> digits);
  static LocalNum constant(const Place& place, Code c, std::int64_t abs_prec);
  static LocalNum one(const Place& place, std::int64_t abs_prec) { return constant(place, 1, abs_prec); }
  // c·ϖ^k + O(ϖ^abs_prec)
  static LocalNum monomial(const Place& place, Code c, std::int64_t k, std::int64_t abs_prec);
  // Σ c·ϖ^k over the given (k, c) pairs, known to abs_prec.
  static LocalNum sparse(const Place& place, const std::vector<std::pair<std::int64_t, Code>>& terms,
                         std::int64_t abs_prec);

  const Place& place() const { return place_; }
  const FqContext& ctx() const { return place_.ctx(); }
  std::int64_t nu() const { return nu_; }
  std::int64_t window() const { return static_cast<std::int64_t>(d_.size()); }
  std::int64_t abs_precision() const { return exact_zero_ ? kInfPrec : nu_ + window(); }
  const std::vector<Code>& digits() const { return d_; }
  bool is_exact_zero() const { return exact_zero_; }
  bool is_zero_to_precision() const { return exact_zero_ || d_.empty(); }
  Valuation valuation() const;
  // Coefficient of ϖ^k; throws PrecisionLoss when k is beyond the window.
  Code digit(std::int64_t k) const;

  LocalNum operator+(const LocalNum& o) const;
  LocalNum operator-(const LocalNum& o) const;
  LocalNum operator-() const;
  LocalNum operator*(const LocalNum& o) const;
  LocalNum operator/(const LocalNum& o) const { return *this * o.inv(); }
  LocalNum& operator+=(const LocalNum& o) { return *this = *this + o; }
  LocalNum& operator-=(const LocalNum& o) { return *this = *this - o; }
  LocalNum& operator*=(const LocalNum& o) { return *this = *this * o; }

  LocalNum inv() const;
  LocalNum scale(Code c) const;
  LocalNum pow(std::uint64_t n) const;
  // x^{q^n} truncated at abs_cap. In characteristic p with F_q-rational
  // digits, (Σ c_i ϖ^i)^q = Σ c_i ϖ^{qi}, so this is exact multiplication
  // carried out by spreading the digits.
  LocalNum frobenius(unsigned n, std::int64_t abs_cap = kInfPrec) const;
  LocalNum qpow() const { return frobenius(1); }
  LocalNum truncate(std::int64_t abs_prec) const;
  LocalNum truncate_relative(std::int64_t window) const;
  // Multiply by ϖ^k.
  LocalNum shift(std::int64_t k) const;

  std::string to_string() const;
  static LocalNum parse(const Place& place, std::string_view s);

 private:
  void normalize();

  Place place_;
  std::int64_t nu_;
  std::vector<Code> d_;
  bool exact_zero_ = false;
};

// x ≡ y mod ϖ^n: the difference has valuation (or known precision) >= n.
bool agree_to(const LocalNum& x, const LocalNum& y, std::int64_t n);
// Lower bound for ord(x - y) (exact when the difference is known nonzero).
std::int64_t diff_ord(const LocalNum& x, const LocalNum& y);

// Digits of f/ϖ^{ord f} (count of them); ord returned through the pointer.
std::vector<Code> expansion_digits(const PolyA& f, const Place& place, std::int64_t count,
                                   std::int64_t* ord);

// embed_local: result ≡ r with `window` correct digits after the leading one.
LocalNum embed(const RatK& r, const Place& place, std::int64_t window);
// Same, but sized by absolute precision.
LocalNum embed_abs(const RatK& r, const Place& place, std::int64_t abs_prec);

}  // namespace vmz
