#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vmz/poly.hpp"

namespace vmz {

// Element of k = F_q(θ): reduced fraction with monic denominator.
class RatK {
 public:
  explicit RatK(const FqContext& ctx) : num_(ctx), den_(PolyA::one(ctx)) {}
  RatK(PolyA num);  // NOLINT: polynomials embed implicitly
  RatK(PolyA num, PolyA den);

  static RatK from_int(const FqContext& ctx, std::int64_t n) { return RatK(PolyA::from_int(ctx, n)); }
  static RatK theta(const FqContext& ctx) { return RatK(PolyA::theta(ctx)); }
  static RatK one(const FqContext& ctx) { return RatK(PolyA::one(ctx)); }

  const FqContext& ctx() const { return num_.ctx(); }
  const PolyA& num() const { return num_; }
  const PolyA& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  RatK operator+(const RatK& o) const;
  RatK operator-(const RatK& o) const;
  RatK operator-() const;
  RatK operator*(const RatK& o) const;
  RatK operator/(const RatK& o) const;
  RatK& operator+=(const RatK& o) { return *this = *this + o; }
  RatK& operator-=(const RatK& o) { return *this = *this - o; }
  RatK& operator*=(const RatK& o) { return *this = *this * o; }
  bool operator==(const RatK& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatK& o) const { return !(*this == o); }

  RatK inv() const;
  RatK pow(std::int64_t n) const;
  RatK frobenius(unsigned n) const;
  // Degree of numerator minus degree of denominator; equals -ord_∞.
  int degree() const { return num_.degree() - den_.degree(); }

  std::string to_string() const;
  static RatK parse(const FqContext& ctx, std::string_view s);

 private:
  PolyA num_;
  PolyA den_;
};

// Carlitz module action C_a(z), with C_θ(z) = θz + z^q.
RatK carlitz_action(const PolyA& a, const RatK& z);

// Parses with extra named symbols bound to values (e.g. u1, u2).
struct Binding {
  std::string name;
  RatK value;
};
RatK parse_ratk(const FqContext& ctx, std::string_view s, const std::vector<Binding>& bindings);

}  // namespace vmz
