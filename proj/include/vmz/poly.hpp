#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vmz/fq.hpp"

namespace vmz {

// Element of A = F_q[θ]; dense ascending coefficients, trailing zeros stripped.
class PolyA {
 public:
  explicit PolyA(const FqContext& ctx) : ctx_(&ctx) {}
  PolyA(const FqContext& ctx, std::vector<Code> coeffs);

  static PolyA constant(const FqElem& c);
  static PolyA constant(const FqContext& ctx, Code c);
  static PolyA from_int(const FqContext& ctx, std::int64_t n);
  static PolyA monomial(const FqContext& ctx, Code c, std::size_t k);
  static PolyA theta(const FqContext& ctx) { return monomial(ctx, 1, 1); }
  static PolyA one(const FqContext& ctx) { return constant(ctx, 1); }

  const FqContext& ctx() const { return *ctx_; }
  // -1 stands for the degree "−∞" of the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Code coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  FqElem lead() const { return FqElem(*ctx_, c_.empty() ? 0 : c_.back()); }
  const std::vector<Code>& coeffs() const { return c_; }
  std::size_t num_terms() const;

  PolyA operator+(const PolyA& o) const;
  PolyA operator-(const PolyA& o) const;
  PolyA operator-() const;
  PolyA operator*(const PolyA& o) const;
  PolyA& operator+=(const PolyA& o) { return *this = *this + o; }
  PolyA& operator-=(const PolyA& o) { return *this = *this - o; }
  PolyA& operator*=(const PolyA& o) { return *this = *this * o; }
  bool operator==(const PolyA& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }
  bool operator!=(const PolyA& o) const { return !(*this == o); }

  PolyA scale(Code c) const;
  PolyA shift(std::size_t k) const;  // multiply by θ^k
  PolyA monic() const;
  PolyA pow(std::uint64_t n) const;
  // f^{q^n}: the coefficients are fixed by Frobenius, so θ^i ↦ θ^{i q^n}.
  PolyA frobenius(unsigned n) const;
  Code eval(Code x) const;
  PolyA compose(const PolyA& g) const;

  std::string to_string() const;
  static PolyA parse(const FqContext& ctx, std::string_view s);

 private:
  void strip();

  const FqContext* ctx_;
  std::vector<Code> c_;
};

// Returns (quotient, remainder); throws DivisionByZero when g = 0.
std::pair<PolyA, PolyA> divmod(const PolyA& f, const PolyA& g);
PolyA gcd(const PolyA& f, const PolyA& g);  // monic; gcd(0, 0) throws
PolyA powmod(const PolyA& f, std::uint64_t n, const PolyA& m);

std::vector<PolyA> monic_enumerate(const FqContext& ctx, int d);
bool irreducible_test(const PolyA& f);

// Formats a coefficient for polynomial text: integers for the prime field,
// bracketed x-polynomials otherwise.
std::string format_coeff(const FqContext& ctx, Code c);

}  // namespace vmz
