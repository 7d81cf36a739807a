#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vmz {

// Elements of F_q are stored as integer codes: the coordinate vector
// (c_0, ..., c_{e-1}) in the basis 1, x, ..., x^{e-1} maps to sum c_i p^i.
using Code = std::uint32_t;

class FqElem;

class FqContext {
 public:
  // Contexts are interned; the returned reference stays valid for the
  // lifetime of the process.
  static const FqContext& get(std::uint32_t p, std::uint32_t e = 1);
  static const FqContext& get(std::uint32_t p, std::uint32_t e,
                              const std::vector<std::uint32_t>& modulus);
  // q must be a prime power; picks the default modulus.
  static const FqContext& for_q(std::uint64_t q);

  std::uint32_t p() const { return p_; }
  std::uint32_t e() const { return e_; }
  std::uint32_t q() const { return q_; }
  // Monic, ascending coefficients, length e + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;  // throws DivisionByZero
  Code pow(Code a, std::uint64_t n) const;
  Code from_int(std::int64_t n) const;
  // Generator x of F_q over F_p (e > 1); equals 0 when e = 1 is meaningless,
  // so it throws DomainError in that case.
  Code generator() const;

  std::vector<std::uint32_t> coords(Code a) const;
  Code from_coords(const std::vector<std::uint32_t>& c) const;
  bool in_prime_field(Code a) const { return a < p_; }

  FqElem elem(Code c) const;
  FqElem zero() const;
  FqElem one() const;

  // "2" for e = 1; "x^2+2*x+1" style for e > 1.
  std::string format(Code a) const;
  Code parse(std::string_view s) const;

  FqContext(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus);

 private:
  Code mul_slow(Code a, Code b) const;

  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Code> mul_table_;  // q*q entries, only for e > 1 and small q
  std::vector<Code> inv_table_;
};

class FqElem {
 public:
  FqElem() = default;
  FqElem(const FqContext& ctx, Code c) : ctx_(&ctx), c_(c) {}

  const FqContext& ctx() const { return *ctx_; }
  Code code() const { return c_; }
  bool is_zero() const { return c_ == 0; }
  bool is_one() const { return c_ == 1; }

  FqElem operator+(const FqElem& o) const { return {*ctx_, ctx_->add(c_, o.c_)}; }
  FqElem operator-(const FqElem& o) const { return {*ctx_, ctx_->sub(c_, o.c_)}; }
  FqElem operator-() const { return {*ctx_, ctx_->neg(c_)}; }
  FqElem operator*(const FqElem& o) const { return {*ctx_, ctx_->mul(c_, o.c_)}; }
  FqElem operator/(const FqElem& o) const { return {*ctx_, ctx_->mul(c_, ctx_->inv(o.c_))}; }
  FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
  FqElem& operator-=(const FqElem& o) { return *this = *this - o; }
  FqElem& operator*=(const FqElem& o) { return *this = *this * o; }
  bool operator==(const FqElem& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }
  bool operator!=(const FqElem& o) const { return !(*this == o); }

  FqElem inv() const { return {*ctx_, ctx_->inv(c_)}; }
  FqElem pow(std::uint64_t n) const { return {*ctx_, ctx_->pow(c_, n)}; }
  std::string to_string() const { return ctx_->format(c_); }

 private:
  const FqContext* ctx_ = nullptr;
  Code c_ = 0;
};

bool is_prime(std::uint64_t n);

// out[k] = sum_{i+j=k} a[i]*b[j] for k < nout (out must not alias a or b).
void convolve(const FqContext& ctx, const Code* a, std::size_t na, const Code* b,
              std::size_t nb, Code* out, std::size_t nout);

}  // namespace vmz
