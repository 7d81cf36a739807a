#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vmz/ratk.hpp"
#include "vmz/tseries.hpp"

namespace vmz {

// Polynomial in t with coefficients in k; entries of twisted difference matrices.
class PolyKT {
 public:
  explicit PolyKT(const FqContext& ctx) : ctx_(&ctx) {}
  PolyKT(const FqContext& ctx, std::vector<RatK> coeffs);

  static PolyKT constant(const RatK& c);
  static PolyKT t_power(const FqContext& ctx, std::size_t k);
  // (1 - c·t)^n
  static PolyKT one_minus(const RatK& c, std::size_t n);

  const FqContext& ctx() const { return *ctx_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  RatK coeff(std::size_t i) const { return i < c_.size() ? c_[i] : RatK(*ctx_); }
  const std::vector<RatK>& coeffs() const { return c_; }

  PolyKT operator+(const PolyKT& o) const;
  PolyKT operator-(const PolyKT& o) const;
  PolyKT operator-() const;
  PolyKT operator*(const PolyKT& o) const;
  bool operator==(const PolyKT& o) const { return c_ == o.c_; }
  PolyKT scale(const RatK& c) const;
  PolyKT pow(std::size_t n) const;
  PolyKT twist(unsigned n) const;
  RatK eval(const RatK& t) const;
  TSeries to_tseries(const Place& place, std::int64_t order, std::int64_t cap) const;

  std::string to_string() const;
  static PolyKT parse(const FqContext& ctx, std::string_view s);

 private:
  void strip();
  const FqContext* ctx_;
  std::vector<RatK> c_;
};

}  // namespace vmz
