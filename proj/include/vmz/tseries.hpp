#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vmz/local.hpp"

namespace vmz {

// Σ a_i t^i mod t^D; every coefficient is kept to absolute precision at most
// `cap` (the working precision of the series).
class TSeries {
 public:
  TSeries(const Place& place, std::int64_t order, std::int64_t cap);

  static TSeries constant(const LocalNum& c, std::int64_t order, std::int64_t cap);
  static TSeries one(const Place& place, std::int64_t order, std::int64_t cap);
  // 1 + c·t
  static TSeries linear(const LocalNum& c0, const LocalNum& c1, std::int64_t order, std::int64_t cap);

  const Place& place() const { return place_; }
  std::int64_t order() const { return static_cast<std::int64_t>(a_.size()); }
  std::int64_t cap() const { return cap_; }
  const LocalNum& coeff(std::int64_t i) const { return a_[static_cast<std::size_t>(i)]; }
  void set(std::int64_t i, const LocalNum& c);
  const std::vector<LocalNum>& coeffs() const { return a_; }

  TSeries operator+(const TSeries& o) const;
  TSeries operator-(const TSeries& o) const;
  TSeries operator-() const;
  TSeries operator*(const TSeries& o) const;
  TSeries& operator+=(const TSeries& o) { return *this = *this + o; }
  TSeries& operator*=(const TSeries& o) { return *this = *this * o; }
  TSeries scale(const LocalNum& c) const;
  TSeries pow(std::uint64_t n) const;
  TSeries shift(std::int64_t k) const;  // multiply by t^k
  // Coefficientwise x ↦ x^{q^n}; only forward twists exist.
  TSeries twist(unsigned n) const;
  TSeries truncate(std::int64_t order, std::int64_t cap) const;

  std::string to_string() const;

 private:
  Place place_;
  std::int64_t cap_;
  std::vector<LocalNum> a_;
};

struct GaussNorm {
  enum class Kind { Exact, LowerBound, UpperBound, Zero };
  std::int64_t log_q;  // the norm is q^{log_q}
  Kind kind;
  std::string to_string() const;
};

GaussNorm gauss_norm(const TSeries& f);

// Smallest coefficient valuation (lower bounds included); kInfPrec if every
// coefficient is an exact zero. A residual is "≡ 0 mod ϖ^N" iff this is ≥ N.
std::int64_t min_coeff_ord(const TSeries& f);

// ord(a_i) >= ord_lower(i) for every i; ord_lower(i) + i·ord(x) is
// non-decreasing for i >= crossover. Coefficients known only as zero to
// precision are sharpened with the bound.
struct DecayBound {
  std::function<std::int64_t(std::int64_t)> ord_lower;
  std::int64_t crossover = 0;
};

// Σ a_i x^i with a certified tail. Without a decay bound the tail is bounded
// by the smallest computed coefficient valuation, which requires ord(x) > 0.
LocalNum eval_series(const TSeries& f, const LocalNum& x, const std::optional<DecayBound>& decay = std::nullopt);

}  // namespace vmz
