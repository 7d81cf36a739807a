#pragma once

#include <cstdint>
#include <limits>

namespace vmz {

// Saturating helpers for valuation bounds that may grow like q^i.
inline constexpr std::int64_t kSatMax = std::numeric_limits<std::int64_t>::max() / 8;

inline std::int64_t sat(__int128 x) {
  if (x > kSatMax) return kSatMax;
  if (x < -kSatMax) return -kSatMax;
  return static_cast<std::int64_t>(x);
}
inline std::int64_t sat_add(std::int64_t a, std::int64_t b) { return sat(static_cast<__int128>(a) + b); }
inline std::int64_t sat_mul(std::int64_t a, std::int64_t b) { return sat(static_cast<__int128>(a) * b); }

// q^n, saturated.
inline std::int64_t sat_qpow(std::int64_t q, std::int64_t n) {
  __int128 r = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    r *= q;
    if (r > kSatMax) return kSatMax;
  }
  return static_cast<std::int64_t>(r);
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  const std::int64_t d = a / b;
  return (a % b != 0 && ((a < 0) == (b < 0))) ? d + 1 : d;
}

}  // namespace vmz
