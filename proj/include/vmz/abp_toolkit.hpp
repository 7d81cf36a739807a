#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmz/local.hpp"
#include "vmz/polykt.hpp"

namespace vmz {

// Norms are powers of q and are carried by their exponent.
std::string qpow_string(std::int64_t e);  // "q^3"

// Element of R_v = F_q[1/ϖ]: Σ c_j ϖ^{-j}. ‖x‖_v = q^{deg}.
struct RvElem {
  const FqContext* ctx = nullptr;
  std::vector<Code> c;  // c[j] multiplies ϖ^{-j}; trailing zeros stripped

  RvElem() = default;
  RvElem(const FqContext& ctx_, std::vector<Code> coeffs);
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  RatK to_ratk(const Place& v) const;
  // Throws DomainError when r has a pole away from v.
  static RvElem from_ratk(const RatK& r, const Place& v);
  std::string to_string() const;
};

// sup_{|x| <= q^rho} |f(x)|_v as a q-exponent, from the coefficients.
std::int64_t sup_norm_disk(const PolyKT& f, const Place& v, std::int64_t rho);
// Same from a factored form λ·t^m·Π(1 - t/ω_i), via the zero-counting formula.
struct FactoredPoly {
  RatK lambda;
  int zeros_at_origin = 0;
  std::vector<RatK> roots;  // nonzero ω_i
  PolyKT expand() const;
};
std::int64_t sup_norm_disk_factored(const FactoredPoly& f, const Place& v, std::int64_t rho);

struct NormReport {
  std::int64_t size;   // log_q ‖x‖_v from the R_v degree
  std::int64_t value;  // log_q |x|_v from the valuation of x in k
};
// ‖x‖ >= 1 and |x| >= ‖x‖^{1-[k_0:k]} = 1; AssertionFailure otherwise.
NormReport norm_bound_checks(const RvElem& x, const Place& v);

struct LiouvilleReport {
  bool holds;
  std::int64_t lhs;  // log_q |λ|^μ
  std::int64_t rhs;  // log_q (max ‖a_i‖)^{-1}
  int scale;         // f was moved into R_v[z] by ϖ^{-scale}
};
// f over A in z (ascending coefficients). f is first divided by ϖ^M,
// M = max deg a_i, which puts it in R_v[z] with the same roots.
LiouvilleReport liouville_check(const std::vector<PolyA>& f, const RatK& lam, int mu, const Place& v);

struct BallCount {
  std::uint64_t count;    // by enumeration
  std::uint64_t formula;  // q^{n·[k_0:k] + n_1/ε_v} with n_1 = ε_v = 1
};
BallCount norm_ball_count(const Place& v, int n, std::uint64_t budget = 1u << 20);

// Entries of an r×s matrix over R_v[t]: t-coefficient lists.
using RvPoly = std::vector<RvElem>;
using RvMatrix = std::vector<std::vector<RvPoly>>;
RvMatrix parse_rv_matrix(const Place& v, const std::vector<std::vector<std::string>>& entries);
std::int64_t rv_norm(const RvMatrix& m);  // log_q ‖M‖_v; -1 stands for the zero matrix

struct SmallSolution {
  std::vector<RvPoly> x;
  std::int64_t norm;       // log_q ‖x‖_v
  double bound_exponent;   // log_q C^{r/(s-r)}
};
// Nonzero x with Mx = 0, deg_t x <= e and ‖x‖ < C^{r/(s-r)}, C = q^c.
SmallSolution small_solution(const Place& v, const RvMatrix& M, std::int64_t c, int e);
// Exact re-verification: Mx = 0 in k[t] and the norm bound.
bool verify_small_solution(const Place& v, const RvMatrix& M, std::int64_t c, const SmallSolution& sol);

}  // namespace vmz
