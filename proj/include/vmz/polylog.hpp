#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vmz/tseries.hpp"

namespace vmz {

// Index s = (s_1, ..., s_r), all s_i >= 1.
struct Index {
  std::vector<int> s;

  Index() = default;
  Index(std::initializer_list<int> l);
  explicit Index(std::vector<int> v);

  int depth() const { return static_cast<int>(s.size()); }
  int weight() const;
  int operator[](std::size_t i) const { return s[i]; }
  bool operator==(const Index& o) const { return s == o.s; }
  bool operator<(const Index& o) const { return s < o.s; }
  // (s_1, ..., s_len)
  Index prefix(int len) const;
  std::string to_string() const;  // "2,1"
  static Index parse(std::string_view text);
};

using ArgTuple = std::vector<RatK>;

std::string args_to_string(const ArgTuple& u);
ArgTuple parse_args(const FqContext& ctx, std::string_view text);

enum class DomainTag { ConvInf, ConvV, DefV };

// Exact membership test. `v` is the finite place used by ConvV and DefV.
bool domain_check(const Index& s, const ArgTuple& u, DomainTag tag, const Place& v);

// L_i = (θ-θ^q)...(θ-θ^{q^i}).
PolyA L_factorial(const FqContext& ctx, int i);
// ord of 1/L_i at the place.
std::int64_t ord_L_inv(const Place& place, int i);
// 1/L_i^s to the given absolute precision, built from its factored form.
LocalNum L_inv_pow(const Place& place, int i, int s, std::int64_t abs_prec);
// u^{q^i} to the given absolute precision.
LocalNum embed_frob(const RatK& u, const Place& place, int i, std::int64_t abs_prec);

// Π_{i>=1}(1 - α^{q^i} t) mod (t^D, ϖ^N).
TSeries omega_product(const RatK& alpha, const Place& place, std::int64_t D, std::int64_t N);
// ord(c_j) >= ord(α)(q^{j+1}-q)/(q-1); certifies evaluation at 1/α.
DecayBound omega_decay(const RatK& alpha, const Place& place);
// Π_{i>=1}(1 - α^{q^i-1}).
LocalNum pi_tilde(const RatK& alpha, const Place& place, std::int64_t N);
// Ω_α(α^{-q^N}): exact zero for N >= 1, π̃_α for N = 0.
LocalNum omega_at_inverse_power(const RatK& alpha, const Place& place, int N, std::int64_t prec);

// Σ_{i_1>...>i_r>=0} u^{q^i}/L^s at a degree-one finite place or at ∞.
LocalNum cmpl_eval(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec);
// Same with i_1 >= ... >= i_r.
LocalNum cmspl_eval(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec);
// Exact partial sums over chains with i_1 <= I.
RatK cmpl_partial(const Index& s, const ArgTuple& u, int I);
RatK cmspl_partial(const Index& s, const ArgTuple& u, int I);
// Largest i_1 kept by the truncation rule for the requested precision.
int cmpl_truncation(const Index& s, const ArgTuple& u, const Place& place, std::int64_t prec);

struct StarTerm {
  Code coeff;
  Index merged;
  std::vector<int> blocks;  // sizes of the consecutive blocks that were merged
};
// Li*_s = Σ coeff·Li_merged over all coarsenings of the chain.
std::vector<StarTerm> star_expand(const Index& s);
// Multiplies the arguments blockwise.
ArgTuple merge_args(const ArgTuple& u, const std::vector<int>& blocks);

// Σ_{a monic, deg a = d} a^{-k} at ∞: Newton identities route and brute force.
LocalNum power_sum_inf(const FqContext& ctx, int d, int k, std::int64_t prec);
RatK power_sum_exact(const FqContext& ctx, int d, int k);
// ζ_A(s) summed over deg a_1 <= D_max, with the tail O(w^{(D_max+1)s_1}) attached.
LocalNum mzv_inf(const FqContext& ctx, const Index& s, int D_max, std::int64_t prec);
// Same partial sum without the tail term.
LocalNum mzv_partial(const FqContext& ctx, const Index& s, int D_max, std::int64_t prec);
RatK mzv_partial_exact(const FqContext& ctx, const Index& s, int D_max);

// Deformation series 𝔏_{s,u} mod (t^D, ϖ^N), from the product form
// Σ Π_ℓ (t^{i_ℓ} Π_{j>i_ℓ}(1-ϖ^{q^j}t))^{s_ℓ} u_ℓ^{q^{i_ℓ}}.
TSeries deformation_build(const Index& s, const ArgTuple& u, const Place& v, std::int64_t D, std::int64_t N);
// One product-form summand at t = ϖ^{-q^{N_twist}}; exact zero when any i_ℓ < N_twist.
LocalNum deformation_summand_at(const Index& s, const ArgTuple& u, const Place& v, const std::vector<int>& chain,
                                int N_twist, std::int64_t prec);
// 𝔏_{s,u}(ϖ^{-q^{N_twist}}) = ϖ^{e}·(π̃^{wt}·Li_s(u))^{q^{N_twist}} with
// e = specialization_shift: the summands with every i_ℓ >= N are the q^N-th
// powers of the N = 0 summands times the leftover t^{N·wt}.
std::int64_t specialization_shift(const Index& s, const Place& v, int N_twist);
LocalNum deformation_specialize(const Index& s, const ArgTuple& u, const Place& v, int N_twist, std::int64_t prec);

}  // namespace vmz
