#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vmz/matrix.hpp"
#include "vmz/polykt.hpp"
#include "vmz/polylog.hpp"

namespace vmz {

// ψ = Φ^{(1)}·ψ^{(1)}. Only the twisted matrix is stored, so entries stay in k[t].
struct DiffSystem {
  Place place;
  RatK alpha;
  Matrix<PolyKT> phi_twisted;
  // ψ mod (t^D, ϖ^N).
  std::function<std::vector<TSeries>(std::int64_t D, std::int64_t N)> psi;
  // ψ(α^{-q^N}) to absolute precision prec.
  std::function<std::vector<LocalNum>(int N, std::int64_t prec)> psi_at;
  int weight = 0;
  // The value Z the system certifies and the constant c.
  std::function<LocalNum(std::int64_t prec)> value;
  RatK c;
  std::vector<int> blocks;  // sizes of the summands of a block sum

  int size() const { return static_cast<int>(phi_twisted.rows()); }
  std::string dump(std::int64_t D, std::int64_t N) const;
};

// ψ = (Ω_α), Φ^{(1)} = (1 - α^q t).
DiffSystem build_omega_system(const RatK& alpha, const Place& place);
// ψ = (Ω^{s_1+...+s_r}, Ω^{s_2+...+s_r}𝔏_{s_1}, ..., 𝔏_{s_1..s_r}) at α = ϖ.
DiffSystem build_cmpl_system(const Index& s, const ArgTuple& u, const Place& v);
DiffSystem block_sum(const std::vector<DiffSystem>& systems);
// Φ·(1 - αt)^k and ψ·Ω^k; raises the weight by k.
DiffSystem pad_weight(const DiffSystem& sys, int k);

struct ResidualReport {
  std::int64_t residual_ord;  // min coefficient valuation of ψ - Φ^{(1)}ψ^{(1)}
  GaussNorm norm;
  bool verified;  // residual_ord >= N
  std::string to_string() const;
};
ResidualReport verify_difference(const DiffSystem& sys, std::int64_t D, std::int64_t N);

// det Φ(γ^{q^{-i}}) ≠ 0 for i = 1..i_max, checked as det (Φ^{(1)})^{(i-1)}(γ) ≠ 0 in k,
// which is its q^i-th power.
bool det_nonvanishing(const DiffSystem& sys, const RatK& gamma, int i_max);

enum class SpecializationForm {
  Literal,    // ψ(α^{-q^N}) = (0, ..., 0, (cZπ̃^w)^{q^N})
  Corrected,  // same with the last entry multiplied by α^{-N·q^N·w}
};

struct MplReport {
  bool passed = false;
  int failed_condition = 0;  // 1-4, 0 when passed
  std::vector<int> checked_N;
  std::vector<std::int64_t> condition4_agreement;  // diff_ord of the last entry per N
  std::string detail;
  std::string to_string() const;
};
MplReport mpl_certificate(const DiffSystem& sys, int w, const PolyKT& f, const std::vector<int>& N_list,
                          std::int64_t prec, SpecializationForm form = SpecializationForm::Literal,
                          std::int64_t D = 40, int det_checks = 5);

// P(γ) = ρ exactly and P·ψ ≡ 0 mod (t^D, ϖ^N).
bool vabp_certify(const DiffSystem& sys, const RatK& gamma, const std::vector<RatK>& rho,
                  const std::vector<PolyKT>& P, std::int64_t D, std::int64_t N);

}  // namespace vmz
