#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmz/local.hpp"
#include "vmz/matrix.hpp"
#include "vmz/polylog.hpp"

namespace vmz {

// φ_θ = (θ·Id + N0) + B1·τ on G_a^d.
struct TModuleSpec {
  const FqContext* ctx = nullptr;
  int dimension = 0;
  Matrix<Code> N0{0, 0, Code{0}};
  Matrix<RatK> B1{0, 0, std::vector<RatK>{}};
  int readout = 0;  // coordinate carrying the polylog value
  Index index;
  // Coordinates of the designated point as expressions in u1, ..., ur.
  std::vector<std::string> point;
  std::vector<ArgTuple> validation_points;

  Matrix<RatK> B0() const;
  std::vector<RatK> point_for(const ArgTuple& u) const;

  nlohmann::json to_json() const;
  static TModuleSpec from_json(const FqContext& ctx, const nlohmann::json& j);
  static TModuleSpec load(const FqContext& ctx, const std::string& path);
};

// C^{⊗s}: superdiagonal N0, B1 = E_{s,1}, point (0, ..., 0, u1), readout s.
TModuleSpec tensor_carlitz_spec(const FqContext& ctx, int s);

std::vector<RatK> tm_action(const TModuleSpec& spec, const PolyA& a, const std::vector<RatK>& z);
std::vector<LocalNum> tm_action(const TModuleSpec& spec, const PolyA& a, const std::vector<LocalNum>& z);
// a(θ·Id + N0)
Matrix<RatK> d_action(const TModuleSpec& spec, const PolyA& a);

// exp = Σ Q_i τ^i, log = Σ P_i τ^i.
struct LogCoeffs {
  std::vector<Matrix<RatK>> P;
  std::vector<Matrix<RatK>> Q;
};
LogCoeffs explog_coeffs(const TModuleSpec& spec, int I_max);
// Σ_{i+j=n} Q_i·P_j^{(i)} for n = 1..I_max; all zero when exp∘log = id.
bool exp_log_identity_holds(const LogCoeffs& c, const FqContext& ctx);

struct Annihilator {
  PolyA a;
  Matrix<Code> residue_matrix;
  bool divisible_by_uniformizer;
};
Annihilator residue_annihilator(const TModuleSpec& spec, const Place& v);

// Log(z) for a v-adic point with all coordinates of ord >= 1, to absolute
// precision prec. Stops by the three-term rule plus the structural bound
// q^j·minord(z) - c·j >= prec.
struct LogEvaluation {
  std::vector<LocalNum> value;
  int terms = 0;
  std::int64_t growth = 0;  // c
};
LogEvaluation log_eval(const TModuleSpec& spec, const std::vector<RatK>& z, const Place& v, std::int64_t prec,
                       int max_terms = 40);

struct ValidationCertificate {
  bool passed = false;
  std::vector<std::int64_t> agreement;  // diff_ord per test point
  std::string to_string() const;
};

// Only obtainable through validate_tmodule or trust_unvalidated.
class ValidatedTModule {
 public:
  const TModuleSpec& spec() const { return spec_; }
  bool trusted_without_validation() const { return trusted_; }

 private:
  friend std::optional<ValidatedTModule> validate_tmodule(const TModuleSpec&, const Place&, std::int64_t,
                                                          ValidationCertificate*);
  friend ValidatedTModule trust_unvalidated(const TModuleSpec& spec);
  ValidatedTModule(TModuleSpec s, bool trusted) : spec_(std::move(s)), trusted_(trusted) {}
  TModuleSpec spec_;
  bool trusted_ = false;
};

// Compares the readout coordinate of Log(point) with cmspl_eval on every
// validation point (at least 3, all inside ConvV).
std::optional<ValidatedTModule> validate_tmodule(const TModuleSpec& spec, const Place& v, std::int64_t prec,
                                                 ValidationCertificate* cert = nullptr);
ValidatedTModule trust_unvalidated(const TModuleSpec& spec);

struct ExtendedValue {
  LocalNum value;
  PolyA annihilator;
  int log_terms = 0;
};
// Li*_s(u)_v on the extended domain: readout of d[a]^{-1}·Log(φ_a(point)).
// `extra_factor` multiplies the residue annihilator (must be prime to ϖ).
ExtendedValue extended_cmspl_v(const ValidatedTModule& tm, const ArgTuple& u, const Place& v, std::int64_t prec,
                               const std::optional<PolyA>& extra_factor = std::nullopt);

}  // namespace vmz
