#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmz/polylog.hpp"
#include "vmz/tmodule.hpp"

namespace vmz {

struct ValueHandle {
  std::string label;
  int weight = 0;
  LocalNum value;
  std::string provenance;
};

ValueHandle cmpl_handle(const Index& s, const ArgTuple& u, const Place& v, std::int64_t prec);
ValueHandle cmspl_handle(const Index& s, const ArgTuple& u, const Place& v, std::int64_t prec);

struct RelationReport {
  std::vector<PolyA> coeffs;  // one per value
  std::int64_t residual_ord = 0;
  std::int64_t recheck_prec = 0;
  std::string to_string() const;  // "coeffs=[1,-T] residual_ord=60"
};

// Relations Σ c_i x_i ≡ 0 with c_i ∈ A, deg c_i <= d, found mod ϖ^N and kept if they
// still hold mod ϖ^{N_recheck}. Values must carry N_recheck digits. Only generators are
// reported: θ-multiples of an earlier relation are skipped.
std::vector<RelationReport> find_k_relations(const std::vector<ValueHandle>& values, int d, std::int64_t N,
                                             std::int64_t N_recheck);

struct DecompTerm {
  RatK b;
  Index index;
  ArgTuple args;
};

struct Decomposition {
  const FqContext* ctx = nullptr;
  Index target;
  std::vector<DecompTerm> terms;
  // Set only by verify_decomposition_inf in this process.
  std::optional<std::int64_t> certified_prec;
  // Certification block read from a file; informational.
  std::optional<std::int64_t> recorded_prec;
  std::string recorded_date;

  nlohmann::json to_json() const;
  // Checks wt(s_l) = wt(s), dep(s_l) <= dep(s) and arity; ParseError otherwise.
  static Decomposition from_json(const nlohmann::json& j);
  static Decomposition load(const std::string& path);
  void save(const std::string& path) const;
};

// ζ_A(s) = Li*_s(1) for depth one and 1 <= s <= q-1. Uncertified.
Decomposition depth_one_candidate(const FqContext& ctx, int s);

// Residual ord of ζ_A(s) - Σ b·Li*(u) at ∞. Throws CertificationFailed below N, else
// records the certification and returns the residual ord.
std::int64_t verify_decomposition_inf(Decomposition& dec, std::int64_t N);

using TModuleLookup = std::function<std::optional<ValidatedTModule>(const Index&)>;
// Specs from a directory of JSON files, matched on q and index. Each is validated
// unless `trust` is set.
TModuleLookup tmodule_lookup_dir(const FqContext& ctx, const std::string& dir, const Place& v, std::int64_t prec,
                                 bool trust = false);

struct VmzvValue {
  LocalNum value;
  std::vector<std::string> routes;  // "series" or "extended" per term
};
// Σ b·Li*_{s_l}(u_l)_v, each term by the series when u_l is in ConvV and through the
// t-module logarithm otherwise.
VmzvValue eval_vmzv(const Decomposition& dec, const Place& v, std::int64_t prec, const TModuleLookup& lookup);

}  // namespace vmz
