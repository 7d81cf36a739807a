#include "vmz/diffsys.hpp"

#include <sstream>

#include "vmz/error.hpp"
#include "vmz/linalg.hpp"
#include "vmz/satmath.hpp"

namespace vmz {

namespace {

Matrix<PolyKT> zero_poly_matrix(const FqContext& ctx, std::size_t n) { return Matrix<PolyKT>(n, n, PolyKT(ctx)); }

TSeries omega_power(const RatK& alpha, const Place& place, int k, std::int64_t D, std::int64_t N) {
  if (k == 0) return TSeries::one(place, D, N);
  return omega_product(alpha, place, D, N).pow(static_cast<std::uint64_t>(k));
}

LocalNum omega_power_at(const RatK& alpha, const Place& place, int k, int N, std::int64_t prec) {
  if (k == 0) return LocalNum::one(place, prec);
  return omega_at_inverse_power(alpha, place, N, prec).pow(static_cast<std::uint64_t>(k)).truncate(prec);
}

}  // namespace

std::string DiffSystem::dump(std::int64_t D, std::int64_t N) const {
  std::ostringstream os;
  os << "size: " << size() << "\n";
  os << "place: " << place.to_string() << "\n";
  os << "alpha: " << alpha.to_string() << "\n";
  os << "weight: " << weight << "\n";
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (!phi_twisted(i, j).is_zero()) os << "phi1[" << i + 1 << "," << j + 1 << "]: " << phi_twisted(i, j).to_string() << "\n";
    }
  }
  const auto p = psi(D, N);
  for (std::size_t i = 0; i < p.size(); ++i) os << "psi[" << i + 1 << "]: " << p[i].to_string() << "\n";
  os << "residual_ord: " << verify_difference(*this, D, N).residual_ord << "\n";
  return os.str();
}

DiffSystem build_omega_system(const RatK& alpha, const Place& place) {
  const FqContext& ctx = alpha.ctx();
  Matrix<PolyKT> phi = zero_poly_matrix(ctx, 1);
  phi(0, 0) = PolyKT::one_minus(alpha.frobenius(1), 1);
  return DiffSystem{
      place,
      alpha,
      phi,
      [alpha, place](std::int64_t D, std::int64_t N) { return std::vector<TSeries>{omega_product(alpha, place, D, N)}; },
      [alpha, place](int N, std::int64_t prec) {
        return std::vector<LocalNum>{omega_at_inverse_power(alpha, place, N, prec)};
      },
      0,
      [place](std::int64_t prec) { return LocalNum::one(place, prec); },
      RatK::one(ctx),
      {1},
  };
}

DiffSystem build_cmpl_system(const Index& s, const ArgTuple& u, const Place& v) {
  if (v.is_infinite()) throw DomainError("difference systems are built at a finite place");
  if (static_cast<int>(u.size()) != s.depth()) throw DomainError("argument count does not match the index");
  if (!domain_check(s, u, DomainTag::ConvV, v)) throw DomainError("arguments outside ConvV");
  const FqContext& ctx = v.ctx();
  const int r = s.depth();
  const int n = r + 1;
  const RatK alpha = RatK(v.uniformizer());
  const RatK aq = alpha.frobenius(1);
  // tail[l] = s_{l+1} + ... + s_r (0-based), head[l] = s_1 + ... + s_l.
  std::vector<int> tail(r + 1, 0), head(r + 1, 0);
  for (int l = r - 1; l >= 0; --l) tail[l] = tail[l + 1] + s[l];
  for (int l = 1; l <= r; ++l) head[l] = head[l - 1] + s[l - 1];

  Matrix<PolyKT> phi = zero_poly_matrix(ctx, n);
  phi(0, 0) = PolyKT::one_minus(aq, tail[0]);
  for (int l = 1; l <= r; ++l) {
    const PolyKT th = PolyKT::t_power(ctx, head[l - 1]);
    phi(l, l - 1) = (th * PolyKT::one_minus(aq, tail[l - 1])).scale(u[l - 1]);
    phi(l, l) = PolyKT::t_power(ctx, head[l]) * PolyKT::one_minus(aq, tail[l]);
  }

  auto psi = [s, u, v, alpha, tail, r](std::int64_t D, std::int64_t N) {
    std::vector<TSeries> out{omega_power(alpha, v, tail[0], D, N)};
    for (int l = 1; l <= r; ++l) {
      const Index sl = s.prefix(l);
      const ArgTuple ul(u.begin(), u.begin() + l);
      out.push_back((omega_power(alpha, v, tail[l], D, N) * deformation_build(sl, ul, v, D, N)).truncate(D, N));
    }
    return out;
  };
  auto psi_at = [s, u, v, alpha, tail, r](int N, std::int64_t prec) {
    std::vector<LocalNum> out{omega_power_at(alpha, v, tail[0], N, prec)};
    for (int l = 1; l <= r; ++l) {
      const Index sl = s.prefix(l);
      const ArgTuple ul(u.begin(), u.begin() + l);
      if (tail[l] == 0) {
        out.push_back(deformation_specialize(sl, ul, v, N, prec));
        continue;
      }
      const LocalNum om = omega_power_at(alpha, v, tail[l], N, prec);
      if (om.is_exact_zero()) {
        out.push_back(om);
        continue;
      }
      out.push_back((om * deformation_specialize(sl, ul, v, N, prec)).truncate(prec));
    }
    return out;
  };
  return DiffSystem{
      v,
      alpha,
      phi,
      psi,
      psi_at,
      s.weight(),
      [s, u, v](std::int64_t prec) { return cmpl_eval(s, u, v, prec); },
      RatK::one(ctx),
      {n},
  };
}

DiffSystem block_sum(const std::vector<DiffSystem>& systems) {
  if (systems.empty()) throw DomainError("empty block sum");
  if (systems.size() == 1) return systems[0];
  const DiffSystem& first = systems[0];
  std::size_t n = 0;
  std::vector<int> blocks;
  for (const auto& s : systems) {
    if (s.place != first.place || s.alpha != first.alpha) throw DomainError("block sum needs a common place and α");
    n += static_cast<std::size_t>(s.size());
    blocks.insert(blocks.end(), s.blocks.begin(), s.blocks.end());
  }
  Matrix<PolyKT> phi = zero_poly_matrix(first.alpha.ctx(), n);
  std::size_t off = 0;
  for (const auto& s : systems) {
    for (int i = 0; i < s.size(); ++i) {
      for (int j = 0; j < s.size(); ++j) phi(off + i, off + j) = s.phi_twisted(i, j);
    }
    off += static_cast<std::size_t>(s.size());
  }
  DiffSystem out = first;
  out.phi_twisted = phi;
  out.blocks = blocks;
  out.psi = [systems](std::int64_t D, std::int64_t N) {
    std::vector<TSeries> all;
    for (const auto& s : systems) {
      auto p = s.psi(D, N);
      all.insert(all.end(), p.begin(), p.end());
    }
    return all;
  };
  out.psi_at = [systems](int N, std::int64_t prec) {
    std::vector<LocalNum> all;
    for (const auto& s : systems) {
      auto p = s.psi_at(N, prec);
      all.insert(all.end(), p.begin(), p.end());
    }
    return all;
  };
  return out;
}

DiffSystem pad_weight(const DiffSystem& sys, int k) {
  if (k < 0) throw DomainError("negative padding");
  if (k == 0) return sys;
  DiffSystem out = sys;
  const PolyKT f = PolyKT::one_minus(sys.alpha.frobenius(1), static_cast<std::size_t>(k));
  for (int i = 0; i < sys.size(); ++i) {
    for (int j = 0; j < sys.size(); ++j) out.phi_twisted(i, j) = sys.phi_twisted(i, j) * f;
  }
  out.weight = sys.weight + k;
  const RatK alpha = sys.alpha;
  const Place place = sys.place;
  out.psi = [inner = sys.psi, alpha, place, k](std::int64_t D, std::int64_t N) {
    auto p = inner(D, N);
    const TSeries om = omega_power(alpha, place, k, D, N);
    for (auto& x : p) x = (x * om).truncate(D, N);
    return p;
  };
  out.psi_at = [inner = sys.psi_at, alpha, place, k](int N, std::int64_t prec) {
    auto p = inner(N, prec);
    const LocalNum om = omega_power_at(alpha, place, k, N, prec);
    for (auto& x : p) x = (x * om).truncate(prec);
    return p;
  };
  return out;
}

std::string ResidualReport::to_string() const {
  std::ostringstream os;
  os << "residual_ord: " << (residual_ord >= kInfPrec ? std::string("inf") : std::to_string(residual_ord))
     << "\nnorm: " << norm.to_string() << "\nverified: " << (verified ? "yes" : "no");
  return os.str();
}

ResidualReport verify_difference(const DiffSystem& sys, std::int64_t D, std::int64_t N) {
  const auto psi = sys.psi(D, N);
  const int n = sys.size();
  if (static_cast<int>(psi.size()) != n) throw AssertionFailure("ψ has the wrong length");
  std::vector<TSeries> tw;
  for (const auto& p : psi) tw.push_back(p.twist(1).truncate(D, N));
  std::int64_t worst = kInfPrec;
  TSeries worst_row(sys.place, D, N);
  for (int i = 0; i < n; ++i) {
    TSeries acc = psi[i];
    for (int j = 0; j < n; ++j) {
      if (sys.phi_twisted(i, j).is_zero()) continue;
      acc = acc - (sys.phi_twisted(i, j).to_tseries(sys.place, D, N) * tw[j]).truncate(D, N);
    }
    acc = acc.truncate(D, N);
    const std::int64_t o = min_coeff_ord(acc);
    if (o < worst || i == 0) {
      worst = std::min(worst, o);
      worst_row = acc;
    }
  }
  return {worst, gauss_norm(worst_row), worst >= N};
}

bool det_nonvanishing(const DiffSystem& sys, const RatK& gamma, int i_max) {
  const int n = sys.size();
  for (int i = 1; i <= i_max; ++i) {
    Matrix<RatK> m(n, n, RatK(gamma.ctx()));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) m(a, b) = sys.phi_twisted(a, b).twist(static_cast<unsigned>(i - 1)).eval(gamma);
    }
    if (determinant(m).is_zero()) return false;
  }
  return true;
}

std::string MplReport::to_string() const {
  std::ostringstream os;
  os << "passed: " << (passed ? "yes" : "no") << "\nfailed_condition: " << failed_condition << "\nchecked_N:";
  for (int N : checked_N) os << " " << N;
  os << "\ncondition4_agreement:";
  for (auto a : condition4_agreement) os << " " << (a >= kInfPrec ? std::string("inf") : std::to_string(a));
  if (!detail.empty()) os << "\ndetail: " << detail;
  return os.str();
}

MplReport mpl_certificate(const DiffSystem& sys, int w, const PolyKT& f, const std::vector<int>& N_list,
                          std::int64_t prec, SpecializationForm form, std::int64_t D, int det_checks) {
  MplReport rep;
  rep.checked_N = N_list;
  auto fail = [&](int cond, std::string why) {
    rep.failed_condition = cond;
    rep.detail = std::move(why);
    return rep;
  };
  const int n = sys.size();
  if (n < 2) return fail(1, "system size must be at least 2");
  // (1) difference equation and det Φ(γ^{q^{-i}}) ≠ 0 with γ = 1/α.
  const auto res = verify_difference(sys, D, prec);
  if (!res.verified) return fail(1, "difference equation residual ord " + std::to_string(res.residual_ord));
  if (!det_nonvanishing(sys, sys.alpha.inv(), det_checks)) return fail(1, "det Φ vanishes at a twisted γ");
  // (2) last column of Φ is (0, ..., 0, f); in twisted form the entry is f^{(1)}.
  for (int i = 0; i + 1 < n; ++i) {
    if (!sys.phi_twisted(i, n - 1).is_zero()) return fail(2, "last column has a nonzero off-diagonal entry");
  }
  if (!(sys.phi_twisted(n - 1, n - 1) == f.twist(1))) return fail(2, "last diagonal entry is not f");
  // (3) ψ(1/α) = (π̃^w, ..., cZπ̃^w).
  const Place& pl = sys.place;
  const LocalNum pt = pi_tilde(sys.alpha, pl, prec).pow(static_cast<std::uint64_t>(w)).truncate(prec);
  const LocalNum czp = (embed_abs(sys.c, pl, prec) * sys.value(prec) * pt).truncate(prec);
  const auto at0 = sys.psi_at(0, prec);
  if (!agree_to(at0.front(), pt, prec)) return fail(3, "first entry of ψ(1/α) is not π̃^w");
  if (!agree_to(at0.back(), czp, prec)) return fail(3, "last entry of ψ(1/α) is not cZπ̃^w");
  // (4) ψ(α^{-q^N}) = (0, ..., 0, κ·(cZπ̃^w)^{q^N}).
  const std::int64_t oa = pl.ord(sys.alpha);
  for (int N : N_list) {
    if (N < 1) return fail(4, "N must be positive");
    const auto at = sys.psi_at(N, prec);
    for (int i = 0; i + 1 < n; ++i) {
      if (!at[i].is_zero_to_precision() || at[i].abs_precision() < prec) {
        return fail(4, "entry " + std::to_string(i + 1) + " of ψ(α^{-q^N}) is not zero");
      }
    }
    LocalNum target = czp.frobenius(static_cast<unsigned>(N));
    if (form == SpecializationForm::Corrected) {
      if (oa != 1 || !(sys.alpha == RatK(pl.uniformizer()))) {
        return fail(4, "corrected form is implemented for α = ϖ");
      }
      target = target.shift(-sat_mul(sat_mul(N, sat_qpow(pl.q(), N)), w));
    }
    const std::int64_t agree = diff_ord(at.back(), target);
    rep.condition4_agreement.push_back(agree);
    if (agree < prec) return fail(4, "last entry of ψ(α^{-q^N}) differs at N = " + std::to_string(N));
  }
  rep.passed = true;
  return rep;
}

bool vabp_certify(const DiffSystem& sys, const RatK& gamma, const std::vector<RatK>& rho,
                  const std::vector<PolyKT>& P, std::int64_t D, std::int64_t N) {
  const int n = sys.size();
  if (static_cast<int>(P.size()) != n || static_cast<int>(rho.size()) != n) {
    throw DomainError("P and ρ must match the system size");
  }
  if (!det_nonvanishing(sys, gamma, 5)) return false;
  for (int i = 0; i < n; ++i) {
    if (P[i].eval(gamma) != rho[i]) return false;
  }
  const auto psi = sys.psi(D, N);
  TSeries acc(sys.place, D, N);
  for (int i = 0; i < n; ++i) {
    if (P[i].is_zero()) continue;
    acc = acc + (P[i].to_tseries(sys.place, D, N) * psi[i]).truncate(D, N);
  }
  return min_coeff_ord(acc.truncate(D, N)) >= N;
}

}  // namespace vmz
