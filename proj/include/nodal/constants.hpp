#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nodal/log_real.hpp"
#include "nodal/spectral_domain.hpp"

namespace nodal {

struct RhoResult {
  LogReal value;
  LogReal lower, upper;  // equal to value for exact moments
  double t_star = 0.0;
  bool at_boundary = false;  // optimum hit the end of [1e-6, 1e6]
};

// Generic infimum over t > 0 of
//   sqrt2 k / (2 pi)^{n/2} ((R+t)/t)^{n/2} sum_{i<=k} t^i / i! sqrt(m_i)
RhoResult rho_from_moments(int n, double R, const std::vector<MomentBand>& m);

RhoResult rho_K(const SymbolBody& body, double R, const MomentOptions& opt = {});
// j is 1-based
RhoResult theta_K_j(const SymbolBody& body, double R, int j, const MomentOptions& opt = {});

struct RhoThetaBound {
  LogReal rho_bound, theta_bound;
};
RhoThetaBound rho_theta_upper(const LogReal& nu, double d, int n, double R);

struct PairData {
  double l2_norm = 0.0;
  double window_radius = 0.0;
  std::vector<std::pair<double, double>> pairs;  // (delta, epsilon)
};

struct TauResult {
  LogReal value;
  std::size_t best_pair = 0;
};
TauResult tau(const SymbolBody& body, const PairData& pd, const MomentOptions& opt = {});

struct PResult {
  LogReal value;
  double t_star = 0.0;  // maximizing T (inf when T itself overflows)
};
PResult p_of_tau(const LogReal& tau);

// exp(-(2 tau + 1)^2) / (2 sqrt pi)
LogReal remark_p_lower(const LogReal& tau);

struct PSigmaResult {
  LogReal value;
  bool no_witness = true;
  std::size_t best = 0;
};
PSigmaResult p_sigma_K_R(const SymbolBody& body, const std::vector<PairData>& certs, double R,
                         const MomentOptions& opt = {});

struct CSigmaResult {
  LogReal value;
  double R_m = 0.0;  // grid radius realizing the max (first one on ties)
};
CSigmaResult c_sigma_homogeneous(const std::vector<std::pair<double, LogReal>>& p_curve, double vol_M,
                                 int n);

LogReal closed_form_tau(int n, double c_pg, double d_pg);

struct ClosedFormBounds {
  LogReal tau, c_lower, p_lower;
};
ClosedFormBounds closed_form_bounds(int n, double c_pg, double d_pg, double vol_M);

enum class Operator { laplace, dtn };

struct ChainCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0;  // compared as lhs <= rhs
  bool holds = false;
  bool hard = false;  // violation throws
  bool operator==(const ChainCheck&) const = default;
};

struct CorollaryResult {
  LogReal value;  // lower bound on c_Sigma(P)
  LogReal tau;
  LogReal p_lower;
  std::vector<ChainCheck> checks;
};
CorollaryResult corollary_bound(int n, Operator op, double vol_M);

}  // namespace nodal
