#include "nodal/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/optimize.hpp"
#include "nodal/special.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLnSqrtPi = 0.5 * std::log(kPi);

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

struct Inf {
  LogReal value;
  double t = 0.0;
  bool boundary = false;
};

Inf infimum(int n, double R, const std::vector<LogReal>& m) {
  bool all_zero = true;
  for (const auto& x : m) all_zero = all_zero && x.is_zero();
  if (all_zero) return {LogReal::zero(), 1.0, false};
  const int k = static_cast<int>(m.size()) - 1;
  auto obj = [&](double t) {
    std::vector<double> terms(k + 1);
    for (int i = 0; i <= k; ++i) terms[i] = i * std::log(t) - log_factorial(i) + 0.5 * m[i].log();
    return 0.5 * n * std::log((R + t) / t) + log_sum_exp(terms);
  };
  MinResult r = minimize_log_grid(obj, 1e-6, 1e6);
  double pre = 0.5 * std::log(2.0) + std::log(static_cast<double>(k)) - 0.5 * n * std::log(2 * kPi);
  return {LogReal::from_log(pre + r.fx), r.x, r.at_boundary};
}

RhoResult from_bands(int n, double R, const std::vector<MomentBand>& bands) {
  if (!(R >= 0)) throw PreconditionError("rho: R must be >= 0");
  std::vector<LogReal> v, lo, hi;
  for (const auto& b : bands) {
    v.push_back(b.value);
    lo.push_back(b.lower);
    hi.push_back(b.upper);
  }
  Inf c = infimum(n, R, v);
  RhoResult out{c.value, c.value, c.value, c.t, c.boundary};
  if (lo != v) out.lower = infimum(n, R, lo).value;
  if (hi != v) out.upper = infimum(n, R, hi).value;
  return out;
}

}  // namespace

RhoResult rho_from_moments(int n, double R, const std::vector<MomentBand>& m) {
  if (n < 1 || m.empty()) throw PreconditionError("rho_from_moments: bad arguments");
  return from_bands(n, R, m);
}

RhoResult rho_K(const SymbolBody& body, double R, const MomentOptions& opt) {
  if (!(R > 0)) throw PreconditionError("rho_K: R must be > 0");
  MomentTable t = moment_table(body, opt);
  return from_bands(body.n(), R, t.S);
}

RhoResult theta_K_j(const SymbolBody& body, double R, int j, const MomentOptions& opt) {
  if (!(R > 0)) throw PreconditionError("theta_K_j: R must be > 0");
  if (j < 1 || j > body.n()) throw PreconditionError("theta_K_j: coordinate out of range");
  MomentTable t = moment_table(body, opt);
  return from_bands(body.n(), R, t.T[j - 1]);
}

RhoThetaBound rho_theta_upper(const LogReal& nu, double d, int n, double R) {
  if (n < 1 || !(d > 0) || !(R >= 0) || nu.is_zero())
    throw PreconditionError("rho_theta_upper: arguments must be positive");
  int k = static_cast<int>(std::floor(n / 2.0 + 1.0));
  double l = 0.5 * std::log(2.0) + 0.5 * nu.log() + std::log(static_cast<double>(k)) + R * d * std::sqrt(n) -
             n * kLnSqrtPi;
  return {LogReal::from_log(l), LogReal::from_log(l + std::log(d))};
}

TauResult tau(const SymbolBody& body, const PairData& pd, const MomentOptions& opt) {
  if (pd.pairs.empty()) throw PreconditionError("no certified transversality pair");
  if (!(pd.l2_norm >= 0) || !(pd.window_radius > 0)) throw PreconditionError("tau: bad pair data");
  const int n = body.n();
  MomentTable t = moment_table(body, opt);
  LogReal rho = from_bands(n, pd.window_radius, t.S).value;
  LogReal theta_sum;
  for (int j = 0; j < n; ++j) theta_sum += from_bands(n, pd.window_radius, t.T[j]).value;
  const LogReal nsqrtn = LogReal::from_value(n * std::sqrt(n));
  TauResult best;
  for (std::size_t p = 0; p < pd.pairs.size(); ++p) {
    auto [delta, eps] = pd.pairs[p];
    if (!(delta > 0 && eps > 0)) throw PreconditionError("tau: pairs must be positive");
    LogReal v = rho / LogReal::from_value(delta) + nsqrtn * theta_sum / LogReal::from_value(eps);
    if (p == 0 || v < best.value) best = {v, p};
  }
  best.value = best.value * LogReal::from_value(pd.l2_norm);
  return best;
}

PResult p_of_tau(const LogReal& tau_lr) {
  if (tau_lr.is_zero()) return {LogReal::from_value(0.5), 0.0};
  const double lt = tau_lr.log();
  const double ln2 = std::log(2.0);

  if (lt <= std::log(100.0)) {
    const double tau = std::exp(lt);
    // T = tau + u, maximize (u / (tau + u)) erfc(T) / 2
    auto neg_log_g = [&](double u) { return -(std::log(u) - std::log(tau + u) + log_erfc(tau + u) - ln2); };
    double u_lo = 1e-4 * std::min(std::sqrt(tau), 1.0 / (2 * tau + 1));
    MinResult r = minimize_log_grid(neg_log_g, u_lo, 40.0);
    return {LogReal::from_log(-r.fx), tau + r.x};
  }

  // tail regime: u = v / (2 tau), -ln G = tau^2 + B(v)
  const double e2 = std::exp(-2 * lt);
  const double ln_s = lt < 300 ? log_erfc_asymptotic_factor(std::exp(lt)) : 0.0;
  auto B = [&](double v) {
    return v + 0.25 * v * v * e2 - std::log(v) + ln2 + lt + 2 * (lt + std::log1p(0.5 * v * e2)) + kLnSqrtPi -
           ln_s + ln2;
  };
  MinResult r = minimize_log_grid(B, 1e-3, 1e3);
  double t_star = lt < 700 ? std::exp(lt) + 0.5 * r.x / std::exp(lt) : std::numeric_limits<double>::infinity();
  if (2 * lt < std::log(LogReal::kDeepThreshold)) return {LogReal::from_log(-(std::exp(2 * lt) + r.fx)), t_star};
  return {LogReal::from_neg_loglog(2 * lt + std::log1p(r.fx * e2)), t_star};
}

LogReal remark_p_lower(const LogReal& tau) {
  LogReal s = (LogReal::from_value(2.0) * tau + LogReal::one()).pow(2.0);
  return LogReal::exp_neg(s) / LogReal::from_log(std::log(2.0) + kLnSqrtPi);
}

PSigmaResult p_sigma_K_R(const SymbolBody& body, const std::vector<PairData>& certs, double R,
                         const MomentOptions& opt) {
  PSigmaResult out;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    if (certs[i].window_radius > R) throw PreconditionError("p_sigma_K_R: certificate window exceeds R");
    LogReal p = p_of_tau(tau(body, certs[i], opt).value).value;
    if (out.no_witness || p > out.value) {
      out.value = p;
      out.best = i;
    }
    out.no_witness = false;
  }
  return out;
}

CSigmaResult c_sigma_homogeneous(const std::vector<std::pair<double, LogReal>>& p_curve, double vol_M, int n) {
  if (p_curve.empty()) throw PreconditionError("c_sigma_homogeneous: empty R grid");
  if (n < 1 || !(vol_M > 0)) throw PreconditionError("c_sigma_homogeneous: bad arguments");
  CSigmaResult best;
  bool first = true;
  for (const auto& [R, p] : p_curve) {
    if (!(R > 0)) throw PreconditionError("c_sigma_homogeneous: radii must be positive");
    LogReal v = p / LogReal::from_log(log_ball_volume(n, R));
    if (first || v > best.value) {
      best = {v, R};
      first = false;
    }
  }
  best.value = best.value * LogReal::from_value(vol_M) / LogReal::from_value(std::pow(2.0, n));
  return best;
}

LogReal closed_form_tau(int n, double c, double d) {
  if (n < 1 || !(c > 0) || !(d >= c)) throw PreconditionError("closed_form_tau: need n >= 1 and 0 < c <= d");
  double l = std::log(20.0) + 5.5 * std::log(n + 6.0) - 0.5 * std::lgamma(0.5 * n + 1) +
             0.5 * (n + 2) * std::log(48.0 * n * d / c) + 48.0 * std::sqrt(5.0) * std::pow(n, 1.5) * d / c;
  return LogReal::from_log(l);
}

ClosedFormBounds closed_form_bounds(int n, double c, double d, double vol_M) {
  if (!(vol_M > 0)) throw PreconditionError("closed_form_bounds: volume must be positive");
  LogReal t = closed_form_tau(n, c, d);
  LogReal p = remark_p_lower(t);
  double l_den = (n + 1) * std::log(2.0) + kLnSqrtPi + log_ball_volume(n, 48.0 * std::sqrt(5.0) * n);
  LogReal cl = LogReal::exp_neg((LogReal::from_value(2.0) * t + LogReal::one()).pow(2.0)) *
               LogReal::from_log(n * std::log(c) + std::log(vol_M) - l_den);
  return {t, cl, p};
}

CorollaryResult corollary_bound(int n, Operator op, double vol_M) {
  (void)op;  // both operators have c = d = 1; only the L exponent differs
  if (n < 1) throw PreconditionError("corollary_bound: n >= 1");
  ClosedFormBounds b = closed_form_bounds(n, 1.0, 1.0, vol_M);
  CorollaryResult out{b.c_lower, b.tau, b.p_lower, {}};
  const double nn = n, n15 = std::pow(nn, 1.5), ln_n = std::log(nn);
  auto add = [&](std::string name, double lhs, double rhs, bool hard) {
    out.checks.push_back({std::move(name), lhs, rhs, lhs <= rhs, hard});
  };

  const double lt = b.tau.log();
  double step1 = std::log(20 * std::sqrt(2.0)) + 5.5 * std::log(7.0) + 0.5 * (nn + 2) * std::log(48.0) +
                 6.5 * ln_n + 0.5 * nn * ln_n + 108 * n15;
  double step2 = 18 + 8.5 * (nn - 1) + 0.5 * nn * (2 * std::sqrt(nn) - 1) + 108 * n15;
  add("ln tau <= simplified exponent", lt, step1, false);
  add("simplified exponent <= 18 + 17/2 (n-1) + n/2 (2 sqrt n - 1) + 108 n^1.5", step1, step2, false);
  add("18 + 17/2 (n-1) + n/2 (2 sqrt n - 1) + 108 n^1.5 <= 127 n^1.5", step2, 127 * n15, false);
  add("ln tau <= 127 n^1.5", lt, 127 * n15, true);

  // c / vol = exp(-(2 tau + 1)^2 - rem)
  double rem = (nn + 1) * std::log(2.0) + kLnSqrtPi + nn * std::log(48 * std::sqrt(5.0) * nn) +
               0.5 * nn * std::log(kPi) - std::lgamma(0.5 * nn + 1);
  double ll_sq = 2 * (LogReal::from_value(2.0) * b.tau + LogReal::one()).log();  // ln (2tau+1)^2
  add("remainder <= 3/2 + 6 ln n + n ln n", rem, 1.5 + 6 * ln_n + nn * ln_n, false);
  add("ln (2 tau + 1)^2 <= 256 n^1.5", ll_sq, 256 * n15, false);
  double lnln_n = n > 1 ? std::log(ln_n) : -std::numeric_limits<double>::infinity();
  add("3/2 + 6 ln n + n ln n <= exp(ln(17/2) + ln n + ln ln n)", 1.5 + 6 * ln_n + nn * ln_n,
      std::exp(std::log(8.5) + ln_n + lnln_n), false);

  LogReal per_vol = b.c_lower / LogReal::from_value(vol_M);
  add("ln(-ln(c / vol)) <= 257 n^1.5", per_vol.neg_loglog(), 257 * n15, true);
  LogReal half_root_pi = LogReal::from_log(-std::log(2.0) - kLnSqrtPi);
  LogReal remark_mid = half_root_pi * LogReal::from_neg_loglog(256 * n15);
  // both sides below 1: compare ln(-ln .) with the order reversed
  add("p >= exp(-exp(256 n^1.5)) / (2 sqrt pi)", b.p_lower.neg_loglog(), remark_mid.neg_loglog(), true);
  add("exp(-exp(256 n^1.5)) / (2 sqrt pi) >= exp(-exp(257 n^1.5))", remark_mid.neg_loglog(), 257 * n15, true);

  for (const auto& c : out.checks)
    if (c.hard && !c.holds) throw NumericalError("corollary chain violated: " + c.name);
  return out;
}

}  // namespace nodal
