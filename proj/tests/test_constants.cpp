#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

using namespace nodal;
constexpr double kPi = std::numbers::pi;

namespace {

// brute-force oracle: dense log grid in t, no refinement logic shared with the library
double dense_inf(int n, double R, const std::vector<double>& m, double* t_out = nullptr) {
  int k = static_cast<int>(m.size()) - 1;
  double best = INFINITY, bt = 0;
  for (int s = 0; s <= 400000; ++s) {
    double t = std::exp(-8.0 + 16.0 * s / 400000);
    double sum = 0, fact = 1;
    for (int i = 0; i <= k; ++i) {
      if (i > 0) fact *= i;
      sum += std::pow(t, i) / fact * std::sqrt(m[i]);
    }
    double v = std::pow((R + t) / t, n / 2.0) * sum;
    if (v < best) best = v, bt = t;
  }
  if (t_out) *t_out = bt;
  return std::sqrt(2.0) * k / std::pow(2 * kPi, n / 2.0) * best;
}

double dense_p(double tau) {
  double best = 0;
  for (int s = 1; s <= 400000; ++s) {
    double T = tau + 40.0 * s / 400000;
    best = std::max(best, (1 - tau / T) * std::erfc(T) / 2);
  }
  return best;
}

}  // namespace

TEST_CASE("rho_K and theta_K_j on the unit interval") {
  auto b = SymbolBody::ball(1, 1.0);
  double t_oracle;
  // moments of [-1,1]: int x^{2i} = 2/(2i+1)
  double rho_ref = dense_inf(1, 1.0, {2.0, 2.0 / 3}, &t_oracle);
  auto r = rho_K(b, 1.0);
  CHECK(r.value.value() == doctest::Approx(rho_ref).epsilon(1e-7));
  CHECK(r.value.value() == doctest::Approx(1.746).epsilon(1e-3));
  CHECK(r.t_star == doctest::Approx(t_oracle).epsilon(1e-3));
  CHECK_FALSE(r.at_boundary);
  auto th = theta_K_j(b, 1.0, 1);
  CHECK(th.value.value() == doctest::Approx(dense_inf(1, 1.0, {2.0 / 3, 2.0 / 5})).epsilon(1e-7));
  CHECK(r.value.value() <= 2 * std::exp(1.0) / std::sqrt(kPi));
  CHECK(th.value.value() <= 2 * std::exp(1.0) / std::sqrt(kPi));
}

TEST_CASE("rho_K degenerate moments give zero") {
  std::vector<MomentBand> zeros(2);
  CHECK(rho_from_moments(1, 1.0, zeros).value.is_zero());
}

TEST_CASE("theta independent of j for balls") {
  auto b = SymbolBody::ball(3, 0.8);
  double t1 = theta_K_j(b, 2.0, 1).value.log();
  for (int j = 2; j <= 3; ++j) CHECK(theta_K_j(b, 2.0, j).value.log() == doctest::Approx(t1).epsilon(1e-12));
}

TEST_CASE("rho_theta_upper formulas") {
  auto u = rho_theta_upper(LogReal::from_value(2.0), 1.0, 1, 1.0);
  CHECK(u.rho_bound.value() == doctest::Approx(2 * std::exp(1.0) / std::sqrt(kPi)).epsilon(1e-14));
  CHECK(u.theta_bound.value() == doctest::Approx(2 * std::exp(1.0) / std::sqrt(kPi)).epsilon(1e-14));
  auto z = rho_theta_upper(LogReal::from_value(kPi), 1.0, 2, 0.0);
  CHECK(z.rho_bound.value() == doctest::Approx(2 * std::sqrt(2 * kPi) / kPi).epsilon(1e-14));
  CHECK(z.theta_bound.value() == doctest::Approx(2 * std::sqrt(2 * kPi) / kPi).epsilon(1e-14));
}

TEST_CASE("rho and theta below the closed-form bounds, nondecreasing in R") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial % 4;
    double r = U(rng), R = U(rng);
    auto b = SymbolBody::ball(n, r);
    auto bound = rho_theta_upper(b.nu(), b.d(), n, R);
    CHECK(rho_K(b, R).value <= bound.rho_bound);
    CHECK(theta_K_j(b, R, 1).value <= bound.theta_bound);
  }
  auto b = SymbolBody::ball(2, 1.0);
  LogReal prev_r, prev_t;
  for (double R : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    auto r = rho_K(b, R).value, t = theta_K_j(b, R, 2).value;
    CHECK(prev_r <= r);
    CHECK(prev_t <= t);
    prev_r = r;
    prev_t = t;
  }
}

TEST_CASE("tau") {
  auto b = SymbolBody::ball(1, 1.0);
  PairData pd{1.0, 1.0, {{1.0, 1.0}}};
  double expect = rho_K(b, 1.0).value.value() + theta_K_j(b, 1.0, 1).value.value();
  CHECK(tau(b, pd).value.value() == doctest::Approx(expect).epsilon(1e-13));
  PairData two{1.0, 1.0, {{1.0, 1.0}, {2.0, 2.0}}};
  CHECK(tau(b, two).best_pair == 1);
  PairData zero{0.0, 1.0, {{0.5, 0.5}}};
  CHECK(tau(b, zero).value.is_zero());
  PairData scaled{3.0, 1.0, {{0.5, 0.25}}};
  PairData unit{1.0, 1.0, {{0.5, 0.25}}};
  CHECK(tau(b, scaled).value.log() == tau(b, unit).value.log() + std::log(3.0));
  PairData none{1.0, 1.0, {}};
  CHECK_THROWS_WITH(tau(b, none), "no certified transversality pair");
}

TEST_CASE("p_of_tau values") {
  CHECK(p_of_tau(LogReal::zero()).value.value() == 0.5);
  auto p1 = p_of_tau(LogReal::one());
  CHECK(p1.value.value() == doctest::Approx(dense_p(1.0)).epsilon(1e-6));
  CHECK(p1.value.value() == doctest::Approx(7.7e-3).epsilon(0.01));
  CHECK(p1.t_star == doctest::Approx(1.26).epsilon(0.01));
  for (double t : {1e-3, 0.1, 3.0, 10.0})
    CHECK(p_of_tau(LogReal::from_value(t)).value.value() == doctest::Approx(dense_p(t)).epsilon(1e-6));
}

TEST_CASE("p_of_tau is continuous across the tail-regime seam") {
  double lo = p_of_tau(LogReal::from_value(100.0)).value.log();
  double hi = p_of_tau(LogReal::from_value(std::nextafter(100.0, 101.0))).value.log();
  CHECK(lo == doctest::Approx(hi).epsilon(1e-10));
}

TEST_CASE("p_of_tau decreasing, bounded, above the closed-form lower bound") {
  LogReal prev = LogReal::from_value(0.5);
  for (int s = 0; s <= 60; ++s) {
    LogReal t = LogReal::from_log(std::log(10.0) * (-3 + 6.0 * s / 60));
    LogReal p = p_of_tau(t).value;
    CHECK(p < prev);
    CHECK(p <= LogReal::from_value(0.5));
    CHECK(remark_p_lower(t) <= p);
    prev = p;
  }
  for (double lt : {0.0, std::log(5.0), std::log(50.0), 127 * std::pow(2.0, 1.5), 1500.0}) {
    LogReal t = LogReal::from_log(lt);
    LogReal p = p_of_tau(t).value;
    CHECK(p > LogReal::zero());
    CHECK(remark_p_lower(t) <= p);
  }
  CHECK(remark_p_lower(LogReal::zero()).value() == doctest::Approx(std::exp(-1.0) / (2 * std::sqrt(kPi))));
  CHECK(remark_p_lower(LogReal::zero()).value() == doctest::Approx(0.1037).epsilon(1e-3));
}

TEST_CASE("p_sigma_K_R") {
  auto b = SymbolBody::ball(1, 1.0);
  auto e = p_sigma_K_R(b, {}, 1.0);
  CHECK(e.no_witness);
  CHECK(e.value.is_zero());
  PairData c1{1.0, 1.0, {{1.0, 1.0}}}, c2{0.5, 0.8, {{1.0, 1.0}}};
  auto one = p_sigma_K_R(b, {c1}, 1.0);
  CHECK_FALSE(one.no_witness);
  CHECK(one.value == p_of_tau(tau(b, c1).value).value);
  auto two = p_sigma_K_R(b, {c1, c2}, 1.0);
  LogReal p2 = p_of_tau(tau(b, c2).value).value;
  CHECK(two.value == std::max(one.value, p2));
  CHECK_THROWS_AS(p_sigma_K_R(b, {c1}, 0.5), PreconditionError);
}

TEST_CASE("c_sigma_homogeneous") {
  CHECK(c_sigma_homogeneous({{1.0, LogReal::zero()}, {2.0, LogReal::zero()}}, 1.0, 2).value.is_zero());
  auto one = c_sigma_homogeneous({{1.5, LogReal::from_value(0.2)}}, 1.0, 2);
  CHECK(one.value.value() == doctest::Approx(0.2 / (4 * kPi * 1.5 * 1.5)).epsilon(1e-14));
  auto g = c_sigma_homogeneous({{1.0, LogReal::from_value(1e-3)}, {2.0, LogReal::from_value(1e-3)}}, 1.0, 1);
  CHECK(g.value.value() == doctest::Approx(0.5 * 1e-3 / 2).epsilon(1e-14));
  CHECK(g.R_m == 1.0);
  CHECK_THROWS_AS(c_sigma_homogeneous({}, 1.0, 1), PreconditionError);
}

TEST_CASE("closed_form_tau") {
  // term by term at n = 2, c = d = 1
  double l = std::log(20.0) + 5.5 * std::log(8.0) - 0.5 * std::lgamma(2.0) + 2 * std::log(96.0) +
             96 * std::sqrt(10.0);
  CHECK(closed_form_tau(2, 1, 1).log() == doctest::Approx(l).epsilon(1e-14));
  for (int n = 1; n <= 8; ++n) CHECK(closed_form_tau(n, 1, 1).log() <= 127 * std::pow(n, 1.5));
  CHECK(closed_form_tau(3, 1, 2) > closed_form_tau(3, 1, 1));
  CHECK_THROWS_AS(closed_form_tau(2, 2, 1), PreconditionError);
}

TEST_CASE("closed_form_bounds") {
  auto b = closed_form_bounds(2, 1, 1, 4 * kPi * kPi);
  // -ln p ~ e^655 still fits a double at n = 2
  CHECK_FALSE(b.p_lower.is_deep());
  CHECK(std::isfinite(b.c_lower.log()));
  CHECK(b.c_lower.log() < -1e280);
  CHECK(closed_form_bounds(3, 1, 1, 1.0).c_lower.is_deep());
  CHECK(b.p_lower == remark_p_lower(closed_form_tau(2, 1, 1)));
  // ln(-ln p) = ln((2 tau + 1)^2 + ln(2 sqrt pi)), dominated by 2 ln(2 tau)
  double lt = closed_form_tau(2, 1, 1).log();
  CHECK(b.p_lower.neg_loglog() == doctest::Approx(2 * (lt + std::log(2.0))).epsilon(1e-12));
  for (int n = 1; n <= 5; ++n) {
    auto bn = closed_form_bounds(n, 1, 1, 1.0);
    CHECK(bn.p_lower <= p_of_tau(bn.tau).value);
  }
}

TEST_CASE("corollary chain") {
  LogReal prev;
  for (int n = 1; n <= 6; ++n) {
    auto lap = corollary_bound(n, Operator::laplace, 1.0);
    auto dtn = corollary_bound(n, Operator::dtn, 1.0);
    CHECK(lap.value == dtn.value);
    CHECK(lap.value.neg_loglog() <= 257 * std::pow(n, 1.5));
    for (const auto& c : lap.checks)
      if (c.hard) CHECK(c.holds);
    if (n > 1) CHECK(lap.value < prev);
    prev = lap.value;
  }
  // the intermediate simplification of the tau exponent does not hold at n = 1
  auto c1 = corollary_bound(1, Operator::laplace, 1.0);
  CHECK_FALSE(c1.checks[1].holds);
}
