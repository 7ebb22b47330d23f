#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/special.hpp"
#include "nodal/spectral_domain.hpp"

using namespace nodal;
constexpr double kPi = std::numbers::pi;

TEST_CASE("ball_moment closed forms") {
  CHECK(ball_moment(1, 1.0, {}).value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ball_moment(2, 1.0, {}).value() == doctest::Approx(kPi).epsilon(1e-14));
  // polar coordinates: (1/2) 2 pi int_0^1 rho^3
  CHECK(ball_moment(2, 1.0, {1}).value() == doctest::Approx(kPi / 4).epsilon(1e-14));
  // 1-D: int_{-a}^{a} x^{2i} = 2 a^{2i+1} / (2i+1)
  CHECK(ball_moment(1, 1.5, {1, 1}).value() == doctest::Approx(2 * std::pow(1.5, 5) / 5).epsilon(1e-13));
  CHECK_THROWS_AS(ball_moment(0, 1.0, {}), PreconditionError);
  CHECK_THROWS_AS(ball_moment(2, 0.0, {}), PreconditionError);
  CHECK_THROWS_AS(ball_moment(2, 1.0, {3}), PreconditionError);
}

TEST_CASE("ball_moment scaling, monotonicity, permutation") {
  for (int n = 1; n <= 4; ++n) {
    MultiIndex idx = {1, n, 1};
    double i = idx.size();
    double l1 = ball_moment(n, 1.0, idx).log();
    double l2 = ball_moment(n, 2.0, idx).log();
    CHECK(l2 == l1 + (n + 2 * i) * std::log(2.0));
    CHECK(ball_moment(n, 1.1, idx) > ball_moment(n, 1.0, idx));
    CHECK(ball_moment(n, 1.3, {n, 1, 1}) == ball_moment(n, 1.3, idx));
  }
}

TEST_CASE("moment_mc examples") {
  auto b2 = SymbolBody::ball(2, 1.0);
  auto m0 = moment_mc(b2, {}, 1'000'000, 11);
  CHECK(std::abs(m0.estimate.value() - kPi) <= 3 * m0.stderr_);
  auto m1 = moment_mc(b2, {1}, 1'000'000, 12);
  CHECK(std::abs(m1.estimate.value() - kPi / 4) <= 3 * m1.stderr_);
  auto b3 = SymbolBody::ball(3, 2.0);
  auto m2 = moment_mc(b3, {1, 1}, 1'000'000, 13);
  CHECK(std::abs(m2.estimate.value() - ball_moment(3, 2.0, {1, 1}).value()) <= 3 * m2.stderr_);
}

TEST_CASE("moment_mc is deterministic and thread-count independent") {
  auto b = SymbolBody::ball(2, 1.0);
  auto a1 = moment_mc(b, {2}, 300'000, 99, 1);
  auto a3 = moment_mc(b, {2}, 300'000, 99, 3);
  CHECK(a1.estimate == a3.estimate);
  CHECK(a1.stderr_ == a3.stderr_);
}

TEST_CASE("ball_moment vs moment_mc over 100 seeds") {
  struct Case {
    int n;
    double r;
    MultiIndex idx;
  };
  for (const Case& c : {Case{2, 1.0, {1}}, Case{3, 2.0, {1, 1}}, Case{1, 0.7, {1, 1, 1}}}) {
    auto body = SymbolBody::ball(c.n, c.r);
    double exact = ball_moment(c.n, c.r, c.idx).value();
    int ok = 0;
    for (int s = 0; s < 100; ++s) {
      auto m = moment_mc(body, c.idx, 20'000, 1000 + s);
      if (std::abs(m.estimate.value() - exact) <= 4 * m.stderr_) ++ok;
    }
    CHECK(ok >= 99);
  }
}

TEST_CASE("moment_mc rejects degenerate bodies") {
  // an l1 ball in 12 dimensions fills ~ 2^12/12! of its box
  auto b = SymbolBody::lp_ball(12, 1.0, 1.0);
  CHECK_THROWS_AS(moment_mc(b, {}, 100'000, 1), NumericalError);
}

TEST_CASE("symbol_extents") {
  auto e1 = symbol_extents(SymbolBody::ball(2, 1.0));
  CHECK(e1.nu.value() == doctest::Approx(kPi));
  CHECK(e1.d == 1.0);
  auto e2 = symbol_extents(SymbolBody::ball(1, 1.0));
  CHECK(e2.nu.value() == doctest::Approx(2.0));
  CHECK(e2.d == 1.0);
  auto ann = SymbolBody::annulus_bounded(2, 1.0, 2.0, SymbolBody::ball(2, 2.0));
  auto e3 = symbol_extents(ann);
  CHECK(e3.nu.value() == doctest::Approx(4 * kPi));
  CHECK(e3.d == 2.0);
  CHECK_THROWS_AS(SymbolBody::annulus_bounded(2, 3.0, 2.0, SymbolBody::ball(2, 2.0)), PreconditionError);
  CHECK_THROWS_AS(SymbolBody::ball(2, -1.0), PreconditionError);
}

TEST_CASE("lp body volume agrees with Monte Carlo") {
  auto b = SymbolBody::lp_ball(2, 4.0, 1.0);
  auto m = moment_mc(b, {}, 1'000'000, 5);
  CHECK(std::abs(m.estimate.value() - b.nu().value()) <= 4 * m.stderr_);
  CHECK(b.d() == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("moment table equals ordered-tuple enumeration and radial closed form") {
  for (int n = 1; n <= 4; ++n) {
    double r = 1.3;
    auto t = moment_table(SymbolBody::ball(n, r));
    CHECK(t.k == static_cast<int>(std::floor(n / 2.0 + 1)));
    for (int i = 0; i <= t.k; ++i) {
      // int_B |xi|^{2i} = area(S^{n-1}) r^{n+2i} / (n+2i)
      double radial = std::exp(log_sphere_area(n)) * std::pow(r, n + 2 * i) / (n + 2 * i);
      CHECK(t.S[i].value.value() == doctest::Approx(radial).epsilon(1e-12));
      // brute force over all n^i ordered tuples
      MultiIndex idx(i, 1);
      double brute = 0, brute_t1 = 0;
      for (;;) {
        brute += ball_moment(n, r, idx).value();
        MultiIndex with = idx;
        with.push_back(1);
        brute_t1 += ball_moment(n, r, with).value();
        int p = 0;
        while (p < i && idx[p] == n) idx[p++] = 1;
        if (p == i) break;
        ++idx[p];
      }
      CHECK(t.S[i].value.value() == doctest::Approx(brute).epsilon(1e-12));
      CHECK(t.T[0][i].value.value() == doctest::Approx(brute_t1).epsilon(1e-12));
      for (int j = 1; j < n; ++j) CHECK(t.T[j][i].value.value() == doctest::Approx(brute_t1).epsilon(1e-12));
    }
  }
}

TEST_CASE("Monte Carlo moment table brackets the exact one") {
  auto exact = moment_table(SymbolBody::ball(2, 1.0));
  auto ann = SymbolBody::annulus_bounded(2, 1.0, 1.0, SymbolBody::ball(2, 1.0));
  auto mc = moment_table(ann, {400'000, 3, 0});
  CHECK_FALSE(mc.exact);
  for (int i = 0; i <= mc.k; ++i) {
    CHECK(mc.S[i].lower <= exact.S[i].value);
    CHECK(exact.S[i].value <= mc.S[i].upper);
  }
}
