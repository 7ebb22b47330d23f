#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/estimators.hpp"
#include "nodal/torus.hpp"

using namespace nodal;

namespace {

constexpr double kPi = std::numbers::pi;

long lattice_count(int R2) {
  long c = 0;
  int K = static_cast<int>(std::sqrt(R2)) + 1;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) c += a * a + b * b <= R2;
  return c;
}

}  // namespace

TEST_CASE("ensemble enumeration") {
  auto e1 = build_ensemble(1, 100);
  CHECK(e1.N_L() == 21);
  CHECK(e1.K == 10);
  auto e2 = build_ensemble(2, 100);
  CHECK(e2.N_L() == 317);
  CHECK(static_cast<long>(e2.N_L()) == lattice_count(100));
  auto modes = e2.modes();
  for (const auto& k : modes) {
    bool found = false;
    for (const auto& m : modes) found = found || (m[0] == -k[0] && m[1] == -k[1]);
    CHECK(found);
  }
  auto big = build_ensemble(2, 1e4);
  CHECK(static_cast<long>(big.N_L()) == lattice_count(10000));
  CHECK(std::abs(big.N_L() / 1e4 - kPi) < 0.01 * kPi);
  for (double L : {1e3, 1e4}) CHECK(std::abs(build_ensemble(2, L).N_L() / L - kPi) <= 5 / std::sqrt(L));
  CHECK_THROWS_AS(build_ensemble(3, 10), PreconditionError);
  CHECK_THROWS_AS(build_ensemble(2, 0.5), PreconditionError);
}

TEST_CASE("section sampling") {
  auto e = build_ensemble(2, 100);
  auto a = sample_section(e, 42, 3), b = sample_section(e, 42, 3);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.coeffs != sample_section(e, 42, 4).coeffs);
  std::vector<double> pool;
  for (int t = 0; pool.size() < 100000; ++t)
    for (double c : sample_section(e, 9, t).coeffs) pool.push_back(c);
  double m = 0, v = 0;
  for (double c : pool) m += c;
  m /= pool.size();
  for (double c : pool) v += (c - m) * (c - m);
  v /= pool.size() - 1;
  CHECK(std::abs(v - 0.5) < 0.01);

  std::vector<double> norms;
  for (int t = 0; t < 1000; ++t) {
    double s = 0;
    for (double c : sample_section(e, 5, t).coeffs) s += c * c;
    norms.push_back(s);
  }
  auto sm = summarize(norms);
  CHECK(std::abs(sm.mean - e.N_L() / 2.0) <= 3 * sm.stderr_);
}

TEST_CASE("section evaluation") {
  auto e = build_ensemble(1, 4);
  RandomSection s;
  s.coeffs.assign(e.N_L(), 0.0);
  s.coeffs[1] = 1.0;  // cos(x) / sqrt(pi)
  for (double x : {0.0, 0.3, 1.7, 4.0}) CHECK(std::abs(eval_section_point(e, s, &x) - std::cos(x) / std::sqrt(kPi)) < 1e-12);
  auto g = eval_section_tensor(e, s, {0.0, 2 * kPi}, {});
  CHECK(std::abs(g.v[0] - g.v[1]) < 1e-12);

  auto e2 = build_ensemble(2, 60);
  auto r = sample_section(e2, 1, 0);
  std::vector<double> xs{0.1, 1.3, 5.9}, ys{2.2, 0.0, 3.3, 6.0};
  auto t = eval_section_tensor(e2, r, xs, ys);
  const double d = 1e-4;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      double x[2] = {xs[i], ys[j]}, grad[2];
      double v = eval_section_point(e2, r, x, grad);
      CHECK(t.v[i * 4 + j] == doctest::Approx(v).epsilon(1e-10));
      CHECK(t.gx[i * 4 + j] == doctest::Approx(grad[0]).epsilon(1e-9));
      double xp[2] = {xs[i] + d, ys[j]}, xm[2] = {xs[i] - d, ys[j]};
      double fd = (eval_section_point(e2, r, xp) - eval_section_point(e2, r, xm)) / (2 * d);
      CHECK(std::abs(fd - t.gx[i * 4 + j]) < 1e-5 * (1 + std::abs(fd)));
      double yp[2] = {xs[i], ys[j] + d}, ym[2] = {xs[i], ys[j] - d};
      fd = (eval_section_point(e2, r, yp) - eval_section_point(e2, r, ym)) / (2 * d);
      CHECK(std::abs(fd - t.gy[i * 4 + j]) < 1e-5 * (1 + std::abs(fd)));
    }
  auto f = eval_section(e2, r, {0.0, 0.0}, 0.05, 41);
  auto obs = f.observed_lipschitz();
  CHECK(obs[0] <= f.lip_value);
  CHECK(obs[1] <= f.lip_grad);
}

TEST_CASE("spectral kernel") {
  auto e = build_ensemble(2, 50);
  double x[2] = {0.4, 2.0}, y[2] = {1.0, 5.5};
  CHECK(spectral_kernel(e, x, x) == doctest::Approx(e.N_L() / (4 * kPi * kPi)));
  CHECK(spectral_kernel(e, y, y) == doctest::Approx(e.N_L() / (4 * kPi * kPi)));
  // reproducing property by the periodic trapezoid rule (exact for trigonometric products)
  auto s = sample_section(e, 3, 0);
  const int G = 64;
  const double h = 2 * kPi / G;
  double acc = 0;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      double z[2] = {i * h, j * h};
      acc += spectral_kernel(e, x, z) * eval_section_point(e, s, z) * h * h;
    }
  CHECK(std::abs(acc - eval_section_point(e, s, x)) < 1e-8);
}

TEST_CASE("rescaled kernel approaches the ball transform") {
  // (2 pi)^{-2} int_{|xi|<=1} e^{i<z,xi>} = J1(|z|) / (2 pi |z|); pointwise errors
  // carry lattice-point fluctuations, so compare the sup over a window
  double prev = 1e9;
  for (double L : {100.0, 400.0, 1600.0, 6400.0, 25600.0}) {
    auto e = build_ensemble(2, L);
    double err = 0;
    for (double z = 0.25; z <= 4.0; z += 0.25)
      for (double th = 0; th < kPi; th += 0.5) {
        double x[2] = {0, 0}, y[2] = {z * std::cos(th) / std::sqrt(L), z * std::sin(th) / std::sqrt(L)};
        err = std::max(err, std::abs(spectral_kernel(e, x, y) / L - std::cyl_bessel_j(1, z) / (2 * kPi * z)));
      }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("nodal extraction on the torus") {
  auto e = build_ensemble(1, 1);
  RandomSection s;
  s.coeffs = {0.0, 1.0, 0.0};
  auto ns = nodal_extract(e, s, 1024);
  REQUIRE(ns.b0 == 2);
  CHECK(std::abs(ns.zeros[0] - kPi / 2) < 1e-9);
  CHECK(std::abs(ns.zeros[1] - 3 * kPi / 2) < 1e-9);
  CHECK_THROWS_AS(nodal_extract(build_ensemble(2, 400), sample_section(build_ensemble(2, 400), 1), 64),
                  PreconditionError);
}

TEST_CASE("parity and refinement stability") {
  auto e = build_ensemble(2, 200);
  int stable = 0;
  for (int t = 0; t < 50; ++t) {
    auto s = sample_section(e, 17, t);
    auto a = nodal_extract(e, s, 512), b = nodal_extract(e, s.negated(), 512);
    CHECK(a.b0 == b.b0);
    CHECK(a.ambiguous_cells == b.ambiguous_cells);
    bool same = a.loops.size() == b.loops.size();
    for (std::size_t k = 0; same && k < a.loops.size(); ++k) same = a.loops[k].pts == b.loops[k].pts;
    CHECK(same);
    stable += nodal_extract(e, s, 1024).b0 == a.b0;
  }
  CHECK(stable == 50);
}

TEST_CASE("Kac-Rice mean for n = 1") {
  auto e = build_ensemble(1, 100);
  CHECK(kac_rice_zeros(10) == doctest::Approx(2 * std::sqrt(110.0 / 3)));
  auto m = estimate_b0(e, 2000, 1024, 1);
  CHECK(std::abs(m.mean * 10 - kac_rice_zeros(10)) <= 3 * m.stderr_ * 10);
  // same result for any worker count
  auto a = estimate_b0(e, 200, 1024, 4, 1), b = estimate_b0(e, 200, 1024, 4, 3);
  CHECK(a.samples == b.samples);
}

TEST_CASE("probability estimator") {
  auto e = build_ensemble(2, 200);
  std::vector<double> x0{1.0, 2.0};
  auto tiny = estimate_prob_sigma(e, x0, 0.05, SigmaType::one_loop, 100, 64, 3);
  CHECK(tiny.p_hat == 0.0);
  double prev = 0, prev_se = 0;
  for (double R : {2.0, 5.0, 10.0}) {
    auto p = estimate_prob_sigma(e, x0, R, SigmaType::one_loop, 200, 128, 3);
    CHECK(p.p_hat + 2 * std::hypot(p.stderr_, prev_se) >= prev);
    prev = p.p_hat;
    prev_se = p.stderr_;
  }
  CHECK(prev > 0);
}

TEST_CASE("C1 norms") {
  auto e = build_ensemble(2, 400);
  auto a = empirical_c1(e, {1.0, 1.0}, 1.0, 100, 8);
  auto b = empirical_c1(e, {1.0, 1.0}, 2.0, 100, 8);
  CHECK(b.sup_norm.mean > a.sup_norm.mean);
  CHECK(b.grad_sup[0].mean > a.grad_sup[0].mean);
  auto c = empirical_c1(e, {4.0, 0.5}, 1.0, 100, 9);
  CHECK(std::abs(a.sup_norm.mean - c.sup_norm.mean) <= 3 * std::hypot(a.sup_norm.stderr_, c.sup_norm.stderr_));
}

TEST_CASE("local model implementation converges") {
  std::vector<double> x0{kPi, kPi};
  double prev = 1e9;
  LocalModelResult last;
  for (double L : {100.0, 400.0, 1600.0}) {
    auto r = implement_local_model(build_ensemble(2, L), x0, {});
    MESSAGE("L=" << L << " conv=" << r.conv_error << " |sL|=" << r.norm_sL << " |f|=" << r.norm_f
                 << " loops=" << r.loops_in_ball);
    CHECK(r.conv_error < prev);
    prev = r.conv_error;
    last = r;
  }
  CHECK(std::abs(last.norm_sL - last.norm_f) <= 0.05 * last.norm_f);
  CHECK(last.loops_in_ball == 2);
}
