#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/truncation.hpp"

using namespace nodal;

TEST_CASE("cutoff profile") {
  TruncationSpec s{2.0, 1.0};
  CHECK(s.chi(0.0) == 1.0);
  CHECK(s.chi(1.0) == 1.0);
  CHECK(s.chi(2.0) == 0.0);
  CHECK(s.chi(5.0) == 0.0);
  double prev = 1.0;
  for (double r = 0; r <= 2.5; r += 0.01) {
    CHECK(s.chi(r) <= prev);
    CHECK(s.chi(r) >= 0.0);
    prev = s.chi(r);
  }
  CHECK(smoothstep5(0.5) == doctest::Approx(0.5));
}

TEST_CASE("wide cutoff reproduces q") {
  auto q = make_product_spheres_poly(2, 0);
  TruncatedField f(q, {1.0, 1e-3});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int t = 0; t < 10; ++t) {
    double p[2] = {U(rng), U(rng)};
    CHECK(std::abs(f(p) - q(p)) < 1e-6);
  }
}

TEST_CASE("truncated field is real and band-limited") {
  auto q = make_product_spheres_poly(2, 0);
  TruncationSpec spec{1.0, 1.0 / 96};
  TruncatedField f(q, spec);
  double p[2] = {1.0, 0.5};
  CHECK(std::abs(f.eval_complex(p).imag()) <= 1e-10);
  CHECK(f.max_node_radius() <= spec.c / spec.eta);
  CHECK(f.max_node_radius() * spec.eta <= spec.c);
  TruncationSpec tight{1.0, 1.0 / 8};
  TruncatedField g(q, tight);
  CHECK(g.max_node_radius() * tight.eta <= tight.c);
}

TEST_CASE("tensor-grid evaluation equals point evaluation") {
  auto q = make_product_spheres_poly(2, 1);
  TruncatedField f(q, {1.0, 1.0 / 8});
  std::vector<double> xs{-2.0, -0.3, 0.0, 1.7}, ys{-1.1, 0.4, 2.2};
  const double eta = 1.0 / 8;
  auto g = f.grid(xs, ys, eta);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      double x[2] = {xs[i], ys[j]}, grad[2];
      f.rescaled_gradient(x, grad);
      CHECK(g.v[i * 3 + j] == doctest::Approx(f.rescaled(x)).epsilon(1e-10));
      CHECK(g.gx[i * 3 + j] == doctest::Approx(grad[0]).epsilon(1e-9));
      CHECK(g.gy[i * 3 + j] == doctest::Approx(grad[1]).epsilon(1e-9));
    }
}

TEST_CASE("residual evaluator agrees with the tensor difference") {
  for (int n = 1; n <= 2; ++n) {
    auto q = make_product_spheres_poly(n, 0);
    TruncationSpec spec{1.0, 1.0 / 8};
    TruncatedField f(q, spec);
    TruncationResidual res(q, spec, 3.0);
    std::vector<double> xs{-3.0, -1.0, 0.2, 2.9}, ys{-2.0, 0.0, 1.5};
    auto r = res.grid(xs, ys);
    for (int i = 0; i < r.nx; ++i)
      for (int j = 0; j < r.ny; ++j) {
        std::vector<double> p{xs[i]};
        if (n == 2) p.push_back(ys[j]);
        CHECK(std::abs(r.v[i * r.ny + j] - (f(p) - q(p))) < 2e-8);
      }
    CHECK(res.l2_norm() <= truncation_bounds(q, spec.c, spec.eta).l2());
  }
}

TEST_CASE("truncation sup bound on a 1-D grid at ratio 2") {
  auto q = make_product_spheres_poly(1, 0);
  TruncationSpec spec{1.0, 0.25};
  TruncatedField f(q, spec);
  double sup = 0;
  for (int k = 0; k <= 2000; ++k) {
    double x[1] = {-8 + 16.0 * k / 2000};
    sup = std::max(sup, std::abs(f(x) - q(x)));
  }
  CHECK(sup > 0);
  CHECK(sup <= truncation_bounds(q, spec.c, spec.eta).sup());
}

TEST_CASE("l2 norm of the truncated field") {
  auto q = make_product_spheres_poly(2, 0);
  TruncatedField wide(q, {1.0, 1e-3});
  CHECK(wide.l2_norm() == doctest::Approx(barrier_norm_check(2, 0).numeric_norm).epsilon(1e-8));
  TruncatedField narrow(q, {1.0, 1.0 / 8});
  CHECK(narrow.l2_norm() < wide.l2_norm());
}

TEST_CASE("unsupported dimensions") {
  CHECK_THROWS_AS(TruncatedField(make_product_spheres_poly(3, 0), {1.0, 0.1}), PreconditionError);
}
