#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/local_model.hpp"
#include "nodal/quadrature.hpp"

using namespace nodal;
constexpr double kPi = std::numbers::pi;

namespace {

double gauss_integral(const std::function<double(double)>& f) {
  QuadRule q = composite_gauss_width({-14.0, 14.0}, 0.5, 12);
  return integrate([&](double x) { return f(x) * std::exp(-0.5 * x * x); }, q);
}

// int_{R^n} Q^2 e^{-|z|^2} from Gaussian moments: prod Gamma(m_j + 1/2)
double exact_norm_sq(const GaussPoly& q) {
  std::map<std::vector<int>, double> sq;
  for (const auto& [I, a] : q.coeffs())
    for (const auto& [J, b] : q.coeffs()) {
      std::vector<int> K(I.size());
      for (std::size_t j = 0; j < I.size(); ++j) K[j] = I[j] + J[j];
      sq[K] += a * b;
    }
  double s = 0;
  for (const auto& [K, a] : sq) {
    double t = a;
    for (int k : K) {
      if (k % 2) {
        t = 0;
        break;
      }
      t *= std::tgamma(k / 2 + 0.5);
    }
    s += t;
  }
  return s;
}

}  // namespace

TEST_CASE("hermite recurrence") {
  CHECK(hermite(0).coeffs == std::vector<double>{1.0});
  CHECK(hermite(1).coeffs == std::vector<double>{0.0, -1.0});
  for (int k = 0; k <= 10; ++k) CHECK(hermite(k).coeffs.back() == (k % 2 ? -1.0 : 1.0));
  // H_k e^{-x^2/2} is the k-th derivative of the Gaussian: check H_3 = -x^3 + 3x
  CHECK(hermite(3).coeffs == std::vector<double>{0.0, 3.0, 0.0, -1.0});
}

TEST_CASE("hermite identity and orthogonality") {
  for (int k = 0; k <= 8; ++k) {
    auto H = hermite(k);
    double v = gauss_integral([&](double x) { return std::pow(x, k) * H(x); });
    double ref = (k % 2 ? -1.0 : 1.0) * std::tgamma(k + 1.0) * std::sqrt(2 * kPi);
    CHECK(v == doctest::Approx(ref).epsilon(1e-10));
  }
  for (int j = 0; j <= 8; ++j)
    for (int k = 0; k <= 8; ++k) {
      auto Hj = hermite(j), Hk = hermite(k);
      double v = gauss_integral([&](double x) { return Hj(x) * Hk(x); });
      double ref = j == k ? std::tgamma(k + 1.0) * std::sqrt(2 * kPi) : 0.0;
      CHECK(std::abs(v - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("product spheres polynomial") {
  auto q = make_product_spheres_poly(2, 0);
  std::map<std::vector<int>, double> expect{{{4, 0}, 1.0}, {{2, 0}, -4.0}, {{0, 2}, 1.0}, {{0, 0}, 3.0}};
  CHECK(q.coeffs() == expect);
  CHECK(q.sum_abs_sqrt_fact() == doctest::Approx(std::sqrt(24.0) + 4 * std::sqrt(2.0) + std::sqrt(2.0) + 3));
  CHECK(q.sum_abs_sqrt_fact() == doctest::Approx(14.97).epsilon(1e-3));
  CHECK(q.sum_sq_fact() == doctest::Approx(67.0));
  CHECK(q.num_terms() == 4);
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < n; ++i) {
      auto p = make_product_spheres_poly(n, i);
      CHECK(p.sum_abs_sqrt_fact() <= 18 * n * n);
      CHECK(p.sum_sq_fact() <= 75 * n * n);
      CHECK(p.num_terms() <= 3 * n * n);
    }
  CHECK_THROWS_AS(make_product_spheres_poly(2, 2), PreconditionError);
  // expanded form agrees with the defining formula at random points
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (int t = 0; t < 20; ++t) {
    int n = 1 + t % 5, i = t % n;
    auto p = make_product_spheres_poly(n, i);
    std::vector<double> z(n);
    double x2 = 0, y2 = 0;
    for (int j = 0; j < n; ++j) {
      z[j] = N(rng);
      (j <= i ? x2 : y2) += z[j] * z[j];
    }
    CHECK(p.poly(z) == doctest::Approx((x2 - 2) * (x2 - 2) + y2 - 1).epsilon(1e-12));
  }
}

TEST_CASE("eval_gauss_poly examples") {
  auto q = make_product_spheres_poly(2, 0);
  double a[2] = {0, 0}, b[2] = {std::sqrt(3.0), 0}, c[2] = {1, 1};
  CHECK(eval_gauss_poly(q, a) == doctest::Approx(3.0));
  CHECK(std::abs(eval_gauss_poly(q, b)) < 1e-14);
  CHECK(eval_gauss_poly(q, c) == doctest::Approx(std::exp(-1.0)));
  // along the zero curve (x^2-2)^2 + y^2 = 1
  for (int k = 0; k < 50; ++k) {
    double t = 2 * kPi * k / 50;
    double x = std::sqrt(2 + std::cos(t)), y = std::sin(t);
    double p[2] = {x, y};
    CHECK(std::abs(eval_gauss_poly(q, p)) < 1e-14);
  }
}

TEST_CASE("derivative matches finite differences") {
  auto q = make_product_spheres_poly(2, 0);
  auto dx = q.derivative(0), dy = q.derivative(1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-2.5, 2.5);
  for (int t = 0; t < 20; ++t) {
    double p[2] = {U(rng), U(rng)}, h = 1e-5;
    double px[2] = {p[0] + h, p[1]}, mx[2] = {p[0] - h, p[1]};
    double py[2] = {p[0], p[1] + h}, my[2] = {p[0], p[1] - h};
    CHECK(dx(p) == doctest::Approx((q(px) - q(mx)) / (2 * h)).epsilon(1e-7));
    CHECK(dy(p) == doctest::Approx((q(py) - q(my)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("sup_bound dominates sampled values") {
  auto q = make_product_spheres_poly(2, 1);
  auto d3 = q.derivative(0).derivative(1).derivative(1);
  double bound = d3.sup_bound(), seen = 0;
  for (double x = -4; x <= 4; x += 0.05)
    for (double y = -4; y <= 4; y += 0.05) {
      double p[2] = {x, y};
      seen = std::max(seen, std::abs(d3(p)));
    }
  CHECK(seen <= bound);
  CHECK(q.sup_bound(1.0) <= q.sup_bound());
}

TEST_CASE("fourier transform") {
  GaussPoly g(1);
  g.add({0}, 1.0);
  double z[1] = {0.0};
  CHECK(std::abs(g.fourier(z) - std::sqrt(2 * kPi)) < 1e-14);
  GaussPoly x(1);
  x.add({1}, 1.0);
  double one[1] = {1.0};
  auto v = x.fourier(one);
  CHECK(std::abs(v - std::complex<double>(0, -std::sqrt(2 * kPi) * std::exp(-0.5))) < 1e-14);
  // trapezoid oracle on [-12, 12] for the 1-D barrier
  auto q = make_product_spheres_poly(1, 0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int t = 0; t < 20; ++t) {
    double xi = U(rng);
    std::complex<double> s = 0;
    const int M = 24000;
    for (int k = 0; k <= M; ++k) {
      double xx = -12 + 24.0 * k / M, w = (k == 0 || k == M) ? 0.5 : 1.0;
      double p[1] = {xx};
      s += w * q(p) * std::polar(1.0, -xx * xi);
    }
    s *= 24.0 / M;
    double xa[1] = {xi};
    CHECK(std::abs(q.fourier(xa) - s) < 1e-8);
  }
}

TEST_CASE("Plancherel for q_0 in n = 1, 2") {
  for (int n = 1; n <= 2; ++n) {
    auto q = make_product_spheres_poly(n, 0);
    QuadRule r = composite_gauss_width({-12.0, 12.0}, 0.5, 12);
    double spatial = 0, freq = 0;
    for (std::size_t a = 0; a < r.nodes.size(); ++a) {
      if (n == 1) {
        double p[1] = {r.nodes[a]};
        spatial += r.weights[a] * q(p) * q(p);
        freq += r.weights[a] * std::norm(q.fourier(p));
        continue;
      }
      for (std::size_t b = 0; b < r.nodes.size(); ++b) {
        double p[2] = {r.nodes[a], r.nodes[b]};
        double w = r.weights[a] * r.weights[b];
        spatial += w * q(p) * q(p);
        freq += w * std::norm(q.fourier(p));
      }
    }
    freq /= std::pow(2 * kPi, n);
    CHECK(spatial == doctest::Approx(freq).epsilon(1e-8));
    CHECK(spatial == doctest::Approx(exact_norm_sq(q)).epsilon(1e-10));
  }
}

TEST_CASE("barrier_norm") {
  CHECK(barrier_norm_bound(2) == doctest::Approx(std::sqrt(1.5) * std::sqrt(kPi) * 64));
  CHECK(barrier_norm_bound(2) == doctest::Approx(138.91).epsilon(2e-4));
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < n; ++i) {
      auto r = barrier_norm_check(n, i);
      CHECK(r.numeric_norm <= r.bound);
      CHECK(r.numeric_norm == doctest::Approx(std::sqrt(exact_norm_sq(make_product_spheres_poly(n, i)))).epsilon(1e-10));
    }
}

TEST_CASE("truncation_bounds") {
  auto q = make_product_spheres_poly(2, 0);
  auto b = truncation_bounds(q, 1.0, 1.0 / 96);
  CHECK(b.ratio == doctest::Approx(48.0));
  CHECK(b.log_sup <= std::log(36.0) - 288);
  double prev_s = INFINITY, prev_g = INFINITY, prev_l = INFINITY;
  for (double ratio : {1.0, 2.0, 4.0, 8.0, 16.0, 96.0}) {
    auto p = truncation_bounds(q, 2 * ratio, 1.0);
    CHECK(p.log_sup < prev_s);
    CHECK(p.log_grad < prev_g);
    CHECK(p.log_l2 < prev_l);
    prev_s = p.log_sup, prev_g = p.log_grad, prev_l = p.log_l2;
  }
  CHECK_THROWS_AS(truncation_bounds(q, 1.0, 0.6), PreconditionError);
}
