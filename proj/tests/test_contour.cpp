#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/contour.hpp"

using namespace nodal;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(int nx, int ny, double x0, double y0, double h, auto f) {
  std::vector<double> v(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) v[i * ny + j] = f(x0 + i * h, y0 + j * h);
  return v;
}

}  // namespace

TEST_CASE("circle level set is one closed loop") {
  const int m = 101;
  const double h = 4.0 / (m - 1);
  auto v = sample(m, m, -2, -2, h, [](double x, double y) { return x * x + y * y - 1; });
  SampleGrid2 g{m, m, -2, -2, h, false, v.data()};
  auto c = marching_squares(g);
  REQUIRE(c.loops.size() == 1);
  CHECK(c.loops[0].closed);
  CHECK_FALSE(c.loops[0].wraps);
  for (const auto& p : c.loops[0].pts) CHECK(std::abs(std::hypot(p[0], p[1]) - 1) < 2e-3);
  CHECK(loop_inside_disc(c.loops[0], {0, 0}, 1.01));
  CHECK_FALSE(loop_inside_disc(c.loops[0], {0, 0}, 0.99));
  CHECK(point_in_loop(c.loops[0], {0.1, 0.2}));
  CHECK_FALSE(point_in_loop(c.loops[0], {1.5, 0.0}));
}

TEST_CASE("open chains end on the box edge") {
  const int m = 21;
  auto v = sample(m, m, -1, -1, 0.1, [](double x, double) { return x - 0.03; });
  SampleGrid2 g{m, m, -1, -1, 0.1, false, v.data()};
  auto c = marching_squares(g);
  REQUIRE(c.loops.size() == 1);
  CHECK_FALSE(c.loops[0].closed);
  CHECK(c.loops[0].pts.size() == m);
}

TEST_CASE("small loop of cos x + cos y near its maximum") {
  // level 1.99: the superlevel set is a disc of radius about 0.1414 around the origin
  const int m = 256;
  const double h = 2 * kPi / m;
  auto v = sample(m, m, 0, 0, h, [](double x, double y) { return std::cos(x) + std::cos(y) - 1.99; });
  SampleGrid2 g{m, m, 0, 0, h, true, v.data()};
  auto c = marching_squares(g);
  REQUIRE(c.loops.size() == 1);
  CHECK(c.loops[0].closed);
  CHECK_FALSE(c.loops[0].wraps);
  CHECK(loop_inside_disc(c.loops[0], {0, 0}, 0.2, 2 * kPi, 2 * kPi));
  for (const auto& p : c.loops[0].pts) {
    double dx = std::remainder(p[0], 2 * kPi), dy = std::remainder(p[1], 2 * kPi);
    CHECK(std::abs(std::hypot(dx, dy) - std::sqrt(0.02)) < 5e-3);
  }
}

TEST_CASE("non-contractible loops on the torus") {
  const int m = 64;
  const double h = 2 * kPi / m;
  auto v = sample(m, m, 0, 0, h, [](double, double y) { return std::sin(y + 0.3); });
  SampleGrid2 g{m, m, 0, 0, h, true, v.data()};
  auto c = marching_squares(g);
  REQUIRE(c.loops.size() == 2);
  for (const auto& l : c.loops) {
    CHECK(l.closed);
    CHECK(l.wraps);
  }
}

TEST_CASE("saddle cells and parity") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0, 1);
  const int m = 40;
  std::vector<double> v(m * m);
  for (auto& x : v) x = N(rng);
  std::vector<double> w(v);
  for (auto& x : w) x = -x;
  SampleGrid2 a{m, m, 0, 0, 1, true, v.data()}, b{m, m, 0, 0, 1, true, w.data()};
  auto ca = marching_squares(a), cb = marching_squares(b);
  CHECK(ca.ambiguous_cells > 0);
  CHECK(ca.ambiguous_cells == cb.ambiguous_cells);
  REQUIRE(ca.loops.size() == cb.loops.size());
  for (std::size_t k = 0; k < ca.loops.size(); ++k) CHECK(ca.loops[k].pts == cb.loops[k].pts);
  // every crossing edge lies on exactly one loop
  std::size_t crossings = 0, pts = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      bool s = v[i * m + j] >= 0;
      crossings += s != (v[((i + 1) % m) * m + j] >= 0);
      crossings += s != (v[i * m + (j + 1) % m] >= 0);
    }
  for (const auto& l : ca.loops) {
    CHECK(l.closed);
    pts += l.pts.size();
  }
  CHECK(pts == crossings);
}

TEST_CASE("1-D zeros by sign change and bisection") {
  const int m = 1024;
  auto z = sign_change_zeros([](double x) { return std::cos(x); }, 0, 2 * kPi / m, m, true);
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0] - kPi / 2) < 1e-9);
  CHECK(std::abs(z[1] - 3 * kPi / 2) < 1e-9);
  auto w = sign_change_zeros([](double x) { return x * x - 2; }, -3, 0.01, 601, false);
  REQUIRE(w.size() == 2);
  CHECK(std::abs(w[1] - std::sqrt(2.0)) < 1e-9);
}
