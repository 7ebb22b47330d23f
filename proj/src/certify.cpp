#include "nodal/certify.hpp"

#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/truncation.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
const double kE52 = std::exp(-2.5);

}  // namespace

std::string sigma_type_name(int n, int i) { return "S" + std::to_string(i) + "xS" + std::to_string(n - i - 1); }

GridField gauss_poly_grid(const GaussPoly& q, double radius, int nodes) {
  const int n = q.n();
  if (n < 1 || n > 3) throw PreconditionError("gauss_poly_grid: n must be 1, 2 or 3");
  GridField f = make_ball_grid(n, std::vector<double>(n, 0.0), radius, nodes);
  std::vector<GaussPoly> d1;
  std::vector<std::vector<GaussPoly>> d2(n);
  double third = 0;
  for (int j = 0; j < n; ++j) d1.push_back(q.derivative(j));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      d2[j].push_back(d1[j].derivative(k));
      for (int l = 0; l < n; ++l) third += std::pow(d2[j][k].derivative(l).sup_bound(radius), 2);
    }
  third = std::sqrt(third);

  const std::size_t N = f.size();
  f.values.resize(N);
  f.grads.resize(N * n);
  const std::size_t rows = f.dims[0], per_row = N / rows;
  std::vector<double> hmax(rows, 0.0), gmax(rows, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    for (std::size_t k = r * per_row; k < (r + 1) * per_row; ++k) {
      auto z = f.node(k);
      f.values[k] = q(z);
      double g2 = 0, h2 = 0;
      for (int j = 0; j < n; ++j) {
        double g = d1[j](z);
        f.grads[k * n + j] = g;
        g2 += g * g;
        for (int l = 0; l < n; ++l) h2 += std::pow(d2[j][l](z), 2);
      }
      gmax[r] = std::max(gmax[r], std::sqrt(g2));
      hmax[r] = std::max(hmax[r], std::sqrt(h2));
    }
  });
  double hm = 0, gm = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    hm = std::max(hm, hmax[r]);
    gm = std::max(gm, gmax[r]);
  }
  const double reach = 0.5 * f.h * std::sqrt(static_cast<double>(n));
  f.lip_grad = hm + third * reach;
  f.lip_value = gm + f.lip_grad * reach;
  return f;
}

void attach_topology(CertifyResult& r, const GridField& f, int expected_loops) {
  SampleGrid2 g{f.dims[0], f.dims[1], f.origin[0], f.origin[1], f.h, false, f.values.data()};
  ContourResult c = marching_squares(g);
  r.loops_inside = 0;
  r.loops_touching = 0;
  r.ambiguous_cells = c.ambiguous_cells;
  for (auto& l : c.loops) {
    bool inside = l.closed;
    for (const auto& p : l.pts) inside = inside && f.window.contains(p.data(), 2);
    inside ? ++r.loops_inside : ++r.loops_touching;
    r.loops.push_back(std::move(l));
  }
  r.topology_ok = r.loops_inside == expected_loops && r.loops_touching == 0;
}

CertifyResult barrier_certify(int n, int i, double delta, int nodes) {
  if (!(delta > 0 && delta <= 0.5)) throw PreconditionError("barrier_certify: need 0 < delta <= 1/2");
  if (n < 1 || n > 3 || i < 0 || i > n - 1) throw PreconditionError("barrier_certify: need n <= 3, 0 <= i < n");
  if (nodes < 16) throw PreconditionError("barrier_certify: grid too small");
  const GaussPoly q = make_product_spheres_poly(n, i);
  const double R = std::sqrt(5.0);
  GridField f = gauss_poly_grid(q, R, nodes);

  CertifyResult r;
  r.n = n;
  r.i = i;
  r.pair = {delta * kE52, 0.5 * kE52 * (2 - delta)};
  r.check = check_pair(f, r.pair.first, r.pair.second);
  r.cert.window_radius = R;
  r.cert.l2_norm = barrier_norm_check(n, i).numeric_norm;
  r.l2_bound = barrier_norm_bound(n);
  r.l2_ok = r.cert.l2_norm <= r.l2_bound;
  r.cert.sigma_type = sigma_type_name(n, i);
  r.cert.margin = std::max(r.check.slack_value, r.check.slack_grad);
  if (r.check.verdict == Verdict::certified) r.cert.pairs.push_back(r.pair);

  if (n == 2) {
    double m = 1e300;
    for (int k = 0; k < 4096; ++k) {
      double t = 2 * kPi * k / 4096, z[2] = {R * std::cos(t), R * std::sin(t)};
      m = std::min(m, std::abs(q(z)));
    }
    r.boundary_min = m;
    attach_topology(r, f, 2);
  }
  return r;
}

GridField truncated_grid(int i, double c, double eta, int nodes, double* l2_norm) {
  const GaussPoly q = make_product_spheres_poly(2, i);
  TruncatedField tf(q, {c, eta});
  const double R = std::sqrt(5.0) / eta;
  GridField f = make_ball_grid(2, {0.0, 0.0}, R, nodes);
  std::vector<double> xs(nodes);
  for (int k = 0; k < nodes; ++k) xs[k] = f.origin[0] + f.h * k;
  GridValues gv = tf.grid(xs, xs, eta);
  f.values = std::move(gv.v);
  f.grads.resize(2 * f.values.size());
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    f.grads[2 * k] = gv.gx[k];
    f.grads[2 * k + 1] = gv.gy[k];
  }
  // global bounds on the first and second derivatives of x -> q^c_eta(eta x)
  f.lip_value = tf.derivative_bound(1) * eta;
  f.lip_grad = tf.derivative_bound(2) * eta * eta;
  if (l2_norm) *l2_norm = tf.l2_norm() / eta;  // eta^{-n/2} with n = 2
  return f;
}

CertifyResult truncated_certify(int n, int i, double c, double eta, int nodes) {
  if (n != 2) throw PreconditionError("truncated_certify: only n = 2 is supported");
  if (i < 0 || i > 1) throw PreconditionError("truncated_certify: need 0 <= i <= 1");
  if (!(c > 0 && eta > 0)) throw PreconditionError("truncated_certify: c and eta must be positive");
  if (eta > c / (48.0 * n) * (1 + 1e-12)) throw PreconditionError("truncated_certify: requires eta <= c / (48 n)");
  if (nodes < 16) throw PreconditionError("truncated_certify: grid too small");

  CertifyResult r;
  r.n = n;
  r.i = i;
  double l2 = 0;
  GridField f = truncated_grid(i, c, eta, nodes, &l2);
  r.pair = {0.25 * kE52, eta * kE52 / std::sqrt(2.0)};
  r.check = check_pair(f, r.pair.first, r.pair.second);
  r.cert.window_radius = f.window.radius;
  r.cert.l2_norm = l2;
  r.l2_bound = 1.5 * std::pow(kPi, 0.25 * n) * (n + 6.0) * (n + 6.0) / std::pow(eta, 0.5 * n);
  r.cert.sigma_type = sigma_type_name(n, i);
  r.cert.margin = std::max(r.check.slack_value, r.check.slack_grad);
  if (r.check.verdict == Verdict::certified) r.cert.pairs.push_back(r.pair);
  double m = 1e300;
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto z = f.node(k);
    double d = f.window.boundary_distance(z.data(), 2);
    if (std::abs(d) <= f.h) m = std::min(m, std::abs(f.values[k]));
  }
  r.boundary_min = m;
  attach_topology(r, f, 2);
  r.l2_ok = r.cert.l2_norm <= r.l2_bound;
  return r;
}

}  // namespace nodal
