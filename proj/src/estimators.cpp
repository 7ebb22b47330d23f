#include "nodal/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/local_model.hpp"
#include "nodal/parallel.hpp"
#include "nodal/truncation.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;
constexpr int kMaxContourNodes = 4096;

std::vector<double> axis(double lo, double h, int m) {
  std::vector<double> x(m);
  for (int k = 0; k < m; ++k) x[k] = lo + h * k;
  return x;
}

// radial chart bump: 1 up to 0.6 pi, quintic smoothstep down to 0 at 0.95 pi
double chart_bump(double r) { return 1.0 - smoothstep5((r - 0.6 * kPi) / (0.35 * kPi)); }

// Critical points (found by Newton from cells where both gradient components
// change sign) whose value is too close to 0 for spacing h. Gradients are
// evaluated in row blocks to bound memory.
int near_level_critical(const TorusEnsemble& e, const RandomSection& s, double x0, double y0, double h, int nodes,
                        bool periodic) {
  const int cells = periodic ? nodes : nodes - 1;
  auto ys = axis(y0, h, nodes + (periodic ? 1 : 0));
  int risky = 0;
  const int block = 128;
  for (int i0 = 0; i0 < cells; i0 += block) {
    const int i1 = std::min(cells, i0 + block);
    auto xs = axis(x0 + h * i0, h, i1 - i0 + 1);
    SectionGrid g = eval_section_tensor(e, s, xs, ys, true);
    const int ny = g.ny;
    auto changes = [&](const std::vector<double>& a, int i, int j) {
      std::size_t k = static_cast<std::size_t>(i) * ny + j;
      double v[4] = {a[k], a[k + ny], a[k + ny + 1], a[k + 1]};
      bool p = false, m = false;
      for (double x : v) (x >= 0 ? p : m) = true;
      return p && m;
    };
    for (int i = 0; i < i1 - i0; ++i)
      for (int j = 0; j < ny - 1; ++j) {
        if (!changes(g.gx, i, j) || !changes(g.gy, i, j)) continue;
        const double cx0 = xs[i] + 0.5 * h, cy0 = ys[j] + 0.5 * h;
        double z[2] = {cx0, cy0}, gr[2], H[3];
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
          eval_section_point(e, s, z, gr);
          eval_section_hessian(e, s, z, H);
          double det = H[0] * H[2] - H[1] * H[1];
          if (det == 0) break;
          double dx = (H[2] * gr[0] - H[1] * gr[1]) / det, dy = (H[0] * gr[1] - H[1] * gr[0]) / det;
          z[0] -= dx;
          z[1] -= dy;
          if (std::hypot(z[0] - cx0, z[1] - cy0) > 2 * h) break;
          if (std::hypot(dx, dy) < 1e-12 * (1 + h)) {
            ok = true;
            break;
          }
        }
        if (!ok) continue;
        double v = eval_section_point(e, s, z);
        eval_section_hessian(e, s, z, H);
        double tr = 0.5 * (H[0] + H[2]), r = std::hypot(0.5 * (H[0] - H[2]), H[1]);
        double lam = std::max(std::abs(tr + r), std::abs(tr - r));
        if (std::abs(v) < 0.5 * lam * h * h) ++risky;
      }
  }
  return risky;
}

// sup |s|, |d_1 s|, |d_2 s| over the grid nodes of B(x0, radius)
std::array<double, 3> ball_sups(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& x0,
                                double radius, int grid) {
  const double h = 2 * radius / (grid - 1);
  auto xs = axis(x0[0] - radius, h, grid);
  std::vector<double> ys = e.n == 2 ? axis(x0[1] - radius, h, grid) : std::vector<double>{};
  SectionGrid g = eval_section_tensor(e, s, xs, ys, true);
  std::array<double, 3> m{0, 0, 0};
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double dx = xs[i] - x0[0], dy = e.n == 2 ? ys[j] - x0[1] : 0.0;
      if (std::hypot(dx, dy) > radius * (1 + 1e-12)) continue;
      std::size_t k = static_cast<std::size_t>(i) * g.ny + j;
      m[0] = std::max(m[0], std::abs(g.v[k]));
      m[1] = std::max(m[1], std::abs(g.gx[k]));
      if (e.n == 2) m[2] = std::max(m[2], std::abs(g.gy[k]));
    }
  return m;
}

}  // namespace

SectionContour section_contour(const TorusEnsemble& e, const RandomSection& s, double x0, double y0, double span,
                               int nodes, bool periodic, int max_doublings) {
  if (e.n != 2) throw PreconditionError("section_contour: n = 2 only");
  if (nodes < 4 || !(span > 0)) throw PreconditionError("section_contour: bad grid");
  SectionContour out;
  for (int d = 0;; ++d) {
    const double h = span / (periodic ? nodes : nodes - 1);
    int risky = near_level_critical(e, s, x0, y0, h, nodes, periodic);
    if (risky == 0 || d == max_doublings || nodes > kMaxContourNodes / 2) {
      auto xs = axis(x0, h, nodes), ys = axis(y0, h, nodes);
      SectionGrid g = eval_section_tensor(e, s, xs, ys, false);
      SampleGrid2 sg{nodes, nodes, x0, y0, h, periodic, g.v.data()};
      out.contour = marching_squares(sg);
      out.grid = nodes;
      out.doublings = d;
      out.unresolved = risky;
      return out;
    }
    nodes = periodic ? 2 * nodes : 2 * nodes - 1;
  }
}

int default_torus_grid(const TorusEnsemble& e) {
  const double need = 16 * std::sqrt(e.L);
  if (e.n == 1) return std::max(1024, static_cast<int>(std::ceil(need)));
  int g = std::max(256, static_cast<int>(std::ceil(need)));
  return (g + 31) / 32 * 32;
}

void check_resolution(const TorusEnsemble& e, int grid) {
  if (grid < 8 * std::sqrt(e.L) || grid < 16)
    throw PreconditionError("grid resolution below 8 nodes per shortest wavelength (need >= 8 sqrt L)");
}

NodalSummary nodal_extract(const std::vector<double>& values, int grid) {
  if (values.size() != static_cast<std::size_t>(grid) * grid) throw PreconditionError("nodal_extract: size mismatch");
  SampleGrid2 g{grid, grid, 0.0, 0.0, 2 * kPi / grid, true, values.data()};
  ContourResult c = marching_squares(g);
  NodalSummary out;
  out.b0 = static_cast<int>(c.loops.size());
  out.loops = std::move(c.loops);
  out.ambiguous_cells = c.ambiguous_cells;
  out.zero_nodes = c.zero_nodes;
  return out;
}

NodalSummary nodal_extract(const TorusEnsemble& e, const RandomSection& s, int grid) {
  check_resolution(e, grid);
  const double h = 2 * kPi / grid;
  if (e.n == 1) {
    NodalSummary out;
    out.zeros = sign_change_zeros([&](double x) { return eval_section_point(e, s, &x); }, 0.0, h, grid, true);
    out.b0 = static_cast<int>(out.zeros.size());
    return out;
  }
  SectionContour sc = section_contour(e, s, 0.0, 0.0, 2 * kPi, grid, true);
  NodalSummary out;
  out.b0 = static_cast<int>(sc.contour.loops.size());
  out.loops = std::move(sc.contour.loops);
  out.ambiguous_cells = sc.contour.ambiguous_cells;
  out.zero_nodes = sc.contour.zero_nodes;
  out.grid_used = sc.grid;
  out.unresolved_critical = sc.unresolved;
  return out;
}

MeanEstimate summarize(std::vector<double> samples) {
  MeanEstimate m;
  const double N = static_cast<double>(samples.size());
  if (N > 0) {
    double s = 0;
    for (double v : samples) s += v;
    m.mean = s / N;
    if (N > 1) {
      double q = 0;
      for (double v : samples) q += (v - m.mean) * (v - m.mean);
      m.stderr_ = std::sqrt(q / (N - 1) / N);
    }
  }
  m.samples = std::move(samples);
  return m;
}

MeanEstimate estimate_b0(const TorusEnsemble& e, int trials, int grid, std::uint64_t seed, int threads) {
  if (trials < 1) throw PreconditionError("estimate_b0: trials must be >= 1");
  check_resolution(e, grid);
  const double norm = std::pow(e.L, -0.5 * e.n);
  std::vector<double> b(trials);
  parallel_for(
      trials, [&](std::size_t t) { b[t] = nodal_extract(e, sample_section(e, seed, t), grid).b0 * norm; }, threads);
  return summarize(std::move(b));
}

double kac_rice_zeros(int K) {
  double s = 0;
  for (int k = 1; k <= K; ++k) s += 1.0 * k * k;
  return 2 * std::sqrt(s / (K + 0.5));
}

SigmaType parse_sigma_type(const std::string& s) {
  if (s == "one_loop") return SigmaType::one_loop;
  if (s == "two_loops") return SigmaType::two_loops;
  throw PreconditionError("sigma type must be one_loop or two_loops");
}

const char* sigma_type_label(SigmaType t) { return t == SigmaType::one_loop ? "one_loop" : "two_loops"; }

int loops_in_ball(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& x0, double radius,
                  int grid, std::vector<Loop>* keep) {
  if (e.n != 2 || x0.size() != 2) throw PreconditionError("loops_in_ball: n = 2 only");
  if (grid < 8) throw PreconditionError("loops_in_ball: grid too small");
  SectionContour sc = section_contour(e, s, x0[0] - radius, x0[1] - radius, 2 * radius, grid, false);
  ContourResult& c = sc.contour;
  int count = 0;
  for (auto& l : c.loops)
    if (loop_inside_disc(l, {x0[0], x0[1]}, radius)) {
      ++count;
      if (keep) keep->push_back(std::move(l));
    }
  return count;
}

ProbEstimate estimate_prob_sigma(const TorusEnsemble& e, const std::vector<double>& x0, double R, SigmaType type,
                                 int trials, int grid, std::uint64_t seed, int threads) {
  if (e.n != 2) throw PreconditionError("estimate_prob_sigma: n = 2 only");
  if (trials < 1 || !(R > 0)) throw PreconditionError("estimate_prob_sigma: need trials >= 1 and R > 0");
  const double radius = R / std::sqrt(e.L);
  if (radius >= kPi) throw PreconditionError("estimate_prob_sigma: ball does not fit in the torus");
  ProbEstimate out;
  out.loops_in_ball.resize(trials);
  parallel_for(
      trials,
      [&](std::size_t t) { out.loops_in_ball[t] = loops_in_ball(e, sample_section(e, seed, t), x0, radius, grid); },
      threads);
  const int need = type == SigmaType::one_loop ? 1 : 2;
  int hits = 0;
  for (int c : out.loops_in_ball) hits += c >= need;
  out.p_hat = static_cast<double>(hits) / trials;
  out.stderr_ = std::sqrt(out.p_hat * (1 - out.p_hat) / trials);
  return out;
}

C1Estimate empirical_c1(const TorusEnsemble& e, const std::vector<double>& x0, double R, int trials,
                        std::uint64_t seed, int grid, int threads) {
  if (static_cast<int>(x0.size()) != e.n) throw PreconditionError("empirical_c1: centre dimension mismatch");
  if (trials < 1 || !(R > 0) || grid < 3) throw PreconditionError("empirical_c1: bad arguments");
  const double radius = R / std::sqrt(e.L);
  const double nv = std::pow(e.L, -0.25 * e.n), ng = std::pow(e.L, -0.25 * (e.n + 2));
  std::vector<double> sv(trials);
  std::vector<std::vector<double>> sg(e.n, std::vector<double>(trials));
  parallel_for(
      trials,
      [&](std::size_t t) {
        auto m = ball_sups(e, sample_section(e, seed, t), x0, radius, grid);
        sv[t] = m[0] * nv;
        for (int j = 0; j < e.n; ++j) sg[j][t] = m[1 + j] * ng;
      },
      threads);
  C1Estimate out;
  out.sup_norm = summarize(std::move(sv));
  for (auto& v : sg) out.grad_sup.push_back(summarize(std::move(v)));
  return out;
}

TrialStats simulate_trial(const TorusEnsemble& e, const RandomSection& s, const SimulationSpec& spec,
                          std::vector<Loop>* torus_loops, std::vector<Loop>* ball_loops) {
  if (static_cast<int>(spec.x0.size()) != e.n) throw PreconditionError("simulate: centre dimension mismatch");
  const double radius = spec.R / std::sqrt(e.L);
  if (!(spec.R > 0) || radius >= kPi) throw PreconditionError("simulate: ball must be nonempty and fit the torus");
  TrialStats t;
  t.trial = s.trial;
  NodalSummary ns = nodal_extract(e, s, spec.grid > 0 ? spec.grid : default_torus_grid(e));
  t.b0 = ns.b0;
  if (torus_loops) *torus_loops = std::move(ns.loops);
  if (e.n == 2) t.loops_in_ball = loops_in_ball(e, s, spec.x0, radius, spec.ball_grid, ball_loops);
  auto m = ball_sups(e, s, spec.x0, radius, spec.c1_grid);
  t.sup_norm = m[0] * std::pow(e.L, -0.25 * e.n);
  for (int j = 0; j < e.n; ++j) t.grad_sup.push_back(m[1 + j] * std::pow(e.L, -0.25 * (e.n + 2)));
  return t;
}

std::vector<TrialStats> simulate(const TorusEnsemble& e, const SimulationSpec& spec, int trials, std::uint64_t seed,
                                 int threads) {
  if (trials < 1) throw PreconditionError("simulate: trials must be >= 1");
  if (spec.grid > 0) check_resolution(e, spec.grid);
  std::vector<TrialStats> out(trials);
  parallel_for(
      trials, [&](std::size_t t) { out[t] = simulate_trial(e, sample_section(e, seed, t), spec); }, threads);
  return out;
}

LocalModelResult implement_local_model(const TorusEnsemble& e, const std::vector<double>& x0,
                                       const LocalModelSpec& spec) {
  if (e.n != 2 || x0.size() != 2) throw PreconditionError("implement_local_model: n = 2 only");
  if (spec.c > 1.0) throw PreconditionError("implement_local_model: needs Fourier support in B(0, 1) (c <= 1)");
  const int G = spec.dft_grid;
  // the projected field has modes |k| <= K and the chart-cut field is spread to about 2 sqrt L
  if (G < 4 * (e.K + 1)) throw NumericalError("implement_local_model: DFT grid below the Nyquist requirement");
  const double sL = std::sqrt(e.L), R = std::sqrt(5.0) / spec.eta;
  if (R / sL > 0.6 * kPi) throw PreconditionError("implement_local_model: window does not fit the chart for this L");

  const GaussPoly q = make_product_spheres_poly(2, spec.i);
  TruncatedField tf(q, {spec.c, spec.eta});
  const double h = 2 * kPi / G;
  std::vector<double> dx(G), dy(G), zx(G), zy(G);
  for (int p = 0; p < G; ++p) {
    dx[p] = std::remainder(h * p - x0[0], 2 * kPi);
    dy[p] = std::remainder(h * p - x0[1], 2 * kPi);
    zx[p] = sL * dx[p];
    zy[p] = sL * dy[p];
  }
  GridValues fv = tf.grid(zx, zy, spec.eta, false);
  Eigen::MatrixXd S(G, G);
  for (int p = 0; p < G; ++p)
    for (int r = 0; r < G; ++r) S(p, r) = sL * chart_bump(std::hypot(dx[p], dy[r])) * fv.v[p * G + r];

  const int K = e.K;
  Eigen::MatrixXcd Ex(G, 2 * K + 1), Ey(G, K + 1);
  for (int p = 0; p < G; ++p) {
    for (int k = -K; k <= K; ++k) Ex(p, k + K) = std::polar(1.0, -k * h * p);
    for (int k = 0; k <= K; ++k) Ey(p, k) = std::polar(1.0, -k * h * p);
  }
  // F(k) = sum_p S(p) e^{-i <k, x_p>} h^2 ~ int s e^{-i<k,x>}
  Eigen::MatrixXcd F = Ex.transpose() * S.cast<cd>() * Ey * (h * h);

  LocalModelResult out;
  out.window_radius = R;
  out.coeffs.assign(e.N_L(), 0.0);
  out.coeffs[0] = e.c0() * F(K, 0).real();
  for (std::size_t m = 0; m < e.half.size(); ++m) {
    cd v = F(e.half[m][0] + K, e.half[m][1]);
    out.coeffs[1 + 2 * m] = e.cn() * v.real();
    out.coeffs[2 + 2 * m] = -e.cn() * v.imag();
  }
  double s2 = 0;
  for (double c : out.coeffs) s2 += c * c;
  out.norm_sL = std::sqrt(s2);
  out.norm_f = tf.l2_norm() / spec.eta;

  RandomSection s;
  s.coeffs = out.coeffs;
  const int M = spec.check_grid;
  const double hz = 2 * R / (M - 1);
  auto z = axis(-R, hz, M);
  std::vector<double> px(M), py(M);
  for (int k = 0; k < M; ++k) {
    px[k] = x0[0] + z[k] / sL;
    py[k] = x0[1] + z[k] / sL;
  }
  SectionGrid sg = eval_section_tensor(e, s, px, py, false);
  GridValues fz = tf.grid(z, z, spec.eta, false);
  double err = 0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      if (std::hypot(z[a], z[b]) > R) continue;
      std::size_t k = static_cast<std::size_t>(a) * M + b;
      err = std::max(err, std::abs(sg.v[k] / sL - fz.v[k]));
    }
  out.conv_error = err;
  out.loops_in_ball = loops_in_ball(e, s, x0, R / sL, 2 * M, &out.loops);
  return out;
}

}  // namespace nodal
