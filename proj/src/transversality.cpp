#include "nodal/transversality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nodal/contour.hpp"
#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"

namespace nodal {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    default: return "inconclusive";
  }
}

PairCheck check_pair(const GridField& f, double delta, double epsilon) {
  f.validate();
  if (!(delta >= 0) || !(epsilon >= 0)) throw PreconditionError("check_pair: delta and epsilon must be >= 0");
  const double r = 0.5 * f.h * std::sqrt(static_cast<double>(f.n));
  PairCheck out;
  out.slack_value = f.lip_value * r;
  out.slack_grad = f.lip_grad * r;
  const double sv = out.slack_value, sg = out.slack_grad;

  double margin = std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  std::size_t worst_node = 0;
  std::string worst_cond;
  bool refuted = false, ok = true;
  Witness ref;

  const std::size_t N = f.size();
  for (std::size_t k = 0; k < N; ++k) {
    auto z = f.node(k);
    const double d = f.window.boundary_distance(z.data(), f.n);
    if (d < -r) continue;  // cell misses the closed window
    const double av = std::abs(f.values[k]), gn = f.grad_norm(k);

    // definite violations from the samples alone
    if (!refuted) {
      if (d > 0 && av <= delta && gn <= epsilon) {
        refuted = true;
        ref = {z, f.values[k], gn, "gradient"};
      } else if (av + f.lip_value * std::abs(d) <= delta) {
        refuted = true;
        ref = {z, f.values[k], gn, "boundary"};
      }
    }

    if (av - sv > delta) {
      margin = std::min(margin, av - sv - delta);
      continue;
    }
    // node cell belongs to K_W: must sit strictly inside W and carry a large gradient
    ++out.kw_cells;
    double e_boundary = d - r, e_grad = gn - sg - epsilon;
    if (e_boundary <= 0 && e_boundary < worst) {
      worst = e_boundary;
      worst_node = k;
      worst_cond = "boundary";
    }
    if (e_grad <= 0 && e_grad < worst) {
      worst = e_grad;
      worst_node = k;
      worst_cond = "gradient";
    }
    if (e_boundary <= 0 || e_grad <= 0)
      ok = false;
    else
      margin = std::min(margin, e_grad);
  }

  if (refuted) {
    out.verdict = Verdict::refuted;
    out.witness.push_back(ref);
  } else if (ok) {
    out.verdict = Verdict::certified;
    out.margin = margin;
  } else {
    out.verdict = Verdict::inconclusive;
    out.witness.push_back({f.node(worst_node), f.values[worst_node], f.grad_norm(worst_node), worst_cond});
  }
  return out;
}

std::vector<FrontierPoint> pair_frontier(const GridField& f, const std::vector<double>& deltas, int iterations) {
  double gmax = 0;
  for (std::size_t k = 0; k < f.size(); ++k) gmax = std::max(gmax, f.grad_norm(k));
  std::vector<FrontierPoint> out;
  for (double delta : deltas) {
    FrontierPoint p{delta, 0.0, false};
    if (check_pair(f, delta, 0.0).verdict == Verdict::certified) {
      p.any = true;
      if (check_pair(f, delta, gmax).verdict == Verdict::certified) {
        // no node is in the conditioning region: every epsilon passes
        p.eps_max = std::numeric_limits<double>::infinity();
      } else {
        double lo = 0, hi = gmax;
        for (int it = 0; it < iterations; ++it) {
          double mid = 0.5 * (lo + hi);
          if (check_pair(f, delta, mid).verdict == Verdict::certified)
            lo = mid;
          else
            hi = mid;
        }
        p.eps_max = lo;
      }
    }
    out.push_back(p);
  }
  return out;
}

LoopCount count_window_loops(const GridField& f, const std::vector<double>& values) {
  if (f.n != 2) throw PreconditionError("count_window_loops: n = 2 only");
  if (values.size() != f.size()) throw PreconditionError("count_window_loops: value count mismatch");
  SampleGrid2 g{f.dims[0], f.dims[1], f.origin[0], f.origin[1], f.h, false, values.data()};
  ContourResult c = marching_squares(g);
  LoopCount out;
  out.ambiguous_cells = c.ambiguous_cells;
  for (const auto& l : c.loops) {
    bool inside = l.closed;
    for (const auto& p : l.pts)
      if (!inside || !f.window.contains(p.data(), 2)) {
        inside = false;
        break;
      }
    if (inside)
      ++out.inside;
    else
      ++out.touching;
  }
  return out;
}

StabilityReport perturbation_stability(const GridField& f, std::pair<double, double> pair, int trials,
                                       std::uint64_t seed, double scale) {
  if (f.n != 2) throw PreconditionError("perturbation_stability: n = 2 only");
  if (trials < 0 || !(scale >= 0)) throw PreconditionError("perturbation_stability: bad trial count or scale");
  StabilityReport rep;
  rep.trials = trials;
  rep.scale = scale;
  rep.base_loops = count_window_loops(f, f.values).inside;
  rep.loops.assign(trials, 0);

  // frequencies k / ell with k in {-2..2} x {0..2}, ell a fifth of the window width
  const double width = f.window.kind == Window::Kind::ball
                           ? 2 * f.window.radius
                           : std::max(f.window.hi[0] - f.window.lo[0], f.window.hi[1] - f.window.lo[1]);
  const double ell = width / 5;
  struct Mode {
    int k1, k2;
  };
  std::vector<Mode> modes;
  for (int k1 = -2; k1 <= 2; ++k1)
    for (int k2 = 0; k2 <= 2; ++k2)
      if (k2 > 0 || k1 >= 0) modes.push_back({k1, k2});

  // per-axis tables so sigma(x, y) = sum_k2 P_k2(x) cos(k2 y / ell) + Q_k2(x) sin(k2 y / ell)
  const int nx = f.dims[0], ny = f.dims[1];
  std::vector<std::vector<double>> cx(5, std::vector<double>(nx)), sx = cx;
  std::vector<std::vector<double>> cy(3, std::vector<double>(ny)), sy = cy;
  for (int k = -2; k <= 2; ++k)
    for (int i = 0; i < nx; ++i) {
      double ph = k * (f.origin[0] + f.h * i) / ell;
      cx[k + 2][i] = std::cos(ph);
      sx[k + 2][i] = std::sin(ph);
    }
  for (int k = 0; k <= 2; ++k)
    for (int j = 0; j < ny; ++j) {
      double ph = k * (f.origin[1] + f.h * j) / ell;
      cy[k][j] = std::cos(ph);
      sy[k][j] = std::sin(ph);
    }

  std::vector<double> sup0(trials), sup1(trials);
  parallel_for(trials, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a(modes.size()), b(modes.size());
    double s0 = 0, s1 = 0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      a[m] = g(rng);
      b[m] = g(rng);
      s0 += std::abs(a[m]) + std::abs(b[m]);
      s1 += (std::abs(a[m]) + std::abs(b[m])) * std::hypot(modes[m].k1, modes[m].k2) / ell;
    }
    const double amp = 0.95 * scale * std::min(pair.first / s0, pair.second / s1);
    std::vector<double> v(f.values);
    std::vector<double> P(3), Q(3);
    for (int i = 0; i < nx; ++i) {
      std::fill(P.begin(), P.end(), 0.0);
      std::fill(Q.begin(), Q.end(), 0.0);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        // a cos(u + w) + b sin(u + w) with u = k1 x, w = k2 y
        double cu = cx[modes[m].k1 + 2][i], su = sx[modes[m].k1 + 2][i];
        P[modes[m].k2] += a[m] * cu + b[m] * su;
        Q[modes[m].k2] += b[m] * cu - a[m] * su;
      }
      for (int j = 0; j < ny; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += P[k] * cy[k][j] + Q[k] * sy[k][j];
        v[static_cast<std::size_t>(i) * ny + j] += amp * s;
      }
    }
    rep.loops[t] = count_window_loops(f, v).inside;
    sup0[t] = amp * s0;
    sup1[t] = amp * s1;
  });
  for (int t = 0; t < trials; ++t) {
    rep.sup_sigma = std::max(rep.sup_sigma, sup0[t]);
    rep.sup_dsigma = std::max(rep.sup_dsigma, sup1[t]);
    if (rep.loops[t] != rep.base_loops) rep.failures.push_back(t);
  }
  return rep;
}

}  // namespace nodal
