#include "nodal/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

bool pos(double v) { return v >= 0.0; }

}  // namespace

ContourResult marching_squares(const SampleGrid2& g) {
  if (g.nx < 2 || g.ny < 2 || !g.v) throw PreconditionError("marching_squares: grid needs at least 2x2 nodes");
  if (2.0 * g.nx * g.ny >= 2147483647.0) throw PreconditionError("marching_squares: grid too large");
  const int nx = g.nx, ny = g.ny;
  const std::size_t NH = static_cast<std::size_t>(nx) * ny;
  auto hid = [&](int i, int j) { return static_cast<std::size_t>(i) * ny + j; };
  auto vid = [&](int i, int j) { return NH + static_cast<std::size_t>(i) * ny + j; };
  auto wx = [&](int i) { return i == nx ? 0 : i; };
  auto wy = [&](int j) { return j == ny ? 0 : j; };

  ContourResult out;
  for (std::size_t k = 0; k < NH; ++k)
    if (g.v[k] == 0.0) ++out.zero_nodes;

  std::vector<std::array<std::int32_t, 2>> link(2 * NH, {-1, -1});
  auto connect = [&](std::size_t a, std::size_t b) {
    auto put = [&](std::size_t e, std::int32_t o) {
      if (link[e][0] < 0)
        link[e][0] = o;
      else
        link[e][1] = o;
    };
    put(a, static_cast<std::int32_t>(b));
    put(b, static_cast<std::int32_t>(a));
  };

  const int cx = g.periodic ? nx : nx - 1, cy = g.periodic ? ny : ny - 1;
  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j) {
      const int i1 = wx(i + 1), j1 = wy(j + 1);
      const double a = g.at(i, j), b = g.at(i1, j), c = g.at(i1, j1), d = g.at(i, j1);
      const bool pa = pos(a), pb = pos(b), pc = pos(c), pd = pos(d);
      const std::size_t B = hid(i, j), R = vid(i1, j), T = hid(i, j1), L = vid(i, j);
      std::size_t cut[4];
      int m = 0;
      if (pa != pb) cut[m++] = B;
      if (pb != pc) cut[m++] = R;
      if (pc != pd) cut[m++] = T;
      if (pd != pa) cut[m++] = L;
      if (m == 2) {
        connect(cut[0], cut[1]);
      } else if (m == 4) {
        ++out.ambiguous_cells;
        const double centre = 0.25 * (a + b + c + d);
        // corners sharing the centre sign are joined through the cell
        bool a_joined = centre == 0.0 || pos(centre) == pa;
        if (a_joined) {
          connect(B, R);
          connect(T, L);
        } else {
          connect(B, L);
          connect(R, T);
        }
      }
    }

  auto crossing = [&](std::size_t e) -> Point2 {
    bool horizontal = e < NH;
    std::size_t k = horizontal ? e : e - NH;
    int i = static_cast<int>(k / ny), j = static_cast<int>(k % ny);
    double v0 = g.at(i, j);
    double v1 = horizontal ? g.at(wx(i + 1), j) : g.at(i, wy(j + 1));
    double t = v0 / (v0 - v1);
    double x = g.x0 + i * g.h, y = g.y0 + j * g.h;
    if (horizontal)
      x += t * g.h;
    else
      y += t * g.h;
    return {x, y};
  };

  const double px = g.periodic ? nx * g.h : 0.0, py = g.periodic ? ny * g.h : 0.0;
  auto unwrap = [&](Point2 p, const Point2& ref) {
    if (px > 0) p[0] += px * std::round((ref[0] - p[0]) / px);
    if (py > 0) p[1] += py * std::round((ref[1] - p[1]) / py);
    return p;
  };

  std::vector<char> seen(2 * NH, 0);
  auto walk = [&](std::size_t start, bool closed) {
    Loop l;
    l.closed = closed;
    std::size_t cur = start;
    long prev = -1;
    while (true) {
      seen[cur] = 1;
      Point2 p = crossing(cur);
      l.pts.push_back(l.pts.empty() ? p : unwrap(p, l.pts.back()));
      long next = link[cur][0] == prev ? link[cur][1] : link[cur][0];
      // a two-edge loop links the same neighbour twice
      if (link[cur][0] == link[cur][1]) next = prev < 0 ? link[cur][0] : -1;
      if (next < 0 || seen[next]) break;
      prev = static_cast<long>(cur);
      cur = static_cast<std::size_t>(next);
    }
    if (closed && !l.pts.empty()) {
      Point2 s = unwrap(l.pts.front(), l.pts.back());
      l.wraps = std::abs(s[0] - l.pts.front()[0]) > 0.5 * g.h || std::abs(s[1] - l.pts.front()[1]) > 0.5 * g.h;
    }
    out.loops.push_back(std::move(l));
  };

  for (std::size_t e = 0; e < 2 * NH; ++e)
    if (!seen[e] && link[e][0] >= 0 && link[e][1] < 0) walk(e, false);
  for (std::size_t e = 0; e < 2 * NH; ++e)
    if (!seen[e] && link[e][0] >= 0) walk(e, true);
  return out;
}

bool loop_inside_disc(const Loop& l, const Point2& c, double r, double period_x, double period_y) {
  if (!l.closed || l.wraps || l.pts.empty()) return false;
  for (const auto& p : l.pts) {
    double dx = p[0] - c[0], dy = p[1] - c[1];
    if (period_x > 0) dx = std::remainder(dx, period_x);
    if (period_y > 0) dy = std::remainder(dy, period_y);
    if (!(std::hypot(dx, dy) < r)) return false;
  }
  return true;
}

bool point_in_loop(const Loop& l, const Point2& p) {
  bool in = false;
  const std::size_t m = l.pts.size();
  for (std::size_t a = 0, b = m - 1; a < m; b = a++) {
    const Point2 &u = l.pts[a], &w = l.pts[b];
    if ((u[1] > p[1]) != (w[1] > p[1]) && p[0] < (w[0] - u[0]) * (p[1] - u[1]) / (w[1] - u[1]) + u[0]) in = !in;
  }
  return in;
}

std::vector<double> sign_change_zeros(const std::function<double(double)>& f, double a, double h, int count,
                                      bool periodic, double tol) {
  if (count < 2 || !(h > 0)) throw PreconditionError("sign_change_zeros: need at least 2 samples");
  std::vector<double> fv(count);
  for (int k = 0; k < count; ++k) fv[k] = f(a + k * h);
  std::vector<double> zeros;
  const int pairs = periodic ? count : count - 1;
  for (int k = 0; k < pairs; ++k) {
    double lo = a + k * h, hi = lo + h;
    double flo = fv[k], fhi = k + 1 < count ? fv[k + 1] : fv[0];
    if (pos(flo) == pos(fhi)) continue;
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi), fm = f(mid);
      if (pos(fm) == pos(flo)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(0.5 * (lo + hi));
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

}  // namespace nodal
