#include "nodal/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

QuadRule build_gl(int m) {
  QuadRule q;
  q.nodes.resize(m);
  q.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    q.nodes[m - 1 - i] = x;
    q.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

}  // namespace

const QuadRule& gauss_legendre(int m) {
  if (m < 1) throw PreconditionError("gauss_legendre: m < 1");
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, build_gl(m)).first;
  return it->second;
}

QuadRule composite_gauss(const std::vector<double>& breaks, int panels, int m) {
  const QuadRule& g = gauss_legendre(m);
  QuadRule out;
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    int p = panels;
    double w = (b - a) / p;
    for (int k = 0; k < p; ++k) {
      double lo = a + k * w;
      for (int i = 0; i < m; ++i) {
        out.nodes.push_back(lo + 0.5 * w * (g.nodes[i] + 1.0));
        out.weights.push_back(0.5 * w * g.weights[i]);
      }
    }
  }
  return out;
}

QuadRule composite_gauss_width(const std::vector<double>& breaks, double width, int m) {
  const QuadRule& g = gauss_legendre(m);
  QuadRule out;
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    int p = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-12)));
    double w = (b - a) / p;
    for (int k = 0; k < p; ++k) {
      double lo = a + k * w;
      for (int i = 0; i < m; ++i) {
        out.nodes.push_back(lo + 0.5 * w * (g.nodes[i] + 1.0));
        out.weights.push_back(0.5 * w * g.weights[i]);
      }
    }
  }
  return out;
}

double integrate(const std::function<double(double)>& f, const QuadRule& q) {
  double s = 0.0;
  for (size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

}  // namespace nodal
