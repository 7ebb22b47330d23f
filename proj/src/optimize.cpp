#include "nodal/optimize.hpp"

#include <cmath>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

MinResult minimize_log_grid(const std::function<double(double)>& f, double lo, double hi, int points,
                            double rel_tol) {
  if (!(lo > 0 && hi > lo) || points < 3) throw PreconditionError("minimize_log_grid: bad range");
  const double a0 = std::log(lo), b0 = std::log(hi);
  auto g = [&](double s) { return f(std::exp(s)); };

  std::vector<double> s(points), v(points);
  int best = 0;
  for (int i = 0; i < points; ++i) {
    s[i] = a0 + (b0 - a0) * i / (points - 1);
    v[i] = g(s[i]);
    if (v[i] < v[best]) best = i;
  }
  if (best == 0 || best == points - 1) return {std::exp(s[best]), v[best], true};

  constexpr double kInvPhi = 0.6180339887498949;
  double a = s[best - 1], b = s[best + 1];
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 300 && (b - a) > rel_tol * (1.0 + std::abs(0.5 * (a + b))); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = g(d);
    }
  }
  double sm = fc < fd ? c : d;
  double fm = std::min(fc, fd);
  if (v[best] < fm) return {std::exp(s[best]), v[best], false};
  return {std::exp(sm), fm, false};
}

}  // namespace nodal
