#pragma once

#include <functional>

namespace nodal {

struct MinResult {
  double x = 0.0;    // argmin
  double fx = 0.0;   // objective at argmin
  bool at_boundary = false;  // grid minimum sat on an endpoint; no bracket
};

// Minimize f(x) for x in [lo, hi] (lo > 0): a log-spaced grid of `points`
// samples to bracket, then golden section in log x until the bracket is
// narrower than rel_tol (relative, in log x).
MinResult minimize_log_grid(const std::function<double(double)>& f, double lo, double hi,
                            int points = 200, double rel_tol = 1e-10);

}  // namespace nodal
