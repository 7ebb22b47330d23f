#pragma once

#include <functional>
#include <vector>

namespace nodal {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// m-point Gauss-Legendre rule on [-1, 1].
const QuadRule& gauss_legendre(int m);

// Each interval [breaks[i], breaks[i+1]] split into `panels` equal panels.
QuadRule composite_gauss(const std::vector<double>& breaks, int panels, int m = 10);

// Panels of width at most `width` between consecutive breakpoints.
QuadRule composite_gauss_width(const std::vector<double>& breaks, double width, int m = 10);

double integrate(const std::function<double(double)>& f, const QuadRule& q);

}  // namespace nodal
