#pragma once

#include <array>
#include <functional>
#include <vector>

namespace nodal {

using Point2 = std::array<double, 2>;

// Uniform 2-D sample grid: node (i, j) sits at (x0 + i h, y0 + j h), values row-major [i * ny + j].
// When periodic, nx h and ny h are the periods and cells wrap around.
struct SampleGrid2 {
  int nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  bool periodic = false;
  const double* v = nullptr;
  double at(int i, int j) const { return v[static_cast<std::size_t>(i) * ny + j]; }
};

struct Loop {
  std::vector<Point2> pts;  // unwrapped along the walk
  bool closed = true;       // false: open chain ending on the box edge
  bool wraps = false;       // closed on the torus but not contractible
};

struct ContourResult {
  std::vector<Loop> loops;
  int ambiguous_cells = 0;
  int zero_nodes = 0;  // nodes with value exactly 0 (counted as positive)
};

// Marching squares on the zero level with linear edge interpolation; saddle
// cells are split by the sign of the bilinear centre value (mean of corners).
ContourResult marching_squares(const SampleGrid2& g);

// Loop lies strictly inside the disc B(c, r); on a periodic grid distances use
// the minimal image with the given periods.
bool loop_inside_disc(const Loop& l, const Point2& c, double r, double period_x = 0.0, double period_y = 0.0);
// Even-odd test: is p enclosed by the closed polyline
bool point_in_loop(const Loop& l, const Point2& p);

// Zeros of a 1-D function from the sign changes of samples at a + k h
// (k < count, wrapping to the first sample when periodic) refined by bisection to tol.
std::vector<double> sign_change_zeros(const std::function<double(double)>& f, double a, double h, int count,
                                      bool periodic, double tol = 1e-10);

}  // namespace nodal
