#pragma once

#include <string>
#include <vector>

#include "nodal/contour.hpp"

namespace nodal {

struct SvgCircle {
  Point2 center;
  double radius = 0.0;
};

// The square [x0, x0 + span] x [y0, y0 + span] on a fixed 1024 x 1024 viewBox (y up):
// loops as polylines, circles dashed.
std::string render_svg(const std::vector<Loop>& loops, double x0, double y0, double span,
                       const std::vector<SvgCircle>& circles = {});

}  // namespace nodal
