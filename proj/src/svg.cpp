#include "nodal/svg.hpp"

#include <cstdio>
#include <sstream>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kView = 1024.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<Loop>& loops, double x0, double y0, double span,
                       const std::vector<SvgCircle>& circles) {
  if (!(span > 0)) throw PreconditionError("render_svg: span must be positive");
  const double s = kView / span;
  auto px = [&](double x) { return fmt((x - x0) * s); };
  auto py = [&](double y) { return fmt(kView - (y - y0) * s); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1024 1024\" width=\"1024\" height=\"1024\">\n";
  os << "<rect width=\"1024\" height=\"1024\" fill=\"white\"/>\n";
  for (const auto& c : circles)
    os << "<circle cx=\"" << px(c.center[0]) << "\" cy=\"" << py(c.center[1]) << "\" r=\"" << fmt(c.radius * s)
       << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"2\" stroke-dasharray=\"8 6\"/>\n";
  for (const auto& l : loops) {
    if (l.pts.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << (l.closed ? "#1f4e9c" : "#b03030") << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : l.pts) os << px(p[0]) << ',' << py(p[1]) << ' ';
    if (l.closed) os << px(l.pts.front()[0]) << ',' << py(l.pts.front()[1]);
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nodal
