#include "nodal/grid_field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "json.hpp"
#include "nodal/errors.hpp"
#include "nodal/io.hpp"

namespace nodal {

namespace {

constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.append(b, sizeof(T));
}

struct Reader {
  const std::string& s;
  std::size_t pos = 0;
  template <class T>
  T get() {
    if (pos + sizeof(T) > s.size()) throw PreconditionError("grid file truncated");
    T v;
    std::memcpy(&v, s.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
};

}  // namespace

bool Window::contains(const double* z, int n) const { return boundary_distance(z, n) > 0.0; }

double Window::boundary_distance(const double* z, int n) const {
  if (kind == Kind::ball) {
    double r2 = 0;
    for (int j = 0; j < n; ++j) r2 += (z[j] - center[j]) * (z[j] - center[j]);
    return radius - std::sqrt(r2);
  }
  double d = 1e300;
  for (int j = 0; j < n; ++j) d = std::min({d, z[j] - lo[j], hi[j] - z[j]});
  return d;
}

double Window::sup_radius() const {
  double r = 0;
  if (kind == Kind::ball) {
    for (double c : center) r = std::max(r, std::abs(c) + radius);
  } else {
    for (std::size_t j = 0; j < lo.size(); ++j) r = std::max({r, std::abs(lo[j]), std::abs(hi[j])});
  }
  return r;
}

std::size_t GridField::size() const {
  std::size_t s = 1;
  for (int d : dims) s *= static_cast<std::size_t>(d);
  return s;
}

std::vector<std::size_t> GridField::strides() const {
  std::vector<std::size_t> st(n, 1);
  for (int j = n - 2; j >= 0; --j) st[j] = st[j + 1] * dims[j + 1];
  return st;
}

std::vector<int> GridField::index(std::size_t k) const {
  std::vector<int> idx(n);
  for (int j = n - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(k % dims[j]);
    k /= dims[j];
  }
  return idx;
}

std::vector<double> GridField::node(std::size_t k) const {
  auto idx = index(k);
  std::vector<double> z(n);
  for (int j = 0; j < n; ++j) z[j] = origin[j] + h * idx[j];
  return z;
}

double GridField::grad_norm(std::size_t k) const {
  double s = 0;
  for (int j = 0; j < n; ++j) s += grads[k * n + j] * grads[k * n + j];
  return std::sqrt(s);
}

void GridField::validate() const {
  if (n < 1 || static_cast<int>(dims.size()) != n || static_cast<int>(origin.size()) != n)
    throw PreconditionError("GridField: inconsistent dimension");
  for (int d : dims)
    if (d < 2) throw PreconditionError("GridField: each axis needs at least 2 nodes");
  if (!(h > 0)) throw PreconditionError("GridField: spacing must be positive");
  if (values.size() != size()) throw PreconditionError("GridField: value count mismatch");
  if (grads.size() != size() * n) throw PreconditionError("GridField: missing gradients");
  for (double g : grads)
    if (!std::isfinite(g)) throw PreconditionError("GridField: non-finite gradient");
  if (!(lip_value >= 0) || !(lip_grad >= 0)) throw PreconditionError("GridField: Lipschitz bounds must be >= 0");
  const auto& w = window;
  std::size_t wn = w.kind == Window::Kind::ball ? w.center.size() : w.lo.size();
  if (static_cast<int>(wn) != n) throw PreconditionError("GridField: window dimension mismatch");
  const double tol = 1e-9 * h;
  for (int j = 0; j < n; ++j) {
    double a = w.kind == Window::Kind::ball ? w.center[j] - w.radius : w.lo[j];
    double b = w.kind == Window::Kind::ball ? w.center[j] + w.radius : w.hi[j];
    if (origin[j] > a + tol || origin[j] + h * (dims[j] - 1) < b - tol)
      throw PreconditionError("GridField: grid does not cover the closed window");
  }
}

std::array<double, 2> GridField::observed_lipschitz() const {
  auto st = strides();
  double lv = 0, lg = 0;
  const std::size_t N = size();
  for (std::size_t k = 0; k < N; ++k) {
    auto idx = index(k);
    for (int d = 0; d < n; ++d) {
      if (idx[d] + 1 >= dims[d]) continue;
      std::size_t m = k + st[d];
      lv = std::max(lv, std::abs(values[m] - values[k]) / h);
      double s = 0;
      for (int j = 0; j < n; ++j) s += std::pow(grads[m * n + j] - grads[k * n + j], 2);
      lg = std::max(lg, std::sqrt(s) / h);
    }
  }
  return {lv, lg};
}

GridField make_ball_grid(int n, const std::vector<double>& center, double radius, int nodes) {
  if (n < 1 || static_cast<int>(center.size()) != n || !(radius > 0) || nodes < 2)
    throw PreconditionError("make_ball_grid: bad arguments");
  GridField f;
  f.n = n;
  f.dims.assign(n, nodes);
  f.h = 2 * radius / (nodes - 1);
  for (int j = 0; j < n; ++j) f.origin.push_back(center[j] - radius);
  f.window.kind = Window::Kind::ball;
  f.window.center = center;
  f.window.radius = radius;
  return f;
}

GridField make_box_grid(const std::vector<double>& lo, const std::vector<double>& hi, int nodes) {
  const int n = static_cast<int>(lo.size());
  if (n < 1 || hi.size() != lo.size() || nodes < 2) throw PreconditionError("make_box_grid: bad arguments");
  GridField f;
  f.n = n;
  f.h = (hi[0] - lo[0]) / (nodes - 1);
  for (int j = 0; j < n; ++j) {
    int m = static_cast<int>(std::lround((hi[j] - lo[j]) / f.h)) + 1;
    if (std::abs((m - 1) * f.h - (hi[j] - lo[j])) > 1e-9 * f.h)
      throw PreconditionError("make_box_grid: box sides must be multiples of the spacing");
    f.dims.push_back(m);
    f.origin.push_back(lo[j]);
  }
  f.window.kind = Window::Kind::box;
  f.window.lo = lo;
  f.window.hi = hi;
  return f;
}

void write_grid_binary(const GridField& f, const std::string& path) {
  f.validate();
  std::string out = "NLGF";
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, f.n);
  for (int d : f.dims) put<std::uint32_t>(out, d);
  for (double o : f.origin) put(out, o);
  put(out, f.h);
  put(out, f.lip_value);
  put(out, f.lip_grad);
  const bool ball = f.window.kind == Window::Kind::ball;
  put<std::uint32_t>(out, ball ? 0 : 1);
  if (ball) {
    for (double c : f.window.center) put(out, c);
    put(out, f.window.radius);
  } else {
    for (double v : f.window.lo) put(out, v);
    for (double v : f.window.hi) put(out, v);
  }
  for (double v : f.values) put(out, v);
  for (double v : f.grads) put(out, v);
  atomic_write(path, out);
}

namespace {

GridField parse_binary(const std::string& s) {
  if (s.size() < 4 || s.compare(0, 4, "NLGF") != 0) throw PreconditionError("not a grid file");
  Reader r{s, 4};
  if (r.get<std::uint32_t>() != kVersion) throw PreconditionError("unsupported grid file version");
  GridField f;
  f.n = static_cast<int>(r.get<std::uint32_t>());
  if (f.n < 1 || f.n > 8) throw PreconditionError("grid file: bad dimension");
  for (int j = 0; j < f.n; ++j) f.dims.push_back(static_cast<int>(r.get<std::uint32_t>()));
  for (int j = 0; j < f.n; ++j) f.origin.push_back(r.get<double>());
  f.h = r.get<double>();
  f.lip_value = r.get<double>();
  f.lip_grad = r.get<double>();
  std::uint32_t kind = r.get<std::uint32_t>();
  if (kind == 0) {
    f.window.kind = Window::Kind::ball;
    for (int j = 0; j < f.n; ++j) f.window.center.push_back(r.get<double>());
    f.window.radius = r.get<double>();
  } else if (kind == 1) {
    f.window.kind = Window::Kind::box;
    for (int j = 0; j < f.n; ++j) f.window.lo.push_back(r.get<double>());
    for (int j = 0; j < f.n; ++j) f.window.hi.push_back(r.get<double>());
  } else {
    throw PreconditionError("grid file: bad window kind");
  }
  const std::size_t N = f.size();
  if (s.size() - r.pos != N * (f.n + 1) * sizeof(double)) throw PreconditionError("grid file: payload size mismatch");
  f.values.resize(N);
  f.grads.resize(N * f.n);
  for (auto& v : f.values) v = r.get<double>();
  for (auto& v : f.grads) v = r.get<double>();
  f.validate();
  return f;
}

}  // namespace

GridField read_grid_binary(const std::string& path) { return parse_binary(read_file(path)); }

std::string grid_to_json(const GridField& f) {
  nlohmann::json j;
  j["format"] = "nodal-grid";
  j["version"] = kVersion;
  j["n"] = f.n;
  j["dims"] = f.dims;
  j["origin"] = f.origin;
  j["spacing"] = f.h;
  j["lip_value"] = f.lip_value;
  j["lip_grad"] = f.lip_grad;
  if (f.window.kind == Window::Kind::ball)
    j["window"] = {{"kind", "ball"}, {"center", f.window.center}, {"radius", f.window.radius}};
  else
    j["window"] = {{"kind", "box"}, {"lo", f.window.lo}, {"hi", f.window.hi}};
  j["values"] = f.values;
  j["gradients"] = f.grads;
  return j.dump();
}

GridField grid_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  GridField f;
  try {
    f.n = j.at("n").get<int>();
    f.dims = j.at("dims").get<std::vector<int>>();
    f.origin = j.at("origin").get<std::vector<double>>();
    f.h = j.at("spacing").get<double>();
    f.lip_value = j.at("lip_value").get<double>();
    f.lip_grad = j.at("lip_grad").get<double>();
    const auto& w = j.at("window");
    if (w.at("kind") == "ball") {
      f.window.kind = Window::Kind::ball;
      f.window.center = w.at("center").get<std::vector<double>>();
      f.window.radius = w.at("radius").get<double>();
    } else {
      f.window.kind = Window::Kind::box;
      f.window.lo = w.at("lo").get<std::vector<double>>();
      f.window.hi = w.at("hi").get<std::vector<double>>();
    }
    f.values = j.at("values").get<std::vector<double>>();
    if (!j.contains("gradients")) throw PreconditionError("GridField: missing gradients");
    f.grads = j.at("gradients").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("grid JSON: ") + e.what());
  }
  f.validate();
  return f;
}

GridField read_grid_file(const std::string& path) {
  std::string s = read_file(path);
  if (s.size() >= 4 && s.compare(0, 4, "NLGF") == 0) return parse_binary(s);
  return grid_from_json(s);
}

}  // namespace nodal
