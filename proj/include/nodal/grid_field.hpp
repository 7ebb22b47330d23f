#pragma once

#include <array>
#include <string>
#include <vector>

namespace nodal {

// Window W: an open ball or an open box; the grid must cover its closure.
struct Window {
  enum class Kind { ball, box } kind = Kind::box;
  std::vector<double> center;  // ball
  double radius = 0.0;         // ball
  std::vector<double> lo, hi;  // box
  bool contains(const double* z, int n) const;  // open window
  double boundary_distance(const double* z, int n) const;  // >= 0 inside, < 0 outside
  double sup_radius() const;  // sup-norm radius about the origin
};

// Samples of f and df on a uniform grid, node (i_1..i_n) at origin + h i,
// last index fastest. grads holds n entries per node.
struct GridField {
  int n = 0;
  std::vector<int> dims;
  std::vector<double> origin;
  double h = 0.0;
  std::vector<double> values, grads;
  double lip_value = 0.0;  // Lipschitz bound for f (sup |df|)
  double lip_grad = 0.0;   // Lipschitz bound for df (sup operator norm of the Hessian)
  Window window;

  std::size_t size() const;
  std::vector<int> index(std::size_t k) const;
  std::vector<std::size_t> strides() const;
  std::vector<double> node(std::size_t k) const;
  double grad_norm(std::size_t k) const;
  void validate() const;
  // largest ratio |f(a) - f(b)| / h and |df(a) - df(b)| / h over adjacent nodes
  std::array<double, 2> observed_lipschitz() const;
};

// Grid over the bounding box of a ball window, `nodes` points per axis.
GridField make_ball_grid(int n, const std::vector<double>& center, double radius, int nodes);
// Grid whose nodes span the box window exactly.
GridField make_box_grid(const std::vector<double>& lo, const std::vector<double>& hi, int nodes);

// Little-endian binary: "NLGF", u32 version, u32 n, u32 dims[n], f64 origin[n], f64 h,
// f64 lip_value, f64 lip_grad, u32 window kind, window params, then values, then gradients.
void write_grid_binary(const GridField& f, const std::string& path);
GridField read_grid_binary(const std::string& path);
std::string grid_to_json(const GridField& f);
GridField grid_from_json(const std::string& text);
GridField read_grid_file(const std::string& path);  // binary or JSON by content

}  // namespace nodal
