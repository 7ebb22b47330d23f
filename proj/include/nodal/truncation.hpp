#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nodal/local_model.hpp"

namespace nodal {

// Radial cutoff chi(eta |xi|): 1 on [0, c/2], 0 on [c, inf), quintic smoothstep between.
struct TruncationSpec {
  double c = 1.0;
  double eta = 1.0;
  double chi(double r) const;  // r = eta |xi|
  double ratio() const { return c / (2 * eta); }
};

double smoothstep5(double t);

// Values (and optionally gradients) on a tensor grid xs x ys, row-major [ix * ny + iy].
struct GridValues {
  int nx = 0, ny = 0;
  std::vector<double> v, gx, gy;
};

// q^c_eta(y) = (2 pi)^{-n} int chi(eta xi) Fq(xi) e^{i <y, xi>} dxi, n in {1, 2}.
// Frequencies on a tensor Gauss-Legendre grid clipped to |xi| <= c/eta; the
// panel width is halved until probe values agree to `tol`.
class TruncatedField {
 public:
  struct Options {
    double tol = 1e-8;
    int nodes_per_panel = 10;
    double panel_width = 1.0;  // initial width
    double tail = 10.0;        // |xi| beyond which Fq is negligible
    int max_refine = 6;
  };

  TruncatedField(const GaussPoly& q, const TruncationSpec& spec, const Options& opt);
  TruncatedField(const GaussPoly& q, const TruncationSpec& spec) : TruncatedField(q, spec, Options{}) {}

  int n() const { return n_; }
  const TruncationSpec& spec() const { return spec_; }

  std::complex<double> eval_complex(std::span<const double> y) const;
  double operator()(std::span<const double> y) const { return eval_complex(y).real(); }
  void gradient(std::span<const double> y, std::span<double> g) const;

  // q_{i,c}(x) = q^c_eta(eta x)
  double rescaled(std::span<const double> x) const;
  void rescaled_gradient(std::span<const double> x, std::span<double> g) const;

  // Values of y -> q^c_eta(scale * y) on the tensor grid xs x ys, gradients
  // taken in the grid coordinates. n = 2 only.
  GridValues grid(const std::vector<double>& xs, const std::vector<double>& ys, double scale = 1.0,
                  bool with_gradient = true) const;

  // ||q^c_eta||_{L2} by Plancherel on the frequency nodes
  double l2_norm() const;
  // (2 pi)^{-n} int |xi|^order |chi Fq|, an upper bound for sup of order-th derivatives
  double derivative_bound(int order) const;
  double max_node_radius() const;
  std::size_t node_count() const { return w_.size(); }
  double panel_width() const { return width_; }

 private:
  void build(double width);

  GaussPoly q_;
  TruncationSpec spec_;
  Options opt_;
  int n_;
  double width_ = 0.0;
  std::vector<double> axis_;                // 1-D nodes
  std::vector<int> ia_, ib_;                // axis indices per node (ib unused for n = 1)
  std::vector<std::complex<double>> w_;     // quadrature weight * chi * Fq / (2 pi)^n
  std::vector<double> qw_;                  // bare quadrature weight
};

// Exact residual q^c_eta - q = (2 pi)^{-n} int_{|xi| >= c/2eta} (chi - 1) Fq e^{i<y,xi>},
// integrated over the complement of the plateau only (polar rule for n = 2), so
// tiny residuals are not swamped by cancellation.
class TruncationResidual {
 public:
  TruncationResidual(const GaussPoly& q, const TruncationSpec& spec, double max_abs_coord);
  // value and gradient on a tensor grid (n = 2) or on xs (n = 1, ys ignored)
  GridValues grid(const std::vector<double>& xs, const std::vector<double>& ys) const;
  // ||q^c_eta - q||_{L2} by Plancherel
  double l2_norm() const;
  bool empty() const { return w_.empty(); }

 private:
  int n_;
  std::vector<double> x1_, x2_;
  std::vector<std::complex<double>> w_;
  double l2sq_ = 0.0;
};

}  // namespace nodal
