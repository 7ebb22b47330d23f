#include "nodal/truncation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/quadrature.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

Mat phase_matrix(const std::vector<double>& pts, double scale, const std::vector<double>& freq) {
  Mat E(pts.size(), freq.size());
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t a = 0; a < freq.size(); ++a) E(p, a) = std::polar(1.0, scale * pts[p] * freq[a]);
  return E;
}

}  // namespace

double smoothstep5(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  return t * t * t * (10 + t * (-15 + 6 * t));
}

double TruncationSpec::chi(double r) const {
  double h = 0.5 * c;
  return 1.0 - smoothstep5((r - h) / h);
}

TruncatedField::TruncatedField(const GaussPoly& q, const TruncationSpec& spec, const Options& opt)
    : q_(q), spec_(spec), opt_(opt), n_(q.n()) {
  if (n_ < 1 || n_ > 2) throw PreconditionError("TruncatedField: only n = 1, 2 are supported");
  if (!(spec.c > 0 && spec.eta > 0)) throw PreconditionError("TruncatedField: c and eta must be positive");

  std::vector<std::vector<double>> probes =
      n_ == 1 ? std::vector<std::vector<double>>{{0.0}, {0.7}, {-1.9}, {2.6}, {4.1}}
              : std::vector<std::vector<double>>{{0, 0}, {1, 0.5}, {-1.9, 1.3}, {0.3, -2.7}, {2.5, 2.5}, {3.7, -0.4}};
  auto sample = [&] {
    std::vector<double> v;
    for (const auto& p : probes) v.push_back((*this)(p));
    return v;
  };

  double width = opt_.panel_width;
  build(width);
  std::vector<double> prev = sample();
  for (int r = 0; r < opt_.max_refine; ++r) {
    width *= 0.5;
    build(width);
    std::vector<double> cur = sample();
    double diff = 0, mag = 1.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      diff = std::max(diff, std::abs(cur[i] - prev[i]));
      mag = std::max(mag, std::abs(cur[i]));
    }
    if (diff <= opt_.tol * mag) return;
    prev = std::move(cur);
  }
  throw NumericalError("TruncatedField: frequency quadrature did not converge");
}

void TruncatedField::build(double width) {
  width_ = width;
  const double rmax = spec_.c / spec_.eta;
  const double rho = std::min(rmax, opt_.tail);
  const double plateau = 0.5 * rmax;
  std::vector<double> breaks{-rho};
  if (plateau < rho) {
    breaks.push_back(-plateau);
    breaks.push_back(plateau);
  }
  breaks.push_back(rho);
  QuadRule rule = composite_gauss_width(breaks, width, opt_.nodes_per_panel);
  axis_ = rule.nodes;
  ia_.clear();
  ib_.clear();
  w_.clear();
  qw_.clear();
  const double norm = std::pow(2 * kPi, -n_);
  const std::size_t N = axis_.size();
  auto push = [&](int a, int b, double r, double qw, cd F) {
    double ch = spec_.chi(spec_.eta * r);
    if (ch <= 0.0 || r > rmax) return;
    ia_.push_back(a);
    ib_.push_back(b);
    w_.push_back(qw * ch * F * norm);
    qw_.push_back(qw);
  };
  if (n_ == 1) {
    for (std::size_t a = 0; a < N; ++a) {
      double xi[1] = {axis_[a]};
      push(a, 0, std::abs(axis_[a]), rule.weights[a], q_.fourier(xi));
    }
  } else {
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        double xi[2] = {axis_[a], axis_[b]};
        push(a, b, std::hypot(xi[0], xi[1]), rule.weights[a] * rule.weights[b], q_.fourier(xi));
      }
  }
}

std::complex<double> TruncatedField::eval_complex(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != n_) throw PreconditionError("TruncatedField: point dimension mismatch");
  cd s = 0;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    double ph = y[0] * axis_[ia_[k]] + (n_ == 2 ? y[1] * axis_[ib_[k]] : 0.0);
    s += w_[k] * std::polar(1.0, ph);
  }
  return s;
}

void TruncatedField::gradient(std::span<const double> y, std::span<double> g) const {
  if (static_cast<int>(y.size()) != n_ || static_cast<int>(g.size()) != n_)
    throw PreconditionError("TruncatedField: point dimension mismatch");
  cd s0 = 0, s1 = 0;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    double x0 = axis_[ia_[k]], x1 = n_ == 2 ? axis_[ib_[k]] : 0.0;
    cd t = w_[k] * std::polar(1.0, y[0] * x0 + (n_ == 2 ? y[1] * x1 : 0.0));
    s0 += cd(0, x0) * t;
    s1 += cd(0, x1) * t;
  }
  g[0] = s0.real();
  if (n_ == 2) g[1] = s1.real();
}

double TruncatedField::rescaled(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v *= spec_.eta;
  return (*this)(y);
}

void TruncatedField::rescaled_gradient(std::span<const double> x, std::span<double> g) const {
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v *= spec_.eta;
  gradient(y, g);
  for (double& v : g) v *= spec_.eta;
}

GridValues TruncatedField::grid(const std::vector<double>& xs, const std::vector<double>& ys, double scale,
                                bool with_gradient) const {
  if (n_ != 2) throw PreconditionError("TruncatedField::grid: n = 2 only");
  const std::size_t N = axis_.size();
  Mat M = Mat::Zero(N, N);
  for (std::size_t k = 0; k < w_.size(); ++k) M(ia_[k], ib_[k]) = w_[k];
  Mat Ex = phase_matrix(xs, scale, axis_), Ey = phase_matrix(ys, scale, axis_);
  GridValues out;
  out.nx = xs.size();
  out.ny = ys.size();
  Mat T = Ex * M;
  Mat V = T * Ey.transpose();
  auto store = [&](const Mat& A, std::vector<double>& dst, double f) {
    dst.resize(out.nx * out.ny);
    for (int i = 0; i < out.nx; ++i)
      for (int j = 0; j < out.ny; ++j) dst[i * out.ny + j] = f * A(i, j).real();
  };
  store(V, out.v, 1.0);
  if (with_gradient) {
    Eigen::VectorXcd d(N);
    for (std::size_t a = 0; a < N; ++a) d(a) = cd(0, axis_[a]);
    Mat Tx = (Ex * d.asDiagonal()) * M;
    store(Tx * Ey.transpose(), out.gx, scale);
    store(T * (Ey * d.asDiagonal()).transpose(), out.gy, scale);
  }
  return out;
}

double TruncatedField::l2_norm() const {
  // (2 pi)^{-n} sum qw chi^2 |F|^2 = sum |w|^2 / (qw (2 pi)^{-n})
  const double norm = std::pow(2 * kPi, -n_);
  double s = 0;
  for (std::size_t k = 0; k < w_.size(); ++k) s += std::norm(w_[k]) / (qw_[k] * norm);
  return std::sqrt(s);
}

double TruncatedField::derivative_bound(int order) const {
  double s = 0;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    double r = std::hypot(axis_[ia_[k]], n_ == 2 ? axis_[ib_[k]] : 0.0);
    s += std::abs(w_[k]) * std::pow(r, order);
  }
  // quadrature of a positive integrand; pad for its relative error
  return s * (1 + 1e-6);
}

double TruncatedField::max_node_radius() const {
  double m = 0;
  for (std::size_t k = 0; k < w_.size(); ++k)
    m = std::max(m, std::hypot(axis_[ia_[k]], n_ == 2 ? axis_[ib_[k]] : 0.0));
  return m;
}

TruncationResidual::TruncationResidual(const GaussPoly& q, const TruncationSpec& spec, double max_abs_coord)
    : n_(q.n()) {
  if (n_ < 1 || n_ > 2) throw PreconditionError("TruncationResidual: only n = 1, 2");
  const double a = spec.ratio(), b = a + 7.0;
  QuadRule rr = composite_gauss_width({a, b}, 0.25, 10);
  const double norm = std::pow(2 * kPi, -n_);
  auto push = [&](double x1, double x2, double qw) {
    double xi[2] = {x1, x2};
    cd F = q.fourier(std::span<const double>(xi, n_));
    double r = std::hypot(x1, x2);
    double m = spec.chi(spec.eta * r) - 1.0;
    l2sq_ += qw * m * m * std::norm(F) * norm;
    cd w = qw * m * F * norm;
    if (w == cd(0, 0)) return;
    x1_.push_back(x1);
    x2_.push_back(x2);
    w_.push_back(w);
  };
  if (n_ == 1) {
    for (std::size_t k = 0; k < rr.nodes.size(); ++k) {
      push(rr.nodes[k], 0, rr.weights[k]);
      push(-rr.nodes[k], 0, rr.weights[k]);
    }
    return;
  }
  const int M = 2 * static_cast<int>(std::ceil(b * max_abs_coord * std::sqrt(2.0))) + 32;
  for (std::size_t k = 0; k < rr.nodes.size(); ++k)
    for (int m = 0; m < M; ++m) {
      double th = 2 * kPi * m / M, r = rr.nodes[k];
      push(r * std::cos(th), r * std::sin(th), rr.weights[k] * r * 2 * kPi / M);
    }
}

GridValues TruncationResidual::grid(const std::vector<double>& xs, const std::vector<double>& ys) const {
  GridValues out;
  out.nx = xs.size();
  out.ny = n_ == 2 ? ys.size() : 1;
  out.v.assign(out.nx * out.ny, 0.0);
  out.gx.assign(out.nx * out.ny, 0.0);
  out.gy.assign(out.nx * out.ny, 0.0);
  if (w_.empty()) return out;
  const std::size_t K = w_.size();
  Mat Ex(xs.size(), K);
  for (std::size_t p = 0; p < xs.size(); ++p)
    for (std::size_t k = 0; k < K; ++k) Ex(p, k) = std::polar(1.0, xs[p] * x1_[k]) * w_[k];
  if (n_ == 1) {
    for (std::size_t p = 0; p < xs.size(); ++p) {
      cd v = 0, g = 0;
      for (std::size_t k = 0; k < K; ++k) {
        v += Ex(p, k);
        g += cd(0, x1_[k]) * Ex(p, k);
      }
      out.v[p] = v.real();
      out.gx[p] = g.real();
    }
    return out;
  }
  Mat Ey(ys.size(), K), Eyd(ys.size(), K);
  for (std::size_t p = 0; p < ys.size(); ++p)
    for (std::size_t k = 0; k < K; ++k) {
      Ey(p, k) = std::polar(1.0, ys[p] * x2_[k]);
      Eyd(p, k) = cd(0, x2_[k]) * Ey(p, k);
    }
  Mat Exd = Ex;
  for (std::size_t k = 0; k < K; ++k) Exd.col(k) *= cd(0, x1_[k]);
  Mat V = Ex * Ey.transpose(), Gx = Exd * Ey.transpose(), Gy = Ex * Eyd.transpose();
  for (int i = 0; i < out.nx; ++i)
    for (int j = 0; j < out.ny; ++j) {
      out.v[i * out.ny + j] = V(i, j).real();
      out.gx[i * out.ny + j] = Gx(i, j).real();
      out.gy[i * out.ny + j] = Gy(i, j).real();
    }
  return out;
}

double TruncationResidual::l2_norm() const { return std::sqrt(l2sq_); }

}  // namespace nodal
