#include "nodal/torus.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

}  // namespace

std::vector<std::array<int, 2>> TorusEnsemble::modes() const {
  std::vector<std::array<int, 2>> m{{0, 0}};
  for (const auto& k : half) {
    m.push_back(k);
    m.push_back({-k[0], -k[1]});
  }
  return m;
}

double TorusEnsemble::c0() const { return std::pow(2 * kPi, -0.5 * n); }
double TorusEnsemble::cn() const { return std::sqrt(2.0) * std::pow(2 * kPi, -0.5 * n); }

TorusEnsemble build_ensemble(int n, double L) {
  if (n != 1 && n != 2) throw PreconditionError("build_ensemble: n must be 1 or 2");
  if (!(L >= 1)) throw PreconditionError("build_ensemble: L must be >= 1");
  TorusEnsemble e;
  e.n = n;
  e.L = L;
  e.K = static_cast<int>(std::floor(std::sqrt(L)));
  while ((e.K + 1.0) * (e.K + 1.0) <= L) ++e.K;
  while (1.0 * e.K * e.K > L) --e.K;
  if (n == 1) {
    for (int k = 1; k <= e.K; ++k) e.half.push_back({k, 0});
  } else {
    for (int k2 = 0; k2 <= e.K; ++k2)
      for (int k1 = -e.K; k1 <= e.K; ++k1) {
        if (k2 == 0 && k1 <= 0) continue;
        if (1.0 * k1 * k1 + 1.0 * k2 * k2 <= L) e.half.push_back({k1, k2});
      }
  }
  return e;
}

RandomSection RandomSection::negated() const {
  RandomSection r = *this;
  for (double& c : r.coeffs) c = -c;
  return r;
}

RandomSection sample_section(const TorusEnsemble& e, std::uint64_t seed, std::uint64_t trial) {
  std::mt19937_64 rng(derive_seed(seed, trial));
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  RandomSection s;
  s.seed = seed;
  s.trial = trial;
  s.coeffs.resize(e.N_L());
  for (double& c : s.coeffs) c = g(rng);
  return s;
}

SectionGrid eval_section_tensor(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& xs,
                                const std::vector<double>& ys, bool with_gradient) {
  if (s.coeffs.size() != e.N_L()) throw PreconditionError("eval_section: coefficient count mismatch");
  SectionGrid out;
  const double c0 = e.c0() * s.coeffs[0], cn = e.cn();
  if (e.n == 1) {
    out.nx = xs.size();
    out.ny = 1;
    out.v.resize(xs.size());
    if (with_gradient) out.gx.resize(xs.size());
    for (std::size_t p = 0; p < xs.size(); ++p) {
      double v = c0, g = 0;
      for (std::size_t m = 0; m < e.half.size(); ++m) {
        double k = e.half[m][0], a = s.coeffs[1 + 2 * m], b = s.coeffs[2 + 2 * m];
        double c = std::cos(k * xs[p]), sn = std::sin(k * xs[p]);
        v += cn * (a * c + b * sn);
        g += cn * k * (b * c - a * sn);
      }
      out.v[p] = v;
      if (with_gradient) out.gx[p] = g;
    }
    return out;
  }

  const int K = e.K, nx = xs.size(), ny = ys.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * K + 1, K + 1);
  for (std::size_t m = 0; m < e.half.size(); ++m) {
    // a cos t + b sin t = Re((a - i b) e^{i t})
    M(e.half[m][0] + K, e.half[m][1]) = cn * cd(s.coeffs[1 + 2 * m], -s.coeffs[2 + 2 * m]);
  }
  Eigen::MatrixXcd Ex(nx, 2 * K + 1);
  Eigen::MatrixXd Cy(ny, K + 1), Sy(ny, K + 1);
  for (int i = 0; i < nx; ++i)
    for (int k = -K; k <= K; ++k) Ex(i, k + K) = std::polar(1.0, k * xs[i]);
  for (int j = 0; j < ny; ++j)
    for (int k = 0; k <= K; ++k) {
      Cy(j, k) = std::cos(k * ys[j]);
      Sy(j, k) = std::sin(k * ys[j]);
    }
  out.nx = nx;
  out.ny = ny;
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  // Re(T (A + i B)^T) = Re T A^T - Im T B^T, written straight into the row-major output
  auto real_product = [&](const Eigen::MatrixXcd& T, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          std::vector<double>& dst, double add) {
    dst.assign(static_cast<std::size_t>(nx) * ny, add);
    Eigen::Map<RowMat> D(dst.data(), nx, ny);
    Eigen::MatrixXd Tr = T.real(), Ti = T.imag();
    D.noalias() += Tr * A.transpose();
    D.noalias() -= Ti * B.transpose();
  };
  Eigen::MatrixXcd T = Ex * M;
  real_product(T, Cy, Sy, out.v, c0);
  if (with_gradient) {
    Eigen::VectorXcd d1(2 * K + 1);
    Eigen::VectorXd k2(K + 1);
    for (int k = -K; k <= K; ++k) d1(k + K) = cd(0, k);
    for (int k = 0; k <= K; ++k) k2(k) = k;
    Eigen::MatrixXcd Tx = (Ex * d1.asDiagonal()) * M;
    real_product(Tx, Cy, Sy, out.gx, 0.0);
    // d/dy e^{i k y} = i k (cos + i sin) = -k sin + i k cos
    Eigen::MatrixXd A = -(Sy * k2.asDiagonal()), B = Cy * k2.asDiagonal();
    real_product(T, A, B, out.gy, 0.0);
  }
  return out;
}

double eval_section_point(const TorusEnsemble& e, const RandomSection& s, const double* x, double* grad) {
  if (s.coeffs.size() != e.N_L()) throw PreconditionError("eval_section: coefficient count mismatch");
  const double cn = e.cn();
  double v = e.c0() * s.coeffs[0], g0 = 0, g1 = 0;
  for (std::size_t m = 0; m < e.half.size(); ++m) {
    double k0 = e.half[m][0], k1 = e.n == 2 ? e.half[m][1] : 0.0;
    double t = k0 * x[0] + (e.n == 2 ? k1 * x[1] : 0.0);
    double a = s.coeffs[1 + 2 * m], b = s.coeffs[2 + 2 * m];
    double c = std::cos(t), sn = std::sin(t);
    v += cn * (a * c + b * sn);
    double d = cn * (b * c - a * sn);
    g0 += k0 * d;
    g1 += k1 * d;
  }
  if (grad) {
    grad[0] = g0;
    if (e.n == 2) grad[1] = g1;
  }
  return v;
}

void eval_section_hessian(const TorusEnsemble& e, const RandomSection& s, const double* x, double* hess) {
  if (e.n != 2) throw PreconditionError("eval_section_hessian: n = 2 only");
  const double cn = e.cn();
  hess[0] = hess[1] = hess[2] = 0.0;
  for (std::size_t m = 0; m < e.half.size(); ++m) {
    double k0 = e.half[m][0], k1 = e.half[m][1], t = k0 * x[0] + k1 * x[1];
    double w = -cn * (s.coeffs[1 + 2 * m] * std::cos(t) + s.coeffs[2 + 2 * m] * std::sin(t));
    hess[0] += k0 * k0 * w;
    hess[1] += k0 * k1 * w;
    hess[2] += k1 * k1 * w;
  }
}

std::array<double, 2> section_lipschitz(const TorusEnsemble& e, const RandomSection& s) {
  double l1 = 0, l2 = 0;
  for (std::size_t m = 0; m < e.half.size(); ++m) {
    double k = std::hypot(e.half[m][0], e.n == 2 ? e.half[m][1] : 0);
    double c = e.cn() * (std::abs(s.coeffs[1 + 2 * m]) + std::abs(s.coeffs[2 + 2 * m]));
    l1 += c * k;
    l2 += c * k * k;
  }
  return {l1, l2};
}

GridField eval_section(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& lo, double h,
                       int nodes) {
  if (static_cast<int>(lo.size()) != e.n) throw PreconditionError("eval_section: corner dimension mismatch");
  std::vector<double> hi(lo);
  for (double& v : hi) v += h * (nodes - 1);
  GridField f = make_box_grid(lo, hi, nodes);
  f.h = h;
  std::vector<double> xs(nodes), ys;
  for (int k = 0; k < nodes; ++k) xs[k] = lo[0] + h * k;
  if (e.n == 2) {
    ys.resize(nodes);
    for (int k = 0; k < nodes; ++k) ys[k] = lo[1] + h * k;
  }
  SectionGrid g = eval_section_tensor(e, s, xs, ys);
  f.values = std::move(g.v);
  f.grads.resize(e.n * f.values.size());
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    f.grads[e.n * k] = g.gx[k];
    if (e.n == 2) f.grads[2 * k + 1] = g.gy[k];
  }
  auto lip = section_lipschitz(e, s);
  f.lip_value = lip[0];
  f.lip_grad = lip[1];
  return f;
}

double spectral_kernel(const TorusEnsemble& e, const double* x, const double* y) {
  double s = 1.0;
  for (const auto& k : e.half) {
    double t = k[0] * (x[0] - y[0]) + (e.n == 2 ? k[1] * (x[1] - y[1]) : 0.0);
    s += 2 * std::cos(t);
  }
  return s * std::pow(2 * kPi, -e.n);
}

}  // namespace nodal
