#include "nodal/local_model.hpp"

#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/quadrature.hpp"
#include "nodal/special.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sup_power_gauss(int m, double B) {
  if (m == 0) return 0.0;
  double t = std::sqrt(static_cast<double>(m));
  if (t > B) t = B;
  return m * std::log(t) - 0.5 * t * t;
}

double log_exponent_fact(const GaussPoly::Exponent& I) {
  double s = 0;
  for (int i : I) s += log_factorial(i);
  return s;
}

}  // namespace

double HermitePoly::operator()(double x) const {
  double s = 0;
  for (int p = static_cast<int>(coeffs.size()) - 1; p >= 0; --p) s = s * x + coeffs[p];
  return s;
}

HermitePoly hermite(int k) {
  if (k < 0) throw PreconditionError("hermite: negative degree");
  std::vector<double> h{1.0};
  for (int d = 0; d < k; ++d) {
    std::vector<double> next(h.size() + 1, 0.0);
    for (std::size_t p = 1; p < h.size(); ++p) next[p - 1] += p * h[p];
    for (std::size_t p = 0; p < h.size(); ++p) next[p + 1] -= h[p];
    h = std::move(next);
  }
  return {k, h};
}

void GaussPoly::add(const Exponent& I, double a) {
  if (static_cast<int>(I.size()) != n_) throw PreconditionError("GaussPoly: exponent dimension mismatch");
  if (a == 0.0) return;
  double& slot = coeffs_[I];
  slot += a;
  if (slot == 0.0) coeffs_.erase(I);
}

int GaussPoly::degree() const {
  int d = 0;
  for (const auto& [I, a] : coeffs_) {
    int s = 0;
    for (int i : I) s += i;
    d = std::max(d, s);
  }
  return d;
}

double GaussPoly::poly(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw PreconditionError("GaussPoly: point dimension mismatch");
  double s = 0;
  for (const auto& [I, a] : coeffs_) {
    double t = a;
    for (int j = 0; j < n_; ++j)
      for (int p = 0; p < I[j]; ++p) t *= x[j];
    s += t;
  }
  return s;
}

double GaussPoly::operator()(std::span<const double> x) const {
  double r2 = 0;
  for (double v : x) r2 += v * v;
  return poly(x) * std::exp(-0.5 * r2);
}

GaussPoly GaussPoly::derivative(int k) const {
  if (k < 0 || k >= n_) throw PreconditionError("GaussPoly::derivative: coordinate out of range");
  GaussPoly d(n_);
  for (const auto& [I, a] : coeffs_) {
    if (I[k] > 0) {
      Exponent J = I;
      --J[k];
      d.add(J, a * I[k]);
    }
    Exponent J = I;
    ++J[k];
    d.add(J, -a);
  }
  return d;
}

std::complex<double> GaussPoly::fourier(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != n_) throw PreconditionError("GaussPoly: point dimension mismatch");
  int dmax = degree();
  std::vector<std::vector<double>> H(n_, std::vector<double>(dmax + 1));
  double g = 0;
  for (int j = 0; j < n_; ++j) {
    // H_{k+1}(x) = -x H_k(x) - k H_{k-1}(x), the three-term form of the recurrence
    H[j][0] = 1.0;
    if (dmax >= 1) H[j][1] = -xi[j];
    for (int k = 1; k < dmax; ++k) H[j][k + 1] = -xi[j] * H[j][k] - k * H[j][k - 1];
    g += xi[j] * xi[j];
  }
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<double> s = 0;
  for (const auto& [I, a] : coeffs_) {
    double t = a;
    int m = 0;
    for (int j = 0; j < n_; ++j) {
      t *= H[j][I[j]];
      m += I[j];
    }
    s += t * ipow[m % 4];
  }
  return s * std::pow(2 * kPi, 0.5 * n_) * std::exp(-0.5 * g);
}

double GaussPoly::sum_abs_sqrt_fact() const {
  double s = 0;
  for (const auto& [I, a] : coeffs_) s += std::abs(a) * std::exp(0.5 * log_exponent_fact(I));
  return s;
}

double GaussPoly::sum_sq_fact() const {
  double s = 0;
  for (const auto& [I, a] : coeffs_) s += a * a * std::exp(log_exponent_fact(I));
  return s;
}

int GaussPoly::num_terms() const { return static_cast<int>(coeffs_.size()); }

double GaussPoly::sup_bound(double B) const {
  double s = 0;
  for (const auto& [I, a] : coeffs_) {
    double l = 0;
    for (int i : I) l += log_sup_power_gauss(i, B);
    s += std::abs(a) * std::exp(l);
  }
  return s;
}

GaussPoly make_product_spheres_poly(int n, int i) {
  if (n < 1 || i < 0 || i > n - 1) throw PreconditionError("product spheres: need 0 <= i <= n-1");
  GaussPoly q(n);
  const int nx = i + 1;
  auto e = [&](std::initializer_list<std::pair<int, int>> pw) {
    GaussPoly::Exponent I(n, 0);
    for (auto [j, p] : pw) I[j] += p;
    return I;
  };
  for (int k = 0; k < nx; ++k) {
    q.add(e({{k, 4}}), 1.0);
    q.add(e({{k, 2}}), -4.0);
    for (int j = 0; j < k; ++j) q.add(e({{j, 2}, {k, 2}}), 2.0);
  }
  for (int k = nx; k < n; ++k) q.add(e({{k, 2}}), 1.0);
  q.add(GaussPoly::Exponent(n, 0), 3.0);
  return q;
}

double eval_gauss_poly(const GaussPoly& q, std::span<const double> x) { return q(x); }

std::complex<double> fourier_gauss_poly(const GaussPoly& q, std::span<const double> xi) {
  return q.fourier(xi);
}

double TruncationBounds::sup() const { return std::exp(log_sup); }
double TruncationBounds::grad() const { return std::exp(log_grad); }
double TruncationBounds::l2() const { return std::exp(log_l2); }

TruncationBounds truncation_bounds(const GaussPoly& q, double c, double eta) {
  if (!(c > 0 && eta > 0)) throw PreconditionError("truncation_bounds: c and eta must be positive");
  const double a = c / (2 * eta);
  if (a < 1.0) throw PreconditionError("truncation_bounds: requires c/(2 eta) >= 1");
  const int n = q.n();
  const double la = std::log(a), ls = std::log(q.sum_abs_sqrt_fact());
  TruncationBounds b;
  b.ratio = a;
  b.log_sup = 0.5 * std::log(std::floor(n / 2.0 + 1)) + 0.5 * (n - 2) * la - 0.25 * a * a + ls;
  b.log_grad = 0.5 * std::log(std::floor(n / 2.0 + 3)) + 0.5 * n * la - 0.25 * a * a + ls;
  double l2sq = 0.5 * n * std::log(2 * kPi) + std::log(static_cast<double>(q.num_terms())) +
                std::log(q.sum_sq_fact()) - 0.5 * a * a;
  b.log_l2 = 0.5 * l2sq;
  return b;
}

double barrier_norm_bound(int n) { return std::sqrt(1.5) * std::pow(kPi, 0.25 * n) * (n + 6.0) * (n + 6.0); }

NormBoundResult barrier_norm_check(int n, int i) {
  if (n < 1 || n > 6 || i < 0 || i > n - 1) throw PreconditionError("barrier_norm_check: need 1 <= n <= 6, 0 <= i < n");
  const int dx = i + 1, dy = n - i - 1;
  QuadRule q = composite_gauss_width({0.0, 14.0}, 0.25, 10);
  auto area = [](int d) { return std::exp(log_sphere_area(d)); };
  double total = 0;
  for (std::size_t a = 0; a < q.nodes.size(); ++a) {
    double r = q.nodes[a];
    double wr = q.weights[a] * area(dx) * std::pow(r, dx - 1) * std::exp(-r * r);
    double base = (r * r - 2) * (r * r - 2) - 1;
    if (dy == 0) {
      total += wr * base * base;
      continue;
    }
    for (std::size_t b = 0; b < q.nodes.size(); ++b) {
      double s = q.nodes[b];
      double Q = base + s * s;
      total += wr * q.weights[b] * area(dy) * std::pow(s, dy - 1) * std::exp(-s * s) * Q * Q;
    }
  }
  NormBoundResult out{std::sqrt(total), barrier_norm_bound(n)};
  if (!(out.numeric_norm <= out.bound)) throw NumericalError("barrier_norm_check: norm exceeds the bound");
  return out;
}

}  // namespace nodal
