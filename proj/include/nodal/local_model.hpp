#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace nodal {

// H_k with H_k(x) e^{-x^2/2} = (d/dx)^k e^{-x^2/2}; coeffs[p] multiplies x^p.
struct HermitePoly {
  int k = 0;
  std::vector<double> coeffs;
  double operator()(double x) const;
};
HermitePoly hermite(int k);

// q(x) = Q(x) exp(-|x|^2 / 2) with Q = sum a_I x^I.
class GaussPoly {
 public:
  using Exponent = std::vector<int>;

  explicit GaussPoly(int n) : n_(n) {}

  int n() const { return n_; }
  const std::map<Exponent, double>& coeffs() const { return coeffs_; }
  void add(const Exponent& I, double a);
  int degree() const;

  double poly(std::span<const double> x) const;
  double operator()(std::span<const double> x) const;
  // partial derivative of q in coordinate k (0-based), again a GaussPoly
  GaussPoly derivative(int k) const;
  std::complex<double> fourier(std::span<const double> xi) const;

  double sum_abs_sqrt_fact() const;  // sum |a_I| sqrt(I!)
  double sum_sq_fact() const;        // sum a_I^2 I!
  int num_terms() const;             // N(Q)

  // sup of |q| over the box [-B, B]^n, bounded termwise by
  // |a_I| prod_j sup_{|t| <= B} |t|^{i_j} e^{-t^2/2}
  double sup_bound(double B = 1e300) const;

 private:
  int n_;
  std::map<Exponent, double> coeffs_;
};

// ((|x|^2 - 2)^2 + |y|^2 - 1) e^{-(|x|^2+|y|^2)/2}, x in R^{i+1}, y in R^{n-i-1}
GaussPoly make_product_spheres_poly(int n, int i);

double eval_gauss_poly(const GaussPoly& q, std::span<const double> x);
std::complex<double> fourier_gauss_poly(const GaussPoly& q, std::span<const double> xi);

struct TruncationBounds {
  double ratio = 0.0;     // c / (2 eta)
  double log_sup = 0.0;   // ln of the sup-norm bound
  double log_grad = 0.0;  // ln of the per-coordinate gradient bound
  double log_l2 = 0.0;    // ln of the L2 bound (square root of the displayed squared bound)
  double sup() const;
  double grad() const;
  double l2() const;
};
TruncationBounds truncation_bounds(const GaussPoly& q, double c, double eta);

struct NormBoundResult {
  double numeric_norm = 0.0;
  double bound = 0.0;
};
// ||q_i||_{L2} through the radial split (|x|, |y|); throws if above the bound
NormBoundResult barrier_norm_check(int n, int i);
double barrier_norm_bound(int n);

}  // namespace nodal
