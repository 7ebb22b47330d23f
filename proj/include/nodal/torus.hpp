#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nodal/grid_field.hpp"

namespace nodal {

// Eigenfunctions of the flat Laplacian on (R / 2 pi Z)^n with eigenvalue |k|^2 <= L.
// Real orthonormal basis: (2 pi)^{-n/2}, and sqrt2 (2 pi)^{-n/2} cos<k,x>, sin<k,x>
// for one representative k of each pair {k, -k}.
struct TorusEnsemble {
  int n = 0;
  double L = 0.0;
  int K = 0;                              // max |k_j|
  std::vector<std::array<int, 2>> half;   // representatives (k2 unused when n = 1)
  std::size_t N_L() const { return 1 + 2 * half.size(); }
  std::vector<std::array<int, 2>> modes() const;  // all k, closed under k -> -k
  double c0() const;  // constant basis normalization
  double cn() const;  // cos / sin basis normalization
};

TorusEnsemble build_ensemble(int n, double L);

// coefficients: [constant, a_1, b_1, a_2, b_2, ...] for the cos / sin pair of half[j]
struct RandomSection {
  std::vector<double> coeffs;
  std::uint64_t seed = 0, trial = 0;
  RandomSection negated() const;
};

// Coordinates normal with variance 1/2, from the stream derive_seed(seed, trial).
RandomSection sample_section(const TorusEnsemble& e, std::uint64_t seed, std::uint64_t trial = 0);

// Values and gradients on the tensor grid xs x ys (n = 2; ys ignored for n = 1),
// row-major [i * ny + j].
struct SectionGrid {
  int nx = 0, ny = 0;
  std::vector<double> v, gx, gy;
};
SectionGrid eval_section_tensor(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& xs,
                                const std::vector<double>& ys, bool with_gradient = true);
double eval_section_point(const TorusEnsemble& e, const RandomSection& s, const double* x, double* grad = nullptr);
// Hessian entries (xx, xy, yy) at x, n = 2
void eval_section_hessian(const TorusEnsemble& e, const RandomSection& s, const double* x, double* hess);

// Sup bounds sum |coeff| |k| and sum |coeff| |k|^2 (Lipschitz bounds of s and ds).
std::array<double, 2> section_lipschitz(const TorusEnsemble& e, const RandomSection& s);

// Section sampled on the box [lo, lo + (nodes - 1) h]^n as a GridField with box window.
GridField eval_section(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& lo, double h,
                       int nodes);

// e_L(x, y) = (2 pi)^{-n} sum_k cos<k, x - y>
double spectral_kernel(const TorusEnsemble& e, const double* x, const double* y);

}  // namespace nodal
