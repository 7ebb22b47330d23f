#pragma once

#include <string>
#include <vector>

#include "nodal/contour.hpp"
#include "nodal/grid_field.hpp"
#include "nodal/local_model.hpp"
#include "nodal/transversality.hpp"

namespace nodal {

struct CertifyResult {
  int n = 0, i = 0;
  std::pair<double, double> pair;
  PairCheck check;
  RegularPairCert cert;
  double l2_bound = 0.0;     // closed-form L2 bound the norm is compared with
  double boundary_min = 0.0; // min |f| sampled on the window boundary (n = 2)
  int loops_inside = -1;     // n = 2 only
  int loops_touching = -1;
  int ambiguous_cells = 0;
  std::vector<Loop> loops;
  bool topology_ok = true;
  bool l2_ok = true;
  bool certified() const { return check.verdict == Verdict::certified && topology_ok && l2_ok; }
};

// q_i sampled with exact value, gradient and Hessian on a grid over the ball of
// radius sqrt 5 (n <= 3); Lipschitz bounds from the grid Hessian plus a
// termwise bound on third derivatives.
GridField gauss_poly_grid(const GaussPoly& q, double radius, int nodes);

std::string sigma_type_name(int n, int i);

// Pair (delta e^{-5/2}, e^{-5/2} (2 - delta) / 2) for q_i on the ball of radius sqrt 5.
CertifyResult barrier_certify(int n, int i, double delta, int nodes);

// Pair (e^{-5/2} / 4, eta e^{-5/2} / sqrt 2) for q_{i,c} on W_eta, n = 2.
CertifyResult truncated_certify(int n, int i, double c, double eta, int nodes);
GridField truncated_grid(int i, double c, double eta, int nodes, double* l2_norm = nullptr);

// Topology report for a field on an n = 2 grid: closed loops strictly inside the window.
void attach_topology(CertifyResult& r, const GridField& f, int expected_loops);

}  // namespace nodal
