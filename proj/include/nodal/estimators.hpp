#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nodal/contour.hpp"
#include "nodal/torus.hpp"

namespace nodal {

struct BallHit {
  std::vector<double> center;
  double radius = 0.0;
  int loops_inside = 0;
  std::string type;  // "none", "one_loop", "two_loops"
};

struct NodalSummary {
  int b0 = 0;
  std::vector<Loop> loops;     // n = 2
  std::vector<double> zeros;   // n = 1
  int ambiguous_cells = 0;
  int zero_nodes = 0;
  int grid_used = 0;
  int unresolved_critical = 0;
  std::vector<BallHit> ball_hits;
};

// Marching squares on an analytic section (n = 2). Critical points of s are
// located by Newton from cells where both gradient components change sign; while
// one has |s| < 2 lambda h^2 (lambda: largest Hessian eigenvalue modulus) the grid
// could misjoin the level set there, so the spacing is halved, at most
// max_doublings times and never beyond 4096 nodes per axis.
struct SectionContour {
  ContourResult contour;
  int grid = 0;
  int doublings = 0;
  int unresolved = 0;  // near-level critical points left at the finest grid
};
SectionContour section_contour(const TorusEnsemble& e, const RandomSection& s, double x0, double y0, double span,
                               int nodes, bool periodic, int max_doublings = 3);

// Zero set of s on the full torus: G samples per axis (periodic).
NodalSummary nodal_extract(const TorusEnsemble& e, const RandomSection& s, int grid);
// Zero set from periodic samples (n = 2, G x G, spacing 2 pi / G).
NodalSummary nodal_extract(const std::vector<double>& values, int grid);

// Default full-torus resolution: at least 8 nodes per shortest wavelength, 256 minimum.
int default_torus_grid(const TorusEnsemble& e);
void check_resolution(const TorusEnsemble& e, int grid);

struct MeanEstimate {
  double mean = 0.0, stderr_ = 0.0;
  std::vector<double> samples;
};
MeanEstimate summarize(std::vector<double> samples);

// b0 / L^{n/2} per trial.
MeanEstimate estimate_b0(const TorusEnsemble& e, int trials, int grid, std::uint64_t seed, int threads = 0);
// 2 sqrt(sum_{k<=K} k^2 / (K + 1/2)): expected zero count of the n = 1 ensemble
double kac_rice_zeros(int K);

enum class SigmaType { one_loop, two_loops };
SigmaType parse_sigma_type(const std::string& s);
const char* sigma_type_label(SigmaType t);

struct ProbEstimate {
  double p_hat = 0.0, stderr_ = 0.0;
  std::vector<int> loops_in_ball;  // per trial
};
// Fraction of sections with at least one / two closed nodal loops strictly inside B(x0, R / sqrt L).
ProbEstimate estimate_prob_sigma(const TorusEnsemble& e, const std::vector<double>& x0, double R, SigmaType type,
                                 int trials, int grid, std::uint64_t seed, int threads = 0);
// Closed loops strictly inside the ball, local grid of `grid` nodes per axis over its bounding box.
int loops_in_ball(const TorusEnsemble& e, const RandomSection& s, const std::vector<double>& x0, double radius,
                  int grid, std::vector<Loop>* keep = nullptr);

struct C1Estimate {
  MeanEstimate sup_norm;                // L^{-n/4} sup |s|
  std::vector<MeanEstimate> grad_sup;   // L^{-(n+2)/4} sup |d_j s|, j = 1..n
};
C1Estimate empirical_c1(const TorusEnsemble& e, const std::vector<double>& x0, double R, int trials,
                        std::uint64_t seed, int grid = 65, int threads = 0);

// One simulated section: b0 on the full torus, closed loops inside B(x0, R / sqrt L)
// (n = 2; -1 for n = 1) and the normalized C1 sups over that ball.
struct TrialStats {
  std::uint64_t trial = 0;
  int b0 = 0;
  int loops_in_ball = -1;
  double sup_norm = 0.0;
  std::vector<double> grad_sup;
  bool operator==(const TrialStats&) const = default;
};
struct SimulationSpec {
  int grid = 0;  // full-torus grid; 0 picks default_torus_grid
  std::vector<double> x0;
  double R = 10.0;
  int ball_grid = 128;
  int c1_grid = 65;
};
TrialStats simulate_trial(const TorusEnsemble& e, const RandomSection& s, const SimulationSpec& spec,
                          std::vector<Loop>* torus_loops = nullptr, std::vector<Loop>* ball_loops = nullptr);
std::vector<TrialStats> simulate(const TorusEnsemble& e, const SimulationSpec& spec, int trials, std::uint64_t seed,
                                 int threads = 0);

struct LocalModelResult {
  std::vector<double> coeffs;  // projection onto U_L, same layout as RandomSection
  double conv_error = 0.0;     // sup over |z| <= R of |L^{-n/4} s_L(x0 + z / sqrt L) - f(z)|
  double norm_sL = 0.0, norm_f = 0.0;
  double window_radius = 0.0;  // R in rescaled units
  int loops_in_ball = -1;      // closed nodal loops of s_L inside B(x0, R / sqrt L)
  std::vector<Loop> loops;
};
struct LocalModelSpec {
  int i = 0;
  double c = 1.0, eta = 0.125;
  int dft_grid = 512;   // torus quadrature nodes per axis
  int check_grid = 129; // nodes per axis for conv_error and loops
};
// Implements f = q_{i,c} (n = 2) around x0: L^{n/4} chi(x - x0) f(sqrt L (x - x0)) projected onto U_L.
LocalModelResult implement_local_model(const TorusEnsemble& e, const std::vector<double>& x0,
                                       const LocalModelSpec& spec);

}  // namespace nodal
