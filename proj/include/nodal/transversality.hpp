#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nodal/grid_field.hpp"

namespace nodal {

enum class Verdict { certified, refuted, inconclusive };
const char* verdict_name(Verdict v);

struct Witness {
  std::vector<double> z;
  double value = 0.0;
  double grad_norm = 0.0;
  std::string condition;  // "boundary" (|f| > delta near the edge) or "gradient"
  bool operator==(const Witness&) const = default;
};

struct PairCheck {
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;          // smallest slacked excess over delta / epsilon (certified only)
  double slack_value = 0.0;     // lip_value h sqrt(n) / 2
  double slack_grad = 0.0;      // lip_grad h sqrt(n) / 2
  std::size_t kw_cells = 0;     // nodes whose cells make up K_W
  std::vector<Witness> witness; // refuted: the violating node; inconclusive: the weakest node
};

// Three-valued test of (delta, epsilon) membership from grid samples plus Lipschitz slack.
PairCheck check_pair(const GridField& f, double delta, double epsilon);

struct FrontierPoint {
  double delta = 0.0;
  double eps_max = 0.0;  // largest certified epsilon found; 0 when none
  bool any = false;      // some epsilon >= 0 certified at this delta
};
std::vector<FrontierPoint> pair_frontier(const GridField& f, const std::vector<double>& deltas, int iterations = 12);

struct RegularPairCert {
  double window_radius = 0.0;
  double l2_norm = 0.0;
  std::vector<std::pair<double, double>> pairs;
  double margin = 0.0;
  std::string sigma_type;
};

// Closed loops of the zero set lying strictly inside the window (n = 2, ball windows).
struct LoopCount {
  int inside = 0;
  int touching = 0;  // components not strictly inside
  int ambiguous_cells = 0;
};
LoopCount count_window_loops(const GridField& f, const std::vector<double>& values);

struct StabilityReport {
  int trials = 0;
  int base_loops = 0;
  double scale = 1.0;  // multiplier applied on top of the admissible size
  double sup_sigma = 0.0, sup_dsigma = 0.0;
  std::vector<int> loops;     // per trial
  std::vector<int> failures;  // trial indices with a changed count
};

// Random low-degree trigonometric perturbations sigma with sup|sigma| < delta and
// sup|d sigma| < epsilon (times `scale`), compared by loop count inside the window.
StabilityReport perturbation_stability(const GridField& f, std::pair<double, double> pair, int trials,
                                       std::uint64_t seed, double scale = 1.0);

}  // namespace nodal
