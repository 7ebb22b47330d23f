#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nodal/certify.hpp"
#include "nodal/constants.hpp"
#include "nodal/estimators.hpp"
#include "nodal/log_real.hpp"

namespace nodal {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// LogReal forms: {log10, ln} (shallow), {log10: null, lnln_neg, log10_neg_log10} (deep),
// {log10: null, zero: true}. Non-finite doubles are written as "inf", "-inf", "nan".
json logreal_to_json(const LogReal& v);
LogReal logreal_from_json(const json& j);
json number_to_json(double v);
double number_from_json(const json& j);

struct ConstantsRecord {
  int n = 0;
  double c = 1.0, d = 1.0, vol = 0.0;
  double window_radius = 0.0;  // R = 48 sqrt5 n / c feeding rho and theta
  LogReal rho, theta, tau_closed, p_lower, c_lower;
  std::vector<ChainCheck> chain_checks;  // only for c = d = 1
  bool operator==(const ConstantsRecord&) const = default;
};
ConstantsRecord constants_record(int n, double c, double d, double vol);

struct CertRecord {
  std::string kind;  // "barrier", "truncated", "field"
  int n = 0, i = 0, grid = 0;
  double delta_param = 0.0, c = 0.0, eta = 0.0;
  std::string sigma_type;
  double delta = 0.0, epsilon = 0.0;
  std::string verdict;
  double margin = 0.0, slack_value = 0.0, slack_grad = 0.0;
  std::uint64_t kw_cells = 0;
  std::vector<Witness> witness;
  double window_radius = 0.0, l2_norm = 0.0, l2_bound = 0.0, boundary_min = 0.0;
  int loops_inside = -1, loops_touching = -1, ambiguous_cells = 0;
  bool topology_ok = true, l2_ok = true, certified = false;
  bool operator==(const CertRecord&) const = default;
};
CertRecord cert_record(const CertifyResult& r, const std::string& kind, int grid, double delta_param, double c,
                       double eta);

struct ImplementationRecord {
  double L = 0.0, eta = 0.0;
  std::vector<double> x0;
  double conv_error = 0.0, norm_sL = 0.0, norm_f = 0.0, window_radius = 0.0;
  int loops_in_ball = -1;
  bool operator==(const ImplementationRecord&) const = default;
};
ImplementationRecord implementation_record(double L, double eta, const std::vector<double>& x0,
                                           const LocalModelResult& r);

struct LocalModelRecord {
  CertRecord cert;
  std::vector<ImplementationRecord> implementations;
  bool operator==(const LocalModelRecord&) const = default;
};

struct MeanStd {
  double mean = 0.0, stderr_ = 0.0;
  bool operator==(const MeanStd&) const = default;
};

struct SimulationRecord {
  int n = 0;
  double L = 0.0;
  int trials = 0, grid = 0, ball_grid = 0, c1_grid = 0;
  std::uint64_t seed = 0;
  std::vector<double> x0;
  double R = 0.0;
  std::uint64_t N_L = 0;
  int K = 0;
  std::vector<TrialStats> per_trial;
  MeanStd b0_normalized, sup_norm, p_one_loop, p_two_loops;
  std::vector<MeanStd> grad_sup;
  bool operator==(const SimulationRecord&) const = default;
};
SimulationRecord simulation_record(const TorusEnsemble& e, const SimulationSpec& spec, int trials,
                                   std::uint64_t seed, std::vector<TrialStats> per_trial);
std::string simulation_csv(const SimulationRecord& r);

struct WeylRecord {
  int n = 0;
  double L = 0.0;
  std::uint64_t N_L = 0;
  double ratio = 0.0;  // N_L / L^{n/2}
  double limit = 0.0;  // volume of the unit ball
  bool operator==(const WeylRecord&) const = default;
};
WeylRecord weyl_record(int n, double L);

void to_json(json& j, const ChainCheck& v);
void from_json(const json& j, ChainCheck& v);
void to_json(json& j, const Witness& v);
void from_json(const json& j, Witness& v);
void to_json(json& j, const TrialStats& v);
void from_json(const json& j, TrialStats& v);
void to_json(json& j, const MeanStd& v);
void from_json(const json& j, MeanStd& v);
void to_json(json& j, const ConstantsRecord& v);
void from_json(const json& j, ConstantsRecord& v);
void to_json(json& j, const CertRecord& v);
void from_json(const json& j, CertRecord& v);
void to_json(json& j, const ImplementationRecord& v);
void from_json(const json& j, ImplementationRecord& v);
void to_json(json& j, const LocalModelRecord& v);
void from_json(const json& j, LocalModelRecord& v);
void to_json(json& j, const SimulationRecord& v);
void from_json(const json& j, SimulationRecord& v);
void to_json(json& j, const WeylRecord& v);
void from_json(const json& j, WeylRecord& v);

// Pretty-printed with a trailing newline; identical records give identical bytes.
std::string dump(const json& j);

}  // namespace nodal
