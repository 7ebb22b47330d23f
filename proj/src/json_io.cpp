#include "nodal/json_io.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nodal/errors.hpp"
#include "nodal/spectral_domain.hpp"

namespace nodal {

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw PreconditionError("not a number: " + s);
  }
  return j.get<double>();
}

json logreal_to_json(const LogReal& v) {
  if (v.is_zero()) return {{"log10", nullptr}, {"zero", true}};
  if (v.is_deep()) {
    const double ll = v.deep_ll();
    return {{"log10", nullptr},
            {"lnln_neg", ll},
            {"log10_neg_log10", (ll - std::log(std::numbers::ln10)) / std::numbers::ln10}};
  }
  return {{"log10", v.log10()}, {"ln", v.log()}};
}

LogReal logreal_from_json(const json& j) {
  if (j.contains("zero") && j.at("zero").get<bool>()) return LogReal::zero();
  if (j.contains("lnln_neg")) return LogReal::from_neg_loglog(j.at("lnln_neg").get<double>());
  if (j.contains("ln")) return LogReal::from_log(j.at("ln").get<double>());
  if (j.contains("log10") && j.at("log10").is_number())
    return LogReal::from_log(j.at("log10").get<double>() * std::numbers::ln10);
  throw PreconditionError("malformed LogReal record");
}

namespace {

json mean_std(double mean, double se) { return {{"mean", number_to_json(mean)}, {"stderr", number_to_json(se)}}; }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

std::vector<double> numbers_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from_json(x));
  return v;
}

double num(const json& j, const char* key) { return number_from_json(j.at(key)); }

json header(const char* kind) { return {{"schema_version", kSchemaVersion}, {"record", kind}}; }

void check_header(const json& j, const char* kind) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw PreconditionError("unsupported schema_version");
  if (j.value("record", std::string()) != kind) throw PreconditionError(std::string("expected a ") + kind + " record");
}

}  // namespace

ConstantsRecord constants_record(int n, double c, double d, double vol) {
  ConstantsRecord r;
  r.n = n;
  r.c = c;
  r.d = d;
  r.vol = vol;
  r.window_radius = 48 * std::sqrt(5.0) * n / c;
  auto rt = rho_theta_upper(SymbolBody::ball(n, d).nu(), d, n, r.window_radius);
  r.rho = rt.rho_bound;
  r.theta = rt.theta_bound;
  auto b = closed_form_bounds(n, c, d, vol);
  r.tau_closed = b.tau;
  r.p_lower = b.p_lower;
  r.c_lower = b.c_lower;
  if (c == 1.0 && d == 1.0) r.chain_checks = corollary_bound(n, Operator::laplace, vol).checks;
  return r;
}

CertRecord cert_record(const CertifyResult& r, const std::string& kind, int grid, double delta_param, double c,
                       double eta) {
  CertRecord o;
  o.kind = kind;
  o.n = r.n;
  o.i = r.i;
  o.grid = grid;
  o.delta_param = delta_param;
  o.c = c;
  o.eta = eta;
  o.sigma_type = r.cert.sigma_type;
  o.delta = r.pair.first;
  o.epsilon = r.pair.second;
  o.verdict = verdict_name(r.check.verdict);
  o.margin = r.check.margin;
  o.slack_value = r.check.slack_value;
  o.slack_grad = r.check.slack_grad;
  o.kw_cells = r.check.kw_cells;
  o.witness = r.check.witness;
  o.window_radius = r.cert.window_radius;
  o.l2_norm = r.cert.l2_norm;
  o.l2_bound = r.l2_bound;
  o.boundary_min = r.boundary_min;
  o.loops_inside = r.loops_inside;
  o.loops_touching = r.loops_touching;
  o.ambiguous_cells = r.ambiguous_cells;
  o.topology_ok = r.topology_ok;
  o.l2_ok = r.l2_ok;
  o.certified = r.certified();
  return o;
}

ImplementationRecord implementation_record(double L, double eta, const std::vector<double>& x0,
                                           const LocalModelResult& r) {
  return {L, eta, x0, r.conv_error, r.norm_sL, r.norm_f, r.window_radius, r.loops_in_ball};
}

SimulationRecord simulation_record(const TorusEnsemble& e, const SimulationSpec& spec, int trials,
                                   std::uint64_t seed, std::vector<TrialStats> per_trial) {
  SimulationRecord r;
  r.n = e.n;
  r.L = e.L;
  r.trials = trials;
  r.grid = spec.grid > 0 ? spec.grid : default_torus_grid(e);
  r.ball_grid = spec.ball_grid;
  r.c1_grid = spec.c1_grid;
  r.seed = seed;
  r.x0 = spec.x0;
  r.R = spec.R;
  r.N_L = e.N_L();
  r.K = e.K;
  const double norm = std::pow(e.L, -0.5 * e.n);
  std::vector<double> b0, sup, one, two;
  std::vector<std::vector<double>> grad(e.n);
  for (const auto& t : per_trial) {
    b0.push_back(t.b0 * norm);
    sup.push_back(t.sup_norm);
    for (int j = 0; j < e.n; ++j) grad[j].push_back(t.grad_sup[j]);
    one.push_back(t.loops_in_ball >= 1);
    two.push_back(t.loops_in_ball >= 2);
  }
  auto ms = [](std::vector<double> v) {
    auto m = summarize(std::move(v));
    return MeanStd{m.mean, m.stderr_};
  };
  r.b0_normalized = ms(b0);
  r.sup_norm = ms(sup);
  for (auto& g : grad) r.grad_sup.push_back(ms(g));
  if (e.n == 2) {
    r.p_one_loop = ms(one);
    r.p_two_loops = ms(two);
  }
  r.per_trial = std::move(per_trial);
  return r;
}

std::string simulation_csv(const SimulationRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,b0,n_loops_in_ball,sup_norm";
  for (int j = 1; j <= r.n; ++j) os << ",grad_sup_" << j;
  os << "\n";
  for (const auto& t : r.per_trial) {
    os << t.trial << ',' << t.b0 << ',' << t.loops_in_ball << ',' << t.sup_norm;
    for (double g : t.grad_sup) os << ',' << g;
    os << "\n";
  }
  return os.str();
}

WeylRecord weyl_record(int n, double L) {
  auto e = build_ensemble(n, L);
  WeylRecord w;
  w.n = n;
  w.L = L;
  w.N_L = e.N_L();
  w.ratio = e.N_L() / std::pow(L, 0.5 * n);
  w.limit = n == 1 ? 2.0 : std::numbers::pi;
  return w;
}

void to_json(json& j, const ChainCheck& v) {
  j = {{"name", v.name},
       {"lhs", number_to_json(v.lhs)},
       {"rhs", number_to_json(v.rhs)},
       {"holds", v.holds},
       {"hard", v.hard}};
}

void from_json(const json& j, ChainCheck& v) {
  v.name = j.at("name").get<std::string>();
  v.lhs = num(j, "lhs");
  v.rhs = num(j, "rhs");
  v.holds = j.at("holds").get<bool>();
  v.hard = j.at("hard").get<bool>();
}

void to_json(json& j, const Witness& v) {
  j = {{"z", numbers(v.z)},
       {"value", number_to_json(v.value)},
       {"grad_norm", number_to_json(v.grad_norm)},
       {"condition", v.condition}};
}

void from_json(const json& j, Witness& v) {
  v.z = numbers_from(j.at("z"));
  v.value = num(j, "value");
  v.grad_norm = num(j, "grad_norm");
  v.condition = j.at("condition").get<std::string>();
}

void to_json(json& j, const TrialStats& v) {
  j = {{"trial", v.trial},
       {"b0", v.b0},
       {"n_loops_in_ball", v.loops_in_ball},
       {"sup_norm", number_to_json(v.sup_norm)},
       {"grad_sup", numbers(v.grad_sup)}};
}

void from_json(const json& j, TrialStats& v) {
  v.trial = j.at("trial").get<std::uint64_t>();
  v.b0 = j.at("b0").get<int>();
  v.loops_in_ball = j.at("n_loops_in_ball").get<int>();
  v.sup_norm = num(j, "sup_norm");
  v.grad_sup = numbers_from(j.at("grad_sup"));
}

void to_json(json& j, const MeanStd& v) { j = mean_std(v.mean, v.stderr_); }

void from_json(const json& j, MeanStd& v) {
  v.mean = num(j, "mean");
  v.stderr_ = num(j, "stderr");
}

void to_json(json& j, const ConstantsRecord& v) {
  j = header("constants");
  j["config"] = {{"n", v.n}, {"c", v.c}, {"d", v.d}, {"vol", v.vol}};
  j["window_radius"] = v.window_radius;
  j["rho"] = logreal_to_json(v.rho);
  j["theta"] = logreal_to_json(v.theta);
  j["tau_closed"] = logreal_to_json(v.tau_closed);
  j["p_lower"] = logreal_to_json(v.p_lower);
  j["c_lower"] = logreal_to_json(v.c_lower);
  j["chain_checks"] = v.chain_checks;
}

void from_json(const json& j, ConstantsRecord& v) {
  check_header(j, "constants");
  const auto& c = j.at("config");
  v.n = c.at("n").get<int>();
  v.c = c.at("c").get<double>();
  v.d = c.at("d").get<double>();
  v.vol = c.at("vol").get<double>();
  v.window_radius = j.at("window_radius").get<double>();
  v.rho = logreal_from_json(j.at("rho"));
  v.theta = logreal_from_json(j.at("theta"));
  v.tau_closed = logreal_from_json(j.at("tau_closed"));
  v.p_lower = logreal_from_json(j.at("p_lower"));
  v.c_lower = logreal_from_json(j.at("c_lower"));
  v.chain_checks = j.at("chain_checks").get<std::vector<ChainCheck>>();
}

void to_json(json& j, const CertRecord& v) {
  j = header("certificate");
  j["config"] = {{"kind", v.kind}, {"n", v.n},   {"i", v.i},     {"grid", v.grid},
                 {"delta", v.delta_param}, {"c", v.c}, {"eta", v.eta}};
  j["sigma_type"] = v.sigma_type;
  j["pair"] = {{"delta", v.delta}, {"epsilon", v.epsilon}};
  j["verdict"] = v.verdict;
  j["margin"] = number_to_json(v.margin);
  j["slack_value"] = number_to_json(v.slack_value);
  j["slack_grad"] = number_to_json(v.slack_grad);
  j["kw_cells"] = v.kw_cells;
  j["witness"] = v.witness;
  j["window_radius"] = number_to_json(v.window_radius);
  j["l2_norm"] = number_to_json(v.l2_norm);
  j["l2_bound"] = number_to_json(v.l2_bound);
  j["boundary_min"] = number_to_json(v.boundary_min);
  j["loops_inside"] = v.loops_inside;
  j["loops_touching"] = v.loops_touching;
  j["ambiguous_cells"] = v.ambiguous_cells;
  j["topology_ok"] = v.topology_ok;
  j["l2_ok"] = v.l2_ok;
  j["certified"] = v.certified;
}

void from_json(const json& j, CertRecord& v) {
  check_header(j, "certificate");
  const auto& c = j.at("config");
  v.kind = c.at("kind").get<std::string>();
  v.n = c.at("n").get<int>();
  v.i = c.at("i").get<int>();
  v.grid = c.at("grid").get<int>();
  v.delta_param = c.at("delta").get<double>();
  v.c = c.at("c").get<double>();
  v.eta = c.at("eta").get<double>();
  v.sigma_type = j.at("sigma_type").get<std::string>();
  v.delta = j.at("pair").at("delta").get<double>();
  v.epsilon = j.at("pair").at("epsilon").get<double>();
  v.verdict = j.at("verdict").get<std::string>();
  v.margin = num(j, "margin");
  v.slack_value = num(j, "slack_value");
  v.slack_grad = num(j, "slack_grad");
  v.kw_cells = j.at("kw_cells").get<std::uint64_t>();
  v.witness = j.at("witness").get<std::vector<Witness>>();
  v.window_radius = num(j, "window_radius");
  v.l2_norm = num(j, "l2_norm");
  v.l2_bound = num(j, "l2_bound");
  v.boundary_min = num(j, "boundary_min");
  v.loops_inside = j.at("loops_inside").get<int>();
  v.loops_touching = j.at("loops_touching").get<int>();
  v.ambiguous_cells = j.at("ambiguous_cells").get<int>();
  v.topology_ok = j.at("topology_ok").get<bool>();
  v.l2_ok = j.at("l2_ok").get<bool>();
  v.certified = j.at("certified").get<bool>();
}

void to_json(json& j, const ImplementationRecord& v) {
  j = {{"L", v.L},
       {"eta", v.eta},
       {"x0", numbers(v.x0)},
       {"conv_error", number_to_json(v.conv_error)},
       {"norm_sL", number_to_json(v.norm_sL)},
       {"norm_f", number_to_json(v.norm_f)},
       {"window_radius", number_to_json(v.window_radius)},
       {"loops_in_ball", v.loops_in_ball}};
}

void from_json(const json& j, ImplementationRecord& v) {
  v.L = j.at("L").get<double>();
  v.eta = j.at("eta").get<double>();
  v.x0 = numbers_from(j.at("x0"));
  v.conv_error = num(j, "conv_error");
  v.norm_sL = num(j, "norm_sL");
  v.norm_f = num(j, "norm_f");
  v.window_radius = num(j, "window_radius");
  v.loops_in_ball = j.at("loops_in_ball").get<int>();
}

void to_json(json& j, const LocalModelRecord& v) {
  j = header("localmodel");
  j["certificate"] = v.cert;
  j["implementations"] = v.implementations;
}

void from_json(const json& j, LocalModelRecord& v) {
  check_header(j, "localmodel");
  v.cert = j.at("certificate").get<CertRecord>();
  v.implementations = j.at("implementations").get<std::vector<ImplementationRecord>>();
}

void to_json(json& j, const SimulationRecord& v) {
  j = header("simulation");
  j["config"] = {{"n", v.n},       {"L", v.L},   {"trials", v.trials}, {"grid", v.grid},
                 {"ball_grid", v.ball_grid}, {"c1_grid", v.c1_grid}, {"seed", v.seed},
                 {"x0", numbers(v.x0)},      {"R", v.R}};
  j["N_L"] = v.N_L;
  j["K"] = v.K;
  j["per_trial"] = v.per_trial;
  json a = v.b0_normalized;
  a["sup_norm"] = v.sup_norm;
  a["grad_sup"] = v.grad_sup;
  if (v.n == 2) {
    a["p_one_loop"] = v.p_one_loop;
    a["p_two_loops"] = v.p_two_loops;
  }
  j["aggregates"] = a;
}

void from_json(const json& j, SimulationRecord& v) {
  check_header(j, "simulation");
  const auto& c = j.at("config");
  v.n = c.at("n").get<int>();
  v.L = c.at("L").get<double>();
  v.trials = c.at("trials").get<int>();
  v.grid = c.at("grid").get<int>();
  v.ball_grid = c.at("ball_grid").get<int>();
  v.c1_grid = c.at("c1_grid").get<int>();
  v.seed = c.at("seed").get<std::uint64_t>();
  v.x0 = numbers_from(c.at("x0"));
  v.R = c.at("R").get<double>();
  v.N_L = j.at("N_L").get<std::uint64_t>();
  v.K = j.at("K").get<int>();
  v.per_trial = j.at("per_trial").get<std::vector<TrialStats>>();
  const auto& a = j.at("aggregates");
  v.b0_normalized = a.get<MeanStd>();
  v.sup_norm = a.at("sup_norm").get<MeanStd>();
  v.grad_sup = a.at("grad_sup").get<std::vector<MeanStd>>();
  v.p_one_loop = a.contains("p_one_loop") ? a.at("p_one_loop").get<MeanStd>() : MeanStd{};
  v.p_two_loops = a.contains("p_two_loops") ? a.at("p_two_loops").get<MeanStd>() : MeanStd{};
}

void to_json(json& j, const WeylRecord& v) {
  j = header("weyl");
  j["config"] = {{"n", v.n}, {"L", v.L}};
  j["N_L"] = v.N_L;
  j["ratio"] = v.ratio;
  j["limit"] = v.limit;
}

void from_json(const json& j, WeylRecord& v) {
  check_header(j, "weyl");
  v.n = j.at("config").at("n").get<int>();
  v.L = j.at("config").at("L").get<double>();
  v.N_L = j.at("N_L").get<std::uint64_t>();
  v.ratio = j.at("ratio").get<double>();
  v.limit = j.at("limit").get<double>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace nodal
