#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nodal/acceptance.hpp"
#include "nodal/certify.hpp"
#include "nodal/errors.hpp"
#include "nodal/estimators.hpp"
#include "nodal/io.hpp"
#include "nodal/json_io.hpp"
#include "nodal/parallel.hpp"
#include "nodal/svg.hpp"

using namespace nodal;

namespace {

constexpr int kExitCertFail = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitUsage = 64;
constexpr double kPi = std::numbers::pi;

// JSON goes to --out when given, else to stdout
void emit(const json& j, const std::string& out) {
  const std::string text = dump(j);
  if (out.empty())
    std::cout << text;
  else
    atomic_write(out, text);
}

std::string window_svg(const CertifyResult& r) {
  const double R = r.cert.window_radius, m = 1.05 * R;
  return render_svg(r.loops, -m, -m, 2 * m, {{{0.0, 0.0}, R}});
}

void print_cert(const CertRecord& c) {
  std::printf("%s n=%d i=%d: pair (%.6g, %.6g) %s, margin %.3g, K_W cells %llu\n", c.kind.c_str(), c.n, c.i,
              c.delta, c.epsilon, c.verdict.c_str(), c.margin, static_cast<unsigned long long>(c.kw_cells));
  if (c.loops_inside >= 0)
    std::printf("  loops inside %d, touching %d, topology %s\n", c.loops_inside, c.loops_touching,
                c.topology_ok ? "ok" : "FAILED");
  if (c.l2_bound > 0)
    std::printf("  L2 norm %.6g <= %.6g: %s\n", c.l2_norm, c.l2_bound, c.l2_ok ? "yes" : "NO");
  for (const auto& w : c.witness) {
    std::printf("  witness (%s) at", w.condition.c_str());
    for (double z : w.z) std::printf(" %.6g", z);
    std::printf(": value %.6g, gradient norm %.6g\n", w.value, w.grad_norm);
  }
  std::printf("  %s\n", c.certified ? "CERTIFIED" : "NOT CERTIFIED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nodal-lab: transversality certificates, constants and torus nodal statistics"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (default: NODAL_LAB_THREADS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  // constants
  auto* cons = app.add_subcommand("constants", "explicit constants of the lower-bound chain");
  int c_n = 2;
  double c_c = 1.0, c_d = 1.0, c_vol = 0.0;
  bool c_json = false;
  std::string c_out;
  cons->add_option("--n", c_n, "dimension")->check(CLI::Range(1, 64));
  cons->add_option("--c", c_c, "inner symbol radius")->check(CLI::PositiveNumber);
  cons->add_option("--d", c_d, "outer symbol radius")->check(CLI::PositiveNumber);
  cons->add_option("--vol", c_vol, "volume of M (default (2 pi)^n)")->check(CLI::PositiveNumber);
  cons->add_flag("--json", c_json, "JSON on stdout");
  cons->add_option("--out", c_out, "write JSON to this file");

  // localmodel
  auto* lm = app.add_subcommand("localmodel", "certify q_{i,c} on W_eta and implement it on the torus");
  int lm_n = 2, lm_i = 0, lm_grid = 512;
  double lm_c = 1.0, lm_eta = 1.0 / 96, lm_impl_eta = LocalModelSpec{}.eta;
  std::vector<double> lm_L, lm_x0{kPi, kPi};
  bool lm_json = false;
  std::string lm_svg, lm_out;
  lm->add_option("--n", lm_n, "dimension (2)");
  lm->add_option("--i", lm_i, "sphere index");
  lm->add_option("--c", lm_c, "cutoff radius")->check(CLI::PositiveNumber);
  lm->add_option("--eta", lm_eta, "scale, at most c / (48 n)")->check(CLI::PositiveNumber);
  lm->add_option("--grid", lm_grid, "nodes per axis over W_eta")->check(CLI::Range(16, 8192));
  lm->add_option("--L", lm_L, "torus cutoffs to implement the model at (window radius sqrt5 / eta, rescaled)");
  lm->add_option("--impl-eta", lm_impl_eta, "scale used for the torus implementation (its window must fit a chart)")
      ->check(CLI::PositiveNumber);
  lm->add_option("--x0", lm_x0, "torus centre")->expected(2);
  lm->add_option("--svg", lm_svg, "SVG of the nodal loops in W_eta");
  lm->add_flag("--json", lm_json, "JSON on stdout");
  lm->add_option("--out", lm_out, "write JSON to this file");

  // certify
  auto* cert = app.add_subcommand("certify", "grid certification of a transversality pair");
  std::string ce_builtin, ce_field, ce_svg, ce_out;
  int ce_n = 2, ce_i = 0, ce_grid = 1024, ce_expect = -1;
  double ce_delta = 0.5, ce_eps = 0.0, ce_c = 1.0, ce_eta = 1.0 / 96;
  bool ce_json = false;
  auto* o_builtin = cert->add_option("--builtin", ce_builtin, "barrier or truncated")
                        ->check(CLI::IsMember({"barrier", "truncated"}));
  auto* o_field = cert->add_option("--field", ce_field, "GridField file (binary or JSON)")->check(CLI::ExistingFile);
  o_builtin->excludes(o_field);
  cert->add_option("--n", ce_n, "dimension");
  cert->add_option("--i", ce_i, "sphere index");
  cert->add_option("--delta", ce_delta, "barrier: delta parameter; field: delta");
  auto* o_eps = cert->add_option("--eps", ce_eps, "field: epsilon");
  o_eps->needs(o_field);
  cert->add_option("--c", ce_c, "truncated: cutoff radius")->check(CLI::PositiveNumber);
  cert->add_option("--eta", ce_eta, "truncated: scale")->check(CLI::PositiveNumber);
  cert->add_option("--grid", ce_grid, "nodes per axis")->check(CLI::Range(16, 8192));
  cert->add_option("--expect-loops", ce_expect, "field, n = 2: required number of loops inside the window");
  cert->add_option("--svg", ce_svg, "SVG of the nodal loops (n = 2)");
  cert->add_flag("--json", ce_json, "JSON on stdout");
  cert->add_option("--out", ce_out, "write JSON to this file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo over the Gaussian torus ensemble");
  int s_n = 2, s_trials = 100, s_grid = 0, s_ball_grid = 128, s_c1_grid = 65, s_svg_count = 4;
  double s_L = 400, s_R = 10;
  std::uint64_t s_seed = 7;
  std::vector<double> s_x0;
  std::string s_out, s_csv, s_svg_dir;
  sim->add_option("--n", s_n, "dimension (1 or 2)")->check(CLI::Range(1, 2));
  sim->add_option("--L", s_L, "spectral cutoff")->check(CLI::Range(1.0, 1e7));
  sim->add_option("--trials", s_trials, "number of sections")->check(CLI::PositiveNumber);
  sim->add_option("--grid", s_grid, "full-torus nodes per axis (default: 16 sqrt L, at least 256)");
  sim->add_option("--seed", s_seed, "master seed");
  sim->add_option("--R", s_R, "ball radius in rescaled units (ball B(x0, R / sqrt L))")->check(CLI::PositiveNumber);
  sim->add_option("--x0", s_x0, "ball centre (default 1 in each coordinate)");
  sim->add_option("--ball-grid", s_ball_grid, "nodes per axis over the ball")->check(CLI::Range(8, 4096));
  sim->add_option("--c1-grid", s_c1_grid, "nodes per axis for the C1 sups")->check(CLI::Range(3, 4096));
  sim->add_option("--out", s_out, "results JSON (default stdout)");
  sim->add_option("--csv", s_csv, "per-trial CSV");
  sim->add_option("--svg-dir", s_svg_dir, "SVGs of the first sections (n = 2)");
  sim->add_option("--svg-count", s_svg_count, "number of SVGs")->check(CLI::NonNegativeNumber);

  // weyl
  auto* wy = app.add_subcommand("weyl", "lattice count N_L");
  int w_n = 2;
  double w_L = 1e4;
  bool w_json = false;
  wy->add_option("--n", w_n, "dimension (1 or 2)")->check(CLI::Range(1, 2));
  wy->add_option("--L", w_L, "cutoff")->check(CLI::Range(1.0, 1e9));
  wy->add_flag("--json", w_json, "JSON on stdout");

  // report
  auto* rep = app.add_subcommand("report", "run the acceptance suite and print a markdown table");
  std::vector<int> r_ids;
  std::string r_out;
  rep->add_option("--criteria", r_ids, "subset of criterion ids")->check(CLI::Range(1, kAcceptanceCount));
  rep->add_option("--out", r_out, "also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (threads > 0) set_default_threads(threads);

    if (*cons) {
      const double vol = c_vol > 0 ? c_vol : std::pow(2 * kPi, c_n);
      auto r = constants_record(c_n, c_c, c_d, vol);
      if (c_json) emit(r, "");
      if (!c_out.empty()) emit(r, c_out);
      if (!c_json) {
        std::printf("n=%d c=%g d=%g vol=%g (window radius %g)\n", r.n, r.c, r.d, r.vol, r.window_radius);
        auto show = [](const char* name, const LogReal& v) { std::printf("  %-9s %s\n", name, v.str().c_str()); };
        show("rho", r.rho);
        show("theta", r.theta);
        show("tau", r.tau_closed);
        show("p_lower", r.p_lower);
        show("c_lower", r.c_lower);
        for (const auto& c : r.chain_checks)
          std::printf("  [%s] %s\n", c.holds ? "holds" : "fails", c.name.c_str());
      }
      return 0;
    }

    if (*lm) {
      if (lm_n != 2) throw PreconditionError("localmodel: n = 2 only");
      auto r = truncated_certify(lm_n, lm_i, lm_c, lm_eta, lm_grid);
      LocalModelRecord rec{cert_record(r, "truncated", lm_grid, 0.0, lm_c, lm_eta), {}};
      for (double L : lm_L) {
        LocalModelSpec spec;
        spec.i = lm_i;
        spec.c = lm_c;
        spec.eta = lm_impl_eta;
        rec.implementations.push_back(
            implementation_record(L, lm_impl_eta, lm_x0, implement_local_model(build_ensemble(2, L), lm_x0, spec)));
      }
      if (!lm_svg.empty()) atomic_write(lm_svg, window_svg(r));
      if (lm_json) emit(rec, "");
      if (!lm_out.empty()) emit(rec, lm_out);
      if (!lm_json) {
        print_cert(rec.cert);
        for (const auto& m : rec.implementations)
          std::printf("  L=%g: conv_error %.3g, |s_L| %.6g, |f| %.6g, loops in ball %d\n", m.L, m.conv_error,
                      m.norm_sL, m.norm_f, m.loops_in_ball);
      }
      return rec.cert.certified ? 0 : kExitCertFail;
    }

    if (*cert) {
      CertifyResult r;
      CertRecord rec;
      if (ce_builtin == "barrier") {
        r = barrier_certify(ce_n, ce_i, ce_delta, ce_grid);
        rec = cert_record(r, "barrier", ce_grid, ce_delta, 0.0, 0.0);
      } else if (ce_builtin == "truncated") {
        r = truncated_certify(ce_n, ce_i, ce_c, ce_eta, ce_grid);
        rec = cert_record(r, "truncated", ce_grid, 0.0, ce_c, ce_eta);
      } else if (!ce_field.empty()) {
        GridField f = read_grid_file(ce_field);
        r.n = f.n;
        r.i = -1;
        r.pair = {ce_delta, ce_eps};
        r.check = check_pair(f, ce_delta, ce_eps);
        r.cert.window_radius = f.window.sup_radius();
        r.cert.pairs = {r.pair};
        r.cert.margin = r.check.margin;
        if (f.n == 2) {
          attach_topology(r, f, ce_expect);
          if (ce_expect < 0) r.topology_ok = true;
        }
        rec = cert_record(r, "field", f.dims.empty() ? 0 : f.dims[0], ce_delta, 0.0, 0.0);
      } else {
        throw CLI::RequiredError("certify needs --builtin or --field");
      }
      if (!ce_svg.empty() && r.n == 2) atomic_write(ce_svg, window_svg(r));
      if (ce_json) emit(rec, "");
      if (!ce_out.empty()) emit(rec, ce_out);
      if (!ce_json) print_cert(rec);
      return rec.certified ? 0 : kExitCertFail;
    }

    if (*sim) {
      auto e = build_ensemble(s_n, s_L);
      SimulationSpec spec;
      spec.grid = s_grid;
      spec.x0 = s_x0.empty() ? std::vector<double>(s_n, 1.0) : s_x0;
      spec.R = s_R;
      spec.ball_grid = s_ball_grid;
      spec.c1_grid = s_c1_grid;
      auto rec = simulation_record(e, spec, s_trials, s_seed, simulate(e, spec, s_trials, s_seed));
      emit(rec, s_out);
      if (!s_csv.empty()) atomic_write(s_csv, simulation_csv(rec));
      if (!s_svg_dir.empty() && s_n == 2) {
        const double radius = s_R / std::sqrt(s_L);
        for (int t = 0; t < std::min(s_svg_count, s_trials); ++t) {
          std::vector<Loop> loops;
          simulate_trial(e, sample_section(e, s_seed, t), spec, &loops);
          auto svg = render_svg(loops, 0, 0, 2 * kPi, {{{spec.x0[0], spec.x0[1]}, radius}});
          atomic_write((std::filesystem::path(s_svg_dir) / ("trial_" + std::to_string(t) + ".svg")).string(), svg);
        }
      }
      if (!s_out.empty())
        std::printf("b0 / L^(n/2) = %.6g +- %.3g over %d trials\n", rec.b0_normalized.mean,
                    rec.b0_normalized.stderr_, s_trials);
      return 0;
    }

    if (*wy) {
      auto w = weyl_record(w_n, w_L);
      if (w_json)
        emit(w, "");
      else
        std::printf("N_L = %llu, N_L / L^(n/2) = %.6g (limit %.6g)\n", static_cast<unsigned long long>(w.N_L),
                    w.ratio, w.limit);
      return 0;
    }

    if (*rep) {
      if (r_ids.empty())
        for (int id = 1; id <= kAcceptanceCount; ++id) r_ids.push_back(id);
      auto rows = run_acceptance(r_ids, threads, [](const AcceptanceRow& r) {
        std::fprintf(stderr, "criterion %d %s (%.1fs)\n", r.id, r.passed() ? "pass" : "FAIL", r.seconds);
      });
      const std::string table = acceptance_markdown(rows);
      std::cout << table;
      if (!r_out.empty()) atomic_write(r_out, table);
      for (const auto& r : rows)
        if (!r.passed()) return kExitCertFail;
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
