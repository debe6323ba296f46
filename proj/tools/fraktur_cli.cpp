// Command-line front end: simulations, verification suites and the 1D/2D
// model kernels as CSV.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fraktur/anisotropy.hpp"
#include "fraktur/config.hpp"
#include "fraktur/error.hpp"
#include "fraktur/experiment.hpp"
#include "fraktur/format.hpp"
#include "fraktur/material_models.hpp"
#include "fraktur/mesh.hpp"
#include "fraktur/verification.hpp"
#include "fraktur/wellposedness.hpp"

using namespace fraktur;

namespace {

int cmd_simulate(const std::string& config_path, const std::string& out, bool quiet) {
  RunConfig config = load_config_file(config_path);
  const std::string dir = out.empty() ? config.output_dir : out;
  const SimulationResult r = simulate(config, dir, {true, !quiet});
  std::printf("%zu steps written to %s\n", r.history.size(), dir.c_str());
  if (!r.ok) {
    std::fprintf(stderr, "error: %s\n", r.error.c_str());
    return 1;
  }
  return 0;
}

int cmd_sweep(const std::vector<std::string>& configs, const std::string& out) {
  std::vector<SweepEntry> entries;
  for (const auto& path : configs)
    entries.push_back({std::filesystem::path(path).stem().string(), load_config_file(path)});
  const auto results = sweep(entries, out);
  int status = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::printf("%-24s %s\n", entries[i].name.c_str(), results[i].ok ? "ok" : results[i].error.c_str());
    if (!results[i].ok) status = 1;
  }
  return status;
}

int cmd_verify(const std::string& suite) {
  const auto checks = run_suite(suite);
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%s  %-*s  %s\n", c.pass ? "PASS" : "FAIL", static_cast<int>(width), c.name.c_str(),
                c.measured.c_str());
    ok = ok && c.pass;
  }
  std::printf("%s: %zu checks, %s\n", suite.c_str(), checks.size(), ok ? "all passed" : "FAILURES");
  return ok ? 0 : 1;
}

int cmd_polar(int k, double tau, double omega) {
  write_polar_csv(std::cout, AnisotropyParams(k, tau, omega));
  return 0;
}

int cmd_homogeneous(const std::string& model_name, const std::string& degradation, int points) {
  const Family f = parse_family(model_name);
  const ModelSpec model(f, std::nullopt, degradation.empty() ? DegradationSpec::quadratic() : parse_degradation(degradation), 1.0);
  std::cout << "alpha,eps_bar,sigma_bar\n";
  for (int i = 0; i < points; ++i) {
    // The homogeneous relation is defined on [0,1); the last sample stops just short of 1.
    const double a = std::min(static_cast<double>(i) / (points - 1), 1.0 - 1e-9);
    const HomogeneousPoint p = homogeneous_response(model, a);
    std::cout << fmt17(a) << ',' << fmt17(p.eps_bar) << ',' << fmt17(p.sigma_bar) << '\n';
  }
  std::fprintf(stderr, "argmax sigma_bar at alpha = %.8f\n", critical_damage(model));
  return 0;
}

int cmd_profile1d(const std::string& model_name, double ell, double length, double h) {
  const Family f = parse_family(model_name);
  const ModelSpec model(f, std::nullopt, DegradationSpec::quadratic(), ell);
  const double L = length > 0.0 ? length : 25.0 * ell;
  const double step = h > 0.0 ? h : ell / 20.0;
  const Profile1D p = minimize_profile_1d(model, L, step);
  std::cout << "t,alpha,alpha_closed_form\n";
  double err = 0.0;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double exact = optimal_profile(model, p.t[i]);
    err = std::max(err, std::abs(p.alpha[i] - exact));
    std::cout << fmt17(p.t[i]) << ',' << fmt17(p.alpha[i]) << ',' << fmt17(exact) << '\n';
  }
  std::fprintf(stderr, "energy/G0 = %.6f  max |alpha - closed form| = %.3e  newton iterations = %d\n", p.energy, err,
               p.iterations);
  if (f != Family::AT1) std::fprintf(stderr, "decay constant = %.6f\n", fit_decay_constant(p, ell));
  return 0;
}

int cmd_wellposed(const std::string& family_name, double tau, double omega, double g0, double ell,
                  const std::string& sweep_csv) {
  const WellposedFamily f = parse_wellposed_family(family_name);
  const ExistenceReport r = classify(f, tau);
  std::printf("family      %s\n", std::string(to_string(r.family)).c_str());
  std::printf("tau         %s\n", fmt17(r.tau).c_str());
  std::printf("existence   %s\n", std::string(to_string(r.existence)).c_str());
  std::printf("uniqueness  %s\n", std::string(to_string(r.uniqueness)).c_str());
  std::printf("basis       %s\n", r.basis.c_str());
  if (f == WellposedFamily::Foc2) {
    const auto [l1, l2] = hessian_eigs_foc2(tau, omega, g0, ell);
    std::printf("lambda      (%s, %s)\n", fmt17(l1).c_str(), fmt17(l2).c_str());
  } else {
    const double t = f == WellposedFamily::IsoFoc4 ? 0.0 : tau;
    std::printf("min lambda2 %s  (unit xi, all omega)\n", fmt_sci(foc4_min_lambda2(t, g0, ell), 6).c_str());
  }
  if (!sweep_csv.empty()) {
    std::vector<double> taus;
    for (int i = 0; i < 100; ++i) taus.push_back(0.99 * i / 99.0);
    std::ofstream out(sweep_csv);
    if (!out) throw InvalidArgument("cannot write '" + sweep_csv + "'");
    out << "tau,min_lambda2\n";
    for (const auto& p : foc4_lambda2_sweep(taus, g0, ell)) out << fmt17(p.tau) << ',' << fmt17(p.min_lambda2) << '\n';
  }
  return 0;
}

int cmd_mesh(const std::string& preset, const std::string& out, double a, double ell, double h_min, double h_max) {
  const DomainSpec spec = preset_domain(preset, a, ell, h_min > 0 ? h_min : ell / 5.0, h_max > 0 ? h_max : ell);
  const TriMesh mesh = build_slit_domain(spec);
  write_mesh_file(out, mesh);
  std::printf("%zu nodes, %zu triangles, min angle %.2f deg\n", mesh.num_vertices(), mesh.num_triangles(),
              min_angle_degrees(mesh));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field brittle fracture in anti-plane shear"};
  app.require_subcommand(1);
  int status = 0;

  std::string config_path, out;
  bool quiet = false;
  auto* sim = app.add_subcommand("simulate", "Run a load program from a JSON config");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out", out, "Output directory (overrides the config)");
  sim->add_flag("--quiet", quiet, "No per-step progress");

  std::vector<std::string> sweep_configs;
  std::string sweep_out = "sweep";
  auto* sw = app.add_subcommand("sweep", "Run several configs in parallel");
  sw->add_option("--config", sweep_configs, "Config files")->required();
  sw->add_option("--out", sweep_out, "Root output directory");

  std::string suite;
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("suite", suite, "homogeneous|profiles|anisotropy|gradients|wellposed|all")->required();

  int k = 2;
  double tau = 0.0, omega = 0.0;
  auto* pol = app.add_subcommand("polar", "Toughness polar plot as CSV");
  pol->add_option("--k", k)->required();
  pol->add_option("--tau", tau)->required();
  pol->add_option("--omega", omega)->required();

  std::string model_name, degradation;
  int points = 2001;
  auto* hom = app.add_subcommand("homogeneous", "Homogeneous 1D stress-strain response as CSV");
  hom->add_option("--model", model_name, "AT1|AT2|Foc4")->required();
  hom->add_option("--degradation", degradation, "quadratic|quartic_squared|poly<m>");
  hom->add_option("--points", points)->check(CLI::Range(2, 10000000));

  double ell = 0.04, length = 0.0, h = 0.0;
  auto* prof = app.add_subcommand("profile1d", "Minimized and closed-form optimal profiles as CSV");
  prof->add_option("--model", model_name, "AT1|AT2|Foc4")->required();
  prof->add_option("--ell", ell);
  prof->add_option("--length", length, "Half-line length (default 25 ell)");
  prof->add_option("--step", h, "Element size (default ell/20)");

  std::string family_name, sweep_csv;
  double g0 = 1.0;
  auto* wp = app.add_subcommand("wellposed", "Existence/uniqueness report");
  wp->add_option("--family", family_name, "IsoFoc4|Foc2|Foc4")->required();
  wp->add_option("--tau", tau)->required();
  wp->add_option("--omega", omega);
  wp->add_option("--g0", g0);
  wp->add_option("--ell", ell);
  wp->add_option("--sweep-csv", sweep_csv, "Write tau,min_lambda2 for tau in [0, 0.99]");

  std::string preset;
  double a = 1.0, h_min = 0.0, h_max = 0.0;
  auto* msh = app.add_subcommand("mesh", "Write a preset mesh");
  msh->add_option("--preset", preset, "single_slit|example1|example2|example3")->required();
  msh->add_option("--out", out)->required();
  msh->add_option("--a", a);
  msh->add_option("--ell", ell);
  msh->add_option("--h-min", h_min, "default ell/5");
  msh->add_option("--h-max", h_max, "default ell");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) status = cmd_simulate(config_path, out, quiet);
    else if (*sw) status = cmd_sweep(sweep_configs, sweep_out);
    else if (*ver) status = cmd_verify(suite);
    else if (*pol) status = cmd_polar(k, tau, omega);
    else if (*hom) status = cmd_homogeneous(model_name, degradation, points);
    else if (*prof) status = cmd_profile1d(model_name, ell, length, h);
    else if (*wp) status = cmd_wellposed(family_name, tau, omega, g0, ell, sweep_csv);
    else if (*msh) status = cmd_mesh(preset, out, a, ell, h_min, h_max);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return status;
}
