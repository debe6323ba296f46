#include "fraktur/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fraktur/crack_analysis.hpp"
#include "fraktur/error.hpp"
#include "fraktur/format.hpp"
#include "fraktur/output.hpp"
#include "fraktur/parallel.hpp"

namespace fraktur {

namespace fs = std::filesystem;

Assembler make_assembler(const RunConfig& config, const TriMesh& mesh) {
  const ModelSpec base = config.model();
  const std::vector<MaterialZone> zones = config.resolved_zones();
  std::vector<ModelSpec> materials{base};
  for (const auto& z : zones) {
    std::optional<AnisotropyParams> aniso = z.isotropic ? std::nullopt : base.anisotropy();
    materials.emplace_back(base.family(), aniso, base.degradation(), base.ell(), base.g0() * z.g0_factor);
  }
  std::vector<int> element_material(mesh.num_triangles(), 0);
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangles[e];
    const Vec2 c = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    for (std::size_t k = 0; k < zones.size(); ++k) {
      const auto& z = zones[k];
      if (c.x() >= z.x_min && c.x() <= z.x_max && c.y() >= z.y_min && c.y() <= z.y_max) {
        element_material[e] = static_cast<int>(k + 1);
        break;
      }
    }
  }
  return Assembler(mesh, std::move(materials), std::move(element_material), config.mu, config.quadrature_degree);
}

StaggeredParams resolved_staggered(const RunConfig& config) {
  StaggeredParams p = config.staggered;
  const double scale = config.g0 * config.a;
  p.tol_stag *= scale;
  p.newton_tol *= scale;
  p.lambda_hat = penalty_lambda_hat(config.family, config.g0, config.ell, p.tol_ir);
  return p;
}

namespace {

void write_report(const std::string& path, const RunConfig& config, const TriMesh& mesh,
                  const std::vector<StepRecord>& history, const SimulationResult& result, double seconds) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  const ModelSpec model = config.model();
  out << "family            " << to_string(model.family()) << '\n';
  if (model.anisotropy())
    out << "anisotropy        k=" << model.anisotropy()->k() << " tau=" << fmt17(model.anisotropy()->tau())
        << " omega=" << fmt17(model.anisotropy()->omega()) << '\n';
  else
    out << "anisotropy        none\n";
  out << "degradation       " << model.degradation().name() << '\n';
  out << "ell               " << fmt17(model.ell()) << '\n';
  out << "G0                " << fmt17(model.g0()) << '\n';
  out << "mu                " << fmt17(config.mu) << '\n';
  out << "geometry          " << (config.domain ? std::string("explicit") : config.preset) << '\n';
  out << "h_min h_max       " << fmt17(config.resolved_h_min()) << ' ' << fmt17(config.resolved_h_max()) << '\n';
  out << "nodes elements    " << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  const StaggeredParams sp = resolved_staggered(config);
  out << "lambda_hat        " << fmt17(sp.lambda_hat) << '\n';
  out << "tol_stag          " << fmt17(sp.tol_stag) << '\n';
  out << "threads           " << worker_count() << '\n';
  out << "simd              " << simd::to_string(simd::kernels().isa) << '\n';
  out << '\n';
  if (const auto c = classify_model(model)) {
    out << "wellposedness     " << to_string(c->family) << " tau=" << fmt17(c->tau) << '\n';
    out << "  existence       " << to_string(c->existence) << '\n';
    out << "  uniqueness      " << to_string(c->uniqueness) << '\n';
    out << "  basis           " << c->basis << '\n';
  } else {
    out << "wellposedness     not tabulated for " << to_string(model.family()) << '\n';
  }
  out << '\n';
  out << "step  u_bar  stag_iters  converged  ResSTAG  tr_iters  max_violation\n";
  for (const auto& r : history)
    out << r.step << "  " << fmt_fixed(r.u_bar, 3) << "  " << r.stag.iterations << "  "
        << (r.stag.converged ? "yes" : "no") << "  "
        << (r.stag.residuals.empty() ? std::string("-") : fmt_sci(r.stag.residuals.back())) << "  "
        << r.stag.tr_iterations << "  " << fmt_sci(r.stag.irreversibility_violation) << '\n';
  out << '\n';
  if (result.crack_angle) out << "crack angle       " << fmt_fixed(*result.crack_angle, 2) << " deg\n";
  out << "status            " << (result.ok ? "completed" : "failed: " + result.error) << '\n';
  out << "wall time         " << fmt_fixed(seconds, 2) << " s\n";
}

}  // namespace

SimulationResult simulate(const RunConfig& config, const std::string& out_dir, const SimulateOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulationResult result;
  const DomainSpec domain = config.resolved_domain();
  result.mesh = build_slit_domain(domain);
  const Assembler assembler = make_assembler(config, result.mesh);
  const StaggeredParams params = resolved_staggered(config);
  SpdSolver solver(config.linear_solver);
  result.state = SimState::zeros(result.mesh.num_vertices());

  const std::vector<Vec2> tips = slit_tips(domain);
  const fs::path dir(out_dir);
  std::ofstream history_out;
  if (options.write_files) {
    fs::create_directories(dir);
    write_mesh_file((dir / "mesh.txt").string(), result.mesh);
    std::ofstream(dir / "config.json") << config_to_json(config);
    history_out.open(dir / "history.csv");
    if (!history_out) throw InvalidArgument("cannot write " + (dir / "history.csv").string());
    history_out << history_header() << '\n';
  }

  LoadRunOptions run;
  if (!tips.empty()) run.notch_tip = tips.front();
  run.on_step = [&](const StepRecord& rec, const SimState& state) {
    result.history.push_back(rec);
    if (options.verbose)
      std::fprintf(stderr, "step %d u_bar=%.3f stag=%d tr=%d E=%.6e R=%.4e min_alpha=%.3e max_alpha=%.4f%s\n", rec.step,
                   rec.u_bar, rec.stag.iterations, rec.stag.tr_iterations, rec.energy.total, rec.reaction, rec.min_alpha,
                   rec.max_alpha, rec.stag.converged ? "" : " (not converged)");
    if (!options.write_files) return;
    history_out << history_row(rec) << '\n' << std::flush;
    if (config.snapshot_stride > 0 && rec.step % config.snapshot_stride == 0)
      write_vtk_file((dir / ("fields_" + std::to_string(rec.step) + ".vtk")).string(), result.mesh, state.u,
                     state.alpha);
  };

  try {
    run_load_program(assembler, result.state, config.load, params, config.trust_region, solver, run);
  } catch (const SolverError& e) {
    result.ok = false;
    result.error = e.what();
  }

  if (!tips.empty()) {
    try {
      result.crack_angle = crack_angle_degrees(result.mesh, result.state.alpha, tips.front(), 0.5 * config.a);
    } catch (const DomainError&) {
    }
  }
  if (options.write_files) {
    if (!tips.empty()) {
      std::ofstream ridge(dir / "ridge.csv");
      write_polyline_csv(ridge, trace_crack(result.mesh, result.state.alpha, tips.front()).ridge);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_report((dir / "run_report.txt").string(), config, result.mesh, result.history, result, seconds);
  }
  return result;
}

std::vector<SimulationResult> sweep(const std::vector<SweepEntry>& entries, const std::string& out_root) {
  std::vector<SimulationResult> results(entries.size());
  parallel_for(entries.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      results[i] = simulate(entries[i].config, (fs::path(out_root) / entries[i].name).string());
  });
  return results;
}

}  // namespace fraktur
