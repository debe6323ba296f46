#include "fraktur/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fraktur/crack_analysis.hpp"
#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

std::string_view to_string(AlphaMethod m) {
  switch (m) {
    case AlphaMethod::Auto: return "auto";
    case AlphaMethod::Newton: return "newton";
    case AlphaMethod::TrustRegion: return "trust_region";
  }
  return "?";
}

AlphaMethod parse_alpha_method(std::string_view name) {
  if (name == "auto") return AlphaMethod::Auto;
  if (name == "newton") return AlphaMethod::Newton;
  if (name == "trust_region") return AlphaMethod::TrustRegion;
  throw InvalidArgument("unknown alpha method '" + std::string(name) + "' (expected auto, newton or trust_region)");
}

void StaggeredParams::validate() const {
  if (!(tol_stag > 0.0)) throw InvalidArgument("tol_stag must be positive");
  if (!(tol_ir > 0.0 && tol_ir < 1.0)) throw InvalidArgument("tol_ir must lie in (0, 1)");
  if (!(lambda_hat >= 0.0)) throw InvalidArgument("lambda_hat must be nonnegative");
  if (max_iters < 1 || newton_max_iters < 1) throw InvalidArgument("iteration limits must be positive");
  if (!(newton_tol > 0.0)) throw InvalidArgument("newton_tol must be positive");
  if (!(nucleation_seed >= 0.0 && nucleation_seed < 1.0)) throw InvalidArgument("nucleation_seed must lie in [0, 1)");
}

void LoadProgram::validate() const {
  if (!(delta_u > 0.0)) throw InvalidArgument("delta_u must be positive");
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
}

double penalty_lambda_hat(Family family, double g0, double ell, double tol_ir) {
  if (!(tol_ir > 0.0 && tol_ir <= 1.0)) throw InvalidArgument("tol_ir must lie in (0, 1]");
  if (family == Family::AT1) return g0 / ell * 27.0 / (64.0 * tol_ir * tol_ir);
  return g0 / ell * (1.0 / (tol_ir * tol_ir) - 1.0);
}

DirichletData load_boundary(const TriMesh& mesh, double u_bar) {
  const std::vector<int> minus = boundary_nodes(mesh, BoundaryTag::DirichletMinus);
  const std::vector<int> plus = boundary_nodes(mesh, BoundaryTag::DirichletPlus);
  std::vector<std::pair<int, double>> all;
  for (int i : minus) all.emplace_back(i, -u_bar);
  for (int i : plus) all.emplace_back(i, u_bar);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  DirichletData bc;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (k > 0 && all[k].first == all[k - 1].first) {
      // A node shared by a Minus and a Plus edge sits where the load jumps; it takes the mean.
      bc.values.back() = 0.5 * (bc.values.back() + all[k].second);
      continue;
    }
    bc.nodes.push_back(all[k].first);
    bc.values.push_back(all[k].second);
  }
  return bc;
}

Vector solve_displacement(const DisplacementSystem& system, SpdSolver& solver, LinearSolveReport* report) {
  return system.expand(solver.solve(system.matrix, system.rhs, report));
}

Vector solve_alpha_convex(const Assembler& assembler, const SimState& state, double lambda_hat, double tol,
                          int max_iters, SpdSolver& solver, NewtonReport* report) {
  NewtonReport local;
  NewtonReport& rep = report ? *report : local;
  rep = {};
  SimState s = state;
  double f = assembler.energy(s, lambda_hat).total;
  for (int it = 0; it < max_iters; ++it) {
    const Vector r = assembler.residual_alpha(s, lambda_hat);
    const double res = r.cwiseAbs().maxCoeff();
    rep.residuals.push_back(res);
    if (res <= tol) return s.alpha;
    rep.iterations = it + 1;
    const Vector dz = solver.solve_shifted(assembler.hessian_alpha(s, lambda_hat), -r);
    const double slope = r.dot(dz);
    const Vector base = s.alpha;
    // Once the predicted decrease is below the rounding of F the energy cannot
    // rank trial points; the residual norm takes over as merit function.
    const bool energy_blind = -slope <= 1e-13 * std::max(std::abs(f), 1e-300);
    const double rnorm = r.norm();
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      s.alpha = base + t * dz;
      const double ft = assembler.energy(s, lambda_hat).total;
      const bool accept = energy_blind ? assembler.residual_alpha(s, lambda_hat).norm() <= (1.0 - 1e-4 * t) * rnorm
                                       : ft <= f + 1e-4 * t * slope;
      if (accept) {
        f = ft;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      s.alpha = base;
      // Energy is flat to rounding: accept when the residual is within rounding of the threshold.
      if (res <= 1e3 * tol) return s.alpha;
      break;
    }
  }
  std::string history;
  for (double r : rep.residuals) history += (history.empty() ? "" : ", ") + fmt_sci(r);
  throw SolverError("alpha Newton did not converge; residual history: " + history);
}

namespace {

class AlphaObjective final : public TrObjective {
 public:
  AlphaObjective(const Assembler& assembler, const SimState& state, double lambda_hat)
      : assembler_(assembler), state_(state), lambda_hat_(lambda_hat) {}

  double value(const Vector& x) const override {
    state_.alpha = x;
    return assembler_.energy(state_, lambda_hat_).total;
  }
  Vector gradient(const Vector& x) const override {
    state_.alpha = x;
    return assembler_.residual_alpha(state_, lambda_hat_);
  }
  SparseMatrix hessian(const Vector& x) const override {
    state_.alpha = x;
    return assembler_.hessian_alpha(state_, lambda_hat_);
  }

 private:
  const Assembler& assembler_;
  mutable SimState state_;
  double lambda_hat_;
};

// Nodes touching an element where alpha = 0 is a degenerate critical point of
// the local energy (no terms below alpha^4) and the alpha^4 coefficient is negative.
std::vector<int> supercritical_nodes(const Assembler& assembler, const Vector& u) {
  const TriMesh& mesh = assembler.mesh();
  std::vector<double> c4(assembler.materials().size(), 0.0), g4(c4.size(), 0.0);
  std::vector<bool> flat(c4.size(), false);
  for (std::size_t m = 0; m < c4.size(); ++m) {
    const Polynomial g = degradation_polynomial(assembler.materials()[m].degradation());
    const Polynomial f = surface_local_polynomial(assembler.materials()[m]);
    auto coef = [](const Polynomial& p, std::size_t k) { return k < p.c.size() ? p.c[k] : 0.0; };
    flat[m] = assembler.materials()[m].gradient_power() == 4;
    for (std::size_t k = 1; k < 4; ++k) flat[m] = flat[m] && coef(g, k) == 0.0 && coef(f, k) == 0.0;
    g4[m] = coef(g, 4);
    c4[m] = coef(f, 4);
  }
  std::vector<char> mark(mesh.num_vertices(), 0);
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const int m = assembler.element_material()[e];
    if (!flat[m]) continue;
    const auto& t = mesh.triangles[e];
    const Vec2& p0 = mesh.vertices[t[0]];
    const Vec2& p1 = mesh.vertices[t[1]];
    const Vec2& p2 = mesh.vertices[t[2]];
    Mat2 jac;
    jac << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
    const Vec2 du(u[t[1]] - u[t[0]], u[t[2]] - u[t[0]]);
    const Vec2 grad = jac.transpose().inverse() * du;
    const double psi = 0.5 * assembler.mu() * grad.squaredNorm();
    if (g4[m] * psi + c4[m] < 0.0)
      for (int v : t) mark[v] = 1;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

Vector trust_region_alpha(const Assembler& assembler, const SimState& state, double lambda_hat,
                          const TrustRegionParams& tr, SpdSolver& solver, double seed, AlphaTrReport* report) {
  AlphaTrReport local;
  AlphaTrReport& rep = report ? *report : local;
  rep = {};
  const AlphaObjective objective(assembler, state, lambda_hat);
  const Vector& weights = assembler.nodal_weights();

  if (seed > 0.0) {
    Vector start = state.alpha;
    for (int i : supercritical_nodes(assembler, state.u)) {
      if (start[i] < seed) {
        start[i] = seed;
        ++rep.seeded_nodes;
      }
    }
    if (rep.seeded_nodes > 0) {
      rep.seeded = true;
      TrustRegionReport seeded_report;
      Vector x = trust_region_minimize(objective, start, weights, tr, solver, &seeded_report);
      const double f0 = objective.value(state.alpha);
      if (seeded_report.accepted_energies.back() < f0) {
        rep.seed_kept = true;
        rep.tr = std::move(seeded_report);
        return x;
      }
    }
  }
  return trust_region_minimize(objective, state.alpha, weights, tr, solver, &rep.tr);
}

namespace {

double stag_residual(const Assembler& assembler, const SimState& s, double lambda_hat, const DirichletData& bc) {
  Vector ru = assembler.residual_u(s);
  for (int i : bc.nodes) ru[i] = 0.0;
  return ru.norm() + assembler.residual_alpha(s, lambda_hat).norm();
}

}  // namespace

void staggered_solve(const Assembler& assembler, SimState& state, double u_bar, const StaggeredParams& params,
                     const TrustRegionParams& tr, SpdSolver& solver, StaggeredReport* report) {
  params.validate();
  StaggeredReport local;
  StaggeredReport& rep = report ? *report : local;
  rep = {};
  const DirichletData bc = load_boundary(assembler.mesh(), u_bar);

  const bool use_tr = params.alpha_method == AlphaMethod::TrustRegion ||
                      (params.alpha_method == AlphaMethod::Auto && assembler.primary_model().family() == Family::Foc4);
  const double lam = params.lambda_hat;

  auto alpha_step = [&] {
    if (use_tr) {
      AlphaTrReport ar;
      state.alpha = trust_region_alpha(assembler, state, lam, tr, solver, params.nucleation_seed, &ar);
      rep.tr_iterations += ar.tr.iterations;
      rep.tr_accepted += ar.tr.accepted;
      rep.tr_rejected += ar.tr.rejected;
      rep.seeds_kept += ar.seed_kept ? 1 : 0;
      rep.tr_traces.push_back(std::move(ar.tr.accepted_energies));
    } else {
      NewtonReport nr;
      state.alpha = solve_alpha_convex(assembler, state, lam, params.newton_tol, params.newton_max_iters, solver, &nr);
      rep.newton_iterations += nr.iterations;
    }
  };
  auto u_step = [&] { state.u = solve_displacement(assembler.assemble_displacement_system(state.alpha, bc), solver); };

  // Predictor: the displacement for the new boundary data at the current alpha,
  // so the first alpha solve does not see a boundary layer left by the old load.
  u_step();
  rep.energies.push_back(assembler.energy(state, lam).total);
  for (int k = 0; k < params.max_iters; ++k) {
    rep.iterations = k + 1;
    if (params.alpha_first) {
      alpha_step();
      rep.energies.push_back(assembler.energy(state, lam).total);
      u_step();
    } else {
      u_step();
      rep.energies.push_back(assembler.energy(state, lam).total);
      alpha_step();
    }
    rep.energies.push_back(assembler.energy(state, lam).total);
    const double res = stag_residual(assembler, state, lam, bc);
    rep.residuals.push_back(res);
    if (res <= params.tol_stag) {
      rep.converged = true;
      break;
    }
  }
  rep.irreversibility_violation = std::max(0.0, (state.alpha_prev - state.alpha).maxCoeff());
}

double reaction_force(const Assembler& assembler, const SimState& state) {
  // Unit load data: the derivative of each boundary value with respect to u_bar.
  const DirichletData unit = load_boundary(assembler.mesh(), 1.0);
  const Vector r = assembler.residual_u(state);
  double sum = 0.0;
  for (std::size_t k = 0; k < unit.nodes.size(); ++k) sum += r[unit.nodes[k]] * unit.values[k];
  return sum;
}

std::vector<StepRecord> run_load_program(const Assembler& assembler, SimState& state, const LoadProgram& program,
                                         const StaggeredParams& params, const TrustRegionParams& tr,
                                         SpdSolver& solver, const LoadRunOptions& options) {
  program.validate();
  std::vector<StepRecord> history;
  for (int n = state.step + 1; n <= program.n_steps; ++n) {
    StepRecord rec;
    rec.step = n;
    rec.u_bar = n * program.delta_u;
    staggered_solve(assembler, state, rec.u_bar, params, tr, solver, &rec.stag);
    if (!rec.stag.converged && params.abort_on_nonconvergence)
      throw SolverError("staggered scheme did not converge at step " + std::to_string(n) + " (ResSTAG " +
                        fmt_sci(rec.stag.residuals.back()) + " after " + std::to_string(rec.stag.iterations) +
                        " iterations)");
    rec.energy = assembler.energy(state, params.lambda_hat);
    rec.reaction = reaction_force(assembler, state);
    state.alpha_prev = state.alpha;
    state.step = n;
    rec.min_alpha = state.alpha.minCoeff();
    rec.max_alpha = state.alpha.maxCoeff();
    if (options.notch_tip) rec.crack_tip = crack_tip(assembler.mesh(), state.alpha, *options.notch_tip);
    history.push_back(rec);
    if (options.on_step) options.on_step(history.back(), state);
  }
  return history;
}

}  // namespace fraktur
