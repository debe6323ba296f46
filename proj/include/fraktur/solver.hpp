#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraktur/fem_assembly.hpp"
#include "fraktur/linear_solver.hpp"
#include "fraktur/trust_region.hpp"

namespace fraktur {

enum class AlphaMethod { Auto, Newton, TrustRegion };
std::string_view to_string(AlphaMethod m);
AlphaMethod parse_alpha_method(std::string_view name);

struct StaggeredParams {
  double tol_stag = 1e-5;   ///< absolute threshold on ResSTAG (callers scale by G0 a)
  int max_iters = 100;
  double tol_ir = 0.01;
  double lambda_hat = 0.0;  ///< usually penalty_lambda_hat(...)
  bool alpha_first = true;
  AlphaMethod alpha_method = AlphaMethod::Auto;  ///< Auto: trust region for Foc4, Newton otherwise
  double newton_tol = 1e-8;  ///< infinity-norm residual threshold of the convex alpha solve
  int newton_max_iters = 100;
  bool abort_on_nonconvergence = false;
  double nucleation_seed = 1e-3;  ///< Foc4 only; 0 disables seeding

  /// Throws InvalidArgument unless tol_stag > 0, tol_ir in (0,1), lambda_hat >= 0.
  void validate() const;
};

struct LoadProgram {
  double delta_u = 0.1;
  int n_steps = 15;
  /// Nodes on DirichletMinus edges receive -n delta_u, DirichletPlus nodes +n delta_u.
  void validate() const;
};

/// Penalty that keeps the irreversibility violation below tol_ir.
double penalty_lambda_hat(Family family, double g0, double ell, double tol_ir);

/// Dirichlet data for the load value u_bar.
DirichletData load_boundary(const TriMesh& mesh, double u_bar);

/// Solves the reduced displacement system and returns the full nodal field.
Vector solve_displacement(const DisplacementSystem& system, SpdSolver& solver, LinearSolveReport* report = nullptr);

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residuals;  ///< infinity norm before every iteration
};

/// Damped semismooth Newton on F_alpha = 0 at fixed u (convex families).
/// Throws SolverError with the residual history if it does not converge.
Vector solve_alpha_convex(const Assembler& assembler, const SimState& state, double lambda_hat, double tol,
                          int max_iters, SpdSolver& solver, NewtonReport* report = nullptr);

struct AlphaTrReport {
  TrustRegionReport tr;
  bool seeded = false;        ///< a nucleation seed was tried
  bool seed_kept = false;
  std::size_t seeded_nodes = 0;
};

/// Trust-region minimization of F(u, .) starting from state.alpha. For
/// families whose alpha-derivatives all vanish at alpha = 0 (Foc4), nodes
/// where the alpha^4 coefficient of the local energy is negative and alpha is
/// below `seed` are also tried from alpha = seed; that attempt is kept only if
/// it ends at lower energy.
Vector trust_region_alpha(const Assembler& assembler, const SimState& state, double lambda_hat,
                          const TrustRegionParams& tr, SpdSolver& solver, double seed = 0.0,
                          AlphaTrReport* report = nullptr);

struct StaggeredReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> energies;      ///< F after the displacement predictor, then after each half-step
  std::vector<double> residuals;     ///< ResSTAG after each iteration
  int tr_iterations = 0;
  int tr_accepted = 0;
  int tr_rejected = 0;
  int newton_iterations = 0;
  int seeds_kept = 0;
  std::vector<std::vector<double>> tr_traces;  ///< accepted TR energies of every alpha solve
  double irreversibility_violation = 0.0;      ///< max(alpha_prev - alpha)
};

/// Alternating minimization at the load value u_bar. state.alpha_prev is left untouched.
void staggered_solve(const Assembler& assembler, SimState& state, double u_bar, const StaggeredParams& params,
                     const TrustRegionParams& tr, SpdSolver& solver, StaggeredReport* report = nullptr);

struct StepRecord {
  int step = 0;
  double u_bar = 0.0;
  EnergyBreakdown energy;
  double reaction = 0.0;  ///< dF/du_bar: nodal residuals on the loaded boundary times their load sign
  double min_alpha = 0.0;
  double max_alpha = 0.0;
  Vec2 crack_tip = Vec2::Zero();
  StaggeredReport stag;
};

struct LoadRunOptions {
  std::optional<Vec2> notch_tip;
  /// Called after each converged step with the updated state.
  std::function<void(const StepRecord&, const SimState&)> on_step;
};

/// Generalized force conjugate to u_bar at the current state.
double reaction_force(const Assembler& assembler, const SimState& state);

/// Runs steps 1..n_steps with u_bar = n delta_u, updating alpha_prev after each step.
std::vector<StepRecord> run_load_program(const Assembler& assembler, SimState& state, const LoadProgram& program,
                                         const StaggeredParams& params, const TrustRegionParams& tr,
                                         SpdSolver& solver, const LoadRunOptions& options = {});

}  // namespace fraktur
