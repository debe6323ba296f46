#pragma once

#include <string>
#include <vector>

#include "fraktur/fem_assembly.hpp"
#include "fraktur/linear_solver.hpp"

namespace fraktur {

struct TrustRegionParams {
  double r0 = 0.01;
  double eta1 = 0.25;
  double eta2 = 0.75;
  double shrink = 0.5;
  double grow = 2.0;
  double box_lambda = 1e4;  ///< penalty on the pointwise box -R <= z <= R
  double tol_pf = 1e-4;     ///< relative change in F that ends the iteration
  int max_outer = 200;
  double r_min = 1e-10;
  double z0 = 1e-3;         ///< initial guess of the inner Newton solve
  int max_inner = 50;
  double flat_regularization = 1e-10;  ///< proximal weight of the inner model, relative to box_lambda
  double box_active_fraction = 0.9;    ///< steps with max|z| above this fraction of R do not end the iteration

  /// Throws InvalidArgument unless 0 < eta1 < eta2 < 1, 0 < shrink < 1 < grow, r0 > 0.
  void validate() const;
};

/// Smooth objective with sparse Hessian.
class TrObjective {
 public:
  virtual ~TrObjective() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual SparseMatrix hessian(const Vector& x) const = 0;
};

struct TrustRegionReport {
  int iterations = 0;
  int accepted = 0;
  int rejected = 0;
  int inner_iterations = 0;
  bool converged = false;
  double final_radius = 0.0;
  std::string termination;
  std::vector<double> accepted_energies;  ///< F at the start, then after every accepted step
  std::vector<double> rhos;               ///< ratio of every trial step
};

/// Penalized box model  g.z + z.Hz/2 + (lambda/2) sum_i w_i (<R+z_i>_-^2 + <R-z_i>_-^2).
double box_model_value(const Vector& g, const SparseMatrix& h, const Vector& weights, double radius, double lambda,
                       const Vector& z);

/// Minimizes the penalized box model by Newton's method from the uniform guess
/// z0, with Armijo backtracking and a diagonal shift when the Jacobian is not
/// positive definite. Returns the number of Newton iterations through `iterations`.
Vector minimize_box_model(const Vector& g, const SparseMatrix& h, const Vector& weights, double radius,
                          const TrustRegionParams& params, SpdSolver& solver, int* iterations = nullptr);

/// Trust-region iteration with a penalized pointwise box. `weights` are the
/// integration weights of the box penalty (lumped nodal areas for P1 fields).
/// Stops after an accepted step whose relative change in F is at most tol_pf,
/// unless that step reached the box.
/// Throws SolverError("TR stalled ...") if the radius falls below r_min while
/// the last accepted relative change in F exceeds 10 tol_pf.
Vector trust_region_minimize(const TrObjective& f, const Vector& x0, const Vector& weights,
                             const TrustRegionParams& params, SpdSolver& solver, TrustRegionReport* report = nullptr);

}  // namespace fraktur
