#include "fraktur/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

void TrustRegionParams::validate() const {
  if (!(0.0 < eta1 && eta1 < eta2 && eta2 < 1.0)) throw InvalidArgument("trust region requires 0 < eta1 < eta2 < 1");
  if (!(0.0 < shrink && shrink < 1.0 && grow > 1.0))
    throw InvalidArgument("trust region requires 0 < shrink < 1 < grow");
  if (!(r0 > 0.0) || !(r_min > 0.0)) throw InvalidArgument("trust region radii must be positive");
  if (!(box_lambda > 0.0)) throw InvalidArgument("box penalty must be positive");
  if (!(tol_pf > 0.0)) throw InvalidArgument("tol_pf must be positive");
  if (max_outer < 1 || max_inner < 1) throw InvalidArgument("iteration limits must be positive");
  if (!(flat_regularization >= 0.0)) throw InvalidArgument("flat_regularization must be nonnegative");
  if (!(box_active_fraction > 0.0 && box_active_fraction <= 1.0))
    throw InvalidArgument("box_active_fraction must lie in (0, 1]");
}

double box_model_value(const Vector& g, const SparseMatrix& h, const Vector& weights, double radius, double lambda,
                       const Vector& z) {
  double pen = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double lo = std::min(0.0, radius + z[i]);
    const double hi = std::min(0.0, radius - z[i]);
    pen += weights[i] * (lo * lo + hi * hi);
  }
  return g.dot(z) + 0.5 * z.dot(h * z) + 0.5 * lambda * pen;
}

namespace {

// Model plus (eps/2) sum_i w_i z_i^2. The tiny proximal term pins directions in
// which the model is flat (zero gradient and curvature) at z = 0.
double regularized_model(const Vector& g, const SparseMatrix& h, const Vector& weights, double radius, double lambda,
                         double eps, const Vector& z) {
  return box_model_value(g, h, weights, radius, lambda, z) + 0.5 * eps * z.dot(weights.cwiseProduct(z));
}

}  // namespace

Vector minimize_box_model(const Vector& g, const SparseMatrix& h, const Vector& weights, double radius,
                          const TrustRegionParams& params, SpdSolver& solver, int* iterations) {
  const double lambda = params.box_lambda;
  const double eps = params.flat_regularization * lambda;
  Vector z = Vector::Constant(g.size(), params.z0);
  double m = regularized_model(g, h, weights, radius, lambda, eps, z);
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  int it = 0;
  for (; it < params.max_inner; ++it) {
    Vector r = g + h * z;
    SparseMatrix j = h;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double lo = radius + z[i];
      const double hi = radius - z[i];
      r[i] += lambda * weights[i] * (std::min(0.0, lo) - std::min(0.0, hi)) + eps * weights[i] * z[i];
      const double active = (lo < 0.0 ? 1.0 : 0.0) + (hi < 0.0 ? 1.0 : 0.0);
      j.coeffRef(i, i) += lambda * weights[i] * active + eps * weights[i];
    }
    if (r.cwiseAbs().maxCoeff() <= 1e-12 * scale) break;
    const Vector dz = solver.solve_shifted(j, -r);
    const double slope = r.dot(dz);
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Vector trial = z + t * dz;
      const double mt = regularized_model(g, h, weights, radius, lambda, eps, trial);
      if (mt <= m + 1e-4 * t * slope) {
        z = trial;
        m = mt;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved || (t * dz).cwiseAbs().maxCoeff() <= 1e-14 * radius) {
      ++it;
      break;
    }
  }
  if (iterations) *iterations = it;
  return z;
}

Vector trust_region_minimize(const TrObjective& f, const Vector& x0, const Vector& weights,
                             const TrustRegionParams& params, SpdSolver& solver, TrustRegionReport* report) {
  params.validate();
  static const bool trace = std::getenv("FRAKTUR_TRACE_TR") != nullptr;
  TrustRegionReport local;
  TrustRegionReport& rep = report ? *report : local;
  rep = {};

  Vector x = x0;
  double fx = f.value(x);
  rep.accepted_energies.push_back(fx);
  double radius = params.r0;
  Vector g = f.gradient(x);
  SparseMatrix h = f.hessian(x);
  double last_rel_change = std::numeric_limits<double>::infinity();
  double last_rel_pred = std::numeric_limits<double>::infinity();

  for (int it = 0; it < params.max_outer; ++it) {
    rep.iterations = it + 1;
    int inner = 0;
    const Vector z = minimize_box_model(g, h, weights, radius, params, solver, &inner);
    rep.inner_iterations += inner;
    const double pred = -box_model_value(g, h, weights, radius, params.box_lambda, z);
    const double denom = std::max(std::abs(fx), 1e-300);
    last_rel_pred = pred / denom;
    if (!(pred > 1e-15 * denom)) {
      rep.converged = true;
      rep.termination = "model predicts no decrease";
      break;
    }
    const Vector trial = x + z;
    const double ft = f.value(trial);
    const double rho = (fx - ft) / pred;
    const double radius_used = radius;
    rep.rhos.push_back(rho);
    if (trace)
      std::fprintf(stderr, "  tr %3d R=%.3e pred=%.3e rho=%.4f F=%.12e max|z|=%.3e inner=%d\n", it, radius, pred, rho,
                   ft, z.cwiseAbs().maxCoeff(), inner);
    if (rho > params.eta1 && ft < fx) {
      last_rel_change = std::abs(ft - fx) / denom;
      x = trial;
      fx = ft;
      ++rep.accepted;
      rep.accepted_energies.push_back(fx);
      if (rho >= params.eta2) radius *= params.grow;
      // A step cut off by the box says nothing about stationarity.
      const bool box_limited = z.cwiseAbs().maxCoeff() >= params.box_active_fraction * radius_used;
      if (last_rel_change <= params.tol_pf && !box_limited) {
        rep.converged = true;
        rep.termination = "relative change in F below tol_pf";
        break;
      }
      g = f.gradient(x);
      h = f.hessian(x);
    } else {
      ++rep.rejected;
      radius *= params.shrink;
      if (radius < params.r_min) {
        const double measure = rep.accepted > 0 ? last_rel_change : last_rel_pred;
        if (measure <= 10.0 * params.tol_pf) {
          rep.converged = true;
          rep.termination = "radius below r_min with small relative change";
          break;
        }
        throw SolverError("TR stalled: radius " + fmt_sci(radius) + " below r_min after " + std::to_string(it + 1) +
                          " iterations (F = " + fmt17(fx) + ", accepted " + std::to_string(rep.accepted) +
                          ", last relative change " + fmt_sci(measure) + ")");
      }
    }
  }
  if (!rep.converged) rep.termination = "max_outer reached";
  rep.final_radius = radius;
  return x;
}

}  // namespace fraktur
