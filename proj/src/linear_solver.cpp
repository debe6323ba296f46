#include "fraktur/linear_solver.hpp"

#include <algorithm>
#include <cmath>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"
#include "fraktur/simd/kernels.hpp"

namespace fraktur {

LinearSolverKind parse_linear_solver(std::string_view name) {
  if (name == "ldlt") return LinearSolverKind::Ldlt;
  if (name == "cg") return LinearSolverKind::Cg;
  throw InvalidArgument("unknown linear solver '" + std::string(name) + "' (expected ldlt or cg)");
}

SpdSolver::SpdSolver(LinearSolverKind kind, double tolerance) : kind_(kind), tolerance_(tolerance) {}

bool SpdSolver::factorize(const SparseMatrix& a) {
  const bool same = analyzed_ && outer_.size() == static_cast<std::size_t>(a.outerSize() + 1) &&
                    inner_.size() == static_cast<std::size_t>(a.nonZeros()) &&
                    std::equal(outer_.begin(), outer_.end(), a.outerIndexPtr()) &&
                    std::equal(inner_.begin(), inner_.end(), a.innerIndexPtr());
  if (!same) {
    ldlt_.analyzePattern(a);
    outer_.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1);
    inner_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    analyzed_ = true;
  }
  ldlt_.factorize(a);
  if (ldlt_.info() != Eigen::Success) return false;
  const Vector d = ldlt_.vectorD();
  return d.size() == 0 || d.minCoeff() > 0.0;
}

namespace {

double pivot_ratio(const Vector& d) {
  if (d.size() == 0) return 1.0;
  const double lo = d.cwiseAbs().minCoeff();
  const double hi = d.cwiseAbs().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

Vector SpdSolver::solve(const SparseMatrix& a, const Vector& b, LinearSolveReport* report) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("linear system dimensions disagree");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (report) *report = {};
    return Vector::Zero(b.size());
  }
  if (kind_ == LinearSolverKind::Cg) return solve_cg(a, b, report);

  if (!factorize(a))
    throw SolverError("sparse LDL^T failed: matrix is not positive definite (pivot ratio " +
                      fmt_sci(pivot_ratio(ldlt_.vectorD())) + ")");
  Vector x = ldlt_.solve(b);
  double rel = (a * x - b).norm() / bnorm;
  int sweeps = 0;
  while (rel > tolerance_ && sweeps < 3) {
    x += ldlt_.solve(b - a * x);
    rel = (a * x - b).norm() / bnorm;
    ++sweeps;
  }
  if (!(rel <= tolerance_))
    throw SolverError("displacement solve reached relative residual " + fmt_sci(rel) + " > " + fmt_sci(tolerance_) +
                      " (pivot ratio " + fmt_sci(pivot_ratio(ldlt_.vectorD())) + ")");
  if (report) *report = {sweeps, rel, 0.0};
  return x;
}

Vector SpdSolver::solve_shifted(const SparseMatrix& a, const Vector& b, LinearSolveReport* report) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("linear system dimensions disagree");
  const double dmax = std::max(a.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  double shift = 0.0;
  SparseMatrix shifted = a;
  for (int attempt = 0; attempt < 40; ++attempt) {
    if (factorize(shifted)) {
      last_shift_ = shift;
      Vector x = ldlt_.solve(b);
      if (report) *report = {0, b.norm() > 0 ? (shifted * x - b).norm() / b.norm() : 0.0, shift};
      return x;
    }
    const double next = shift == 0.0 ? std::max(1e-10 * dmax, 0.1 * last_shift_) : 10.0 * shift;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += next - shift;
    shift = next;
  }
  throw SolverError("could not make the Hessian positive definite by diagonal shifting");
}

Vector SpdSolver::solve_cg(const SparseMatrix& a, const Vector& b, LinearSolveReport* report) {
  const simd::KernelTable& k = simd::kernels();
  const auto n = static_cast<std::size_t>(b.size());
  Vector inv_diag = a.diagonal();
  for (Eigen::Index i = 0; i < inv_diag.size(); ++i) {
    if (!(inv_diag[i] > 0.0)) throw SolverError("CG requires a positive diagonal");
    inv_diag[i] = 1.0 / inv_diag[i];
  }
  const double bnorm = std::sqrt(k.dot(n, b.data(), b.data()));
  // Iterate to a tighter recursive residual so the true residual meets the tolerance.
  const double target = 0.1 * tolerance_ * bnorm;
  Vector x = Vector::Zero(b.size());
  Vector r = b;
  Vector z(b.size()), p(b.size()), q(b.size());
  k.multiply(n, inv_diag.data(), r.data(), z.data());
  p = z;
  double rz = k.dot(n, r.data(), z.data());
  const int max_iter = static_cast<int>(std::max<std::size_t>(100, 20 * n));
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(k.dot(n, r.data(), r.data())) <= target) break;
    q.noalias() = a * p;
    const double alpha = rz / k.dot(n, p.data(), q.data());
    k.axpy(n, alpha, p.data(), x.data());
    k.axpy(n, -alpha, q.data(), r.data());
    k.multiply(n, inv_diag.data(), r.data(), z.data());
    const double rz_new = k.dot(n, r.data(), z.data());
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[static_cast<Eigen::Index>(i)] = z[static_cast<Eigen::Index>(i)] + beta * p[static_cast<Eigen::Index>(i)];
  }
  const double rel = (a * x - b).norm() / bnorm;
  if (!(rel <= tolerance_))
    throw SolverError("conjugate gradients stopped at relative residual " + fmt_sci(rel) + " after " +
                      std::to_string(it) + " iterations");
  if (report) *report = {it, rel, 0.0};
  return x;
}

}  // namespace fraktur
