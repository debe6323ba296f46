#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fraktur/fem_assembly.hpp"

namespace fraktur {

enum class LinearSolverKind { Ldlt, Cg };

LinearSolverKind parse_linear_solver(std::string_view name);

struct LinearSolveReport {
  int iterations = 0;          ///< CG iterations or refinement sweeps
  double relative_residual = 0.0;
  double shift = 0.0;          ///< diagonal shift applied by solve_shifted
};

/// Sparse symmetric solver. The sparse LDL^T factorization keeps its symbolic
/// analysis while successive matrices share a sparsity pattern.
class SpdSolver {
 public:
  explicit SpdSolver(LinearSolverKind kind = LinearSolverKind::Ldlt, double tolerance = 1e-10);

  /// Solves A x = b for SPD A and checks ||A x - b|| <= tolerance ||b||.
  /// Throws SolverError with a conditioning estimate on failure.
  Vector solve(const SparseMatrix& a, const Vector& b, LinearSolveReport* report = nullptr);

  /// Solves (A + s I) x = b where s is 0 if A is positive definite, otherwise
  /// the first value of s0, 10 s0, 100 s0, ... giving positive LDL^T pivots.
  /// s0 is the larger of 1e-10 max|diag A| and a tenth of the previous shift.
  Vector solve_shifted(const SparseMatrix& a, const Vector& b, LinearSolveReport* report = nullptr);

  LinearSolverKind kind() const { return kind_; }

 private:
  bool factorize(const SparseMatrix& a);
  Vector solve_cg(const SparseMatrix& a, const Vector& b, LinearSolveReport* report);

  LinearSolverKind kind_;
  double tolerance_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  std::vector<int> outer_, inner_;
  bool analyzed_ = false;
  double last_shift_ = 0.0;
};

}  // namespace fraktur
