#include <doctest.h>

#include "fraktur/error.hpp"
#include "fraktur/fem_assembly.hpp"
#include "fraktur/linear_solver.hpp"

using namespace fraktur;

namespace {

SparseMatrix laplacian_1d(int n, double shift) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 + shift);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

TEST_CASE("identity system") {
  SparseMatrix id(4, 4);
  id.setIdentity();
  Vector e1 = Vector::Zero(4);
  e1[0] = 1.0;
  for (auto kind : {LinearSolverKind::Ldlt, LinearSolverKind::Cg}) {
    SpdSolver s(kind);
    CHECK(s.solve(id, e1) == e1);
    CHECK(s.solve(id, Vector::Zero(4)).isZero(0.0));
  }
}

TEST_CASE("LDLT and CG agree on an SPD system") {
  const SparseMatrix a = laplacian_1d(200, 0.01);
  Vector b = Vector::LinSpaced(200, -1.0, 1.0);
  SpdSolver ldlt(LinearSolverKind::Ldlt), cg(LinearSolverKind::Cg);
  LinearSolveReport r;
  const Vector x1 = ldlt.solve(a, b);
  const Vector x2 = cg.solve(a, b, &r);
  CHECK(r.iterations > 0);
  CHECK(r.relative_residual <= 1e-10);
  CHECK((x1 - x2).norm() <= 1e-7 * x1.norm());
  // Same pattern, new values: the symbolic analysis is reused.
  const SparseMatrix a2 = laplacian_1d(200, 0.5);
  CHECK((a2 * ldlt.solve(a2, b) - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("shifted solve on an indefinite matrix") {
  const SparseMatrix a = laplacian_1d(50, -1.0);  // eigenvalues in (-1, 3)
  const Vector b = Vector::Ones(50);
  SpdSolver s;
  LinearSolveReport r;
  const Vector x = s.solve_shifted(a, b, &r);
  CHECK(r.shift > 0.0);
  SparseMatrix shifted = a;
  for (int i = 0; i < 50; ++i) shifted.coeffRef(i, i) += r.shift;
  CHECK((shifted * x - b).norm() <= 1e-8 * b.norm());
  // A positive definite matrix gets no shift.
  s.solve_shifted(laplacian_1d(50, 0.1), b, &r);
  CHECK(r.shift == 0.0);
}

TEST_CASE("singular and mismatched systems") {
  SparseMatrix z(3, 3);
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = 0.0;
  z.insert(2, 2) = 1.0;
  SpdSolver s;
  CHECK_THROWS_AS(s.solve(z, Vector::Ones(3)), SolverError);
  CHECK_THROWS_AS(s.solve(laplacian_1d(3, 0.0), Vector::Ones(4)), InvalidArgument);
  CHECK(parse_linear_solver("cg") == LinearSolverKind::Cg);
  CHECK_THROWS_AS(parse_linear_solver("gmres"), InvalidArgument);
}
