#include <gtest/gtest.h>

#include <random>

#include "sla/errors.hpp"
#include "sla/solver.hpp"

namespace sla {
namespace {

SparseMatrix identity(int n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

/// Random sparse, diagonally dominant (hence well-conditioned) matrix.
SparseMatrix random_system(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < n; ++r) {
    double row_sum = 0.0;
    for (int k = 0; k < 5; ++k) {
      const int c = col(rng);
      if (c == r) continue;
      const double v = u(rng);
      t.emplace_back(r, c, v);
      row_sum += std::abs(v);
    }
    t.emplace_back(r, r, row_sum + 1.0 + std::abs(u(rng)));
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Vector random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = u(rng);
  return b;
}

TEST(Solver, IdentityReturnsRhs) {
  std::mt19937_64 rng(1);
  const Vector b = random_vector(17, rng);
  for (SolverMethod m : {SolverMethod::Direct, SolverMethod::Iterative}) {
    const SolveResult r = solve(identity(17), b, {m, 1e-12, 100});
    EXPECT_LT((r.solution - b).norm(), 1e-14 * b.norm());
  }
}

TEST(Solver, ZeroRhsGivesZeroWithoutIterations) {
  for (SolverMethod m : {SolverMethod::Direct, SolverMethod::Iterative}) {
    const SolveResult r = solve(identity(9), Vector::Zero(9), {m, 1e-10, 100});
    EXPECT_EQ(r.solution, Vector::Zero(9));
    EXPECT_EQ(r.report.iterations, 0);
    EXPECT_EQ(r.report.residual_norm, 0.0);
  }
}

TEST(Solver, MatchesDenseLuOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const SparseMatrix A = random_system(50, rng);
    const Vector b = random_vector(50, rng);
    const Vector oracle = Eigen::MatrixXd(A).fullPivLu().solve(b);
    const SolveResult direct = solve(A, b, {SolverMethod::Direct, 1e-12, 10});
    EXPECT_LT((direct.solution - oracle).norm() / oracle.norm(), 1e-10);
    EXPECT_EQ(direct.report.method, "sparse-lu");
    const SolveResult iter = solve(A, b, {SolverMethod::Iterative, 1e-12, 500});
    EXPECT_LT((iter.solution - oracle).norm() / oracle.norm(), 1e-10);
    EXPECT_LE(iter.report.residual_norm, 1e-12);
  }
}

TEST(Solver, DirectPathIsDeterministic) {
  std::mt19937_64 rng(3);
  const SparseMatrix A = random_system(200, rng);
  const Vector b = random_vector(200, rng);
  const Vector x1 = solve(A, b).solution;
  const Vector x2 = solve(A, b).solution;
  EXPECT_EQ(x1, x2);
}

TEST(Solver, SingularMatrixBreaksDown) {
  SparseMatrix A(3, 3);
  A.insert(0, 0) = 1.0;
  A.insert(1, 1) = 1.0;
  Vector b(3);
  b << 1.0, 2.0, 3.0;
  EXPECT_THROW(solve(A, b), SolverBreakdown);
}

TEST(Solver, IterativeReportsNoConvergence) {
  std::mt19937_64 rng(4);
  // Indefinite, non-normal system with a very loose preconditioner budget.
  const SparseMatrix A = random_system(300, rng) - 3.0 * identity(300);
  const Vector b = random_vector(300, rng);
  EXPECT_THROW(solve(A, b, {SolverMethod::Iterative, 1e-15, 1}), NoConvergence);
}

TEST(Solver, RejectsMismatchedShapes) {
  EXPECT_THROW(solve(identity(3), Vector::Zero(4)), ValidationError);
  EXPECT_THROW(solve(identity(3), Vector::Ones(3), {SolverMethod::Direct, 0.0, 1}),
               ValidationError);
}

}  // namespace
}  // namespace sla
