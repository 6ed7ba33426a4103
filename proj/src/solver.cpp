#include "sla/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "sla/errors.hpp"

namespace sla {

namespace {

double relative_residual(const SparseMatrix& A, const Vector& u, const Vector& b, double bnorm) {
  return (A * u - b).norm() / bnorm;
}

SolveResult solve_direct(const SparseMatrix& A, const Vector& b, const SolverOptions& opts,
                         double bnorm) {
  // SparseLU wants column-major storage.
  const Eigen::SparseMatrix<double> Ac = A;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(Ac);
  lu.factorize(Ac);
  if (lu.info() != Eigen::Success) {
    throw SolverBreakdown("sparse LU factorization failed: " + lu.lastErrorMessage());
  }
  SolveResult out;
  out.report.method = "sparse-lu";
  out.solution = lu.solve(b);
  if (!out.solution.allFinite()) throw SolverBreakdown("sparse LU produced non-finite values");
  double res = relative_residual(A, out.solution, b, bnorm);
  for (int k = 0; k < 3 && res > opts.tol; ++k) {
    const Vector r = b - A * out.solution;
    out.solution += lu.solve(r);
    res = relative_residual(A, out.solution, b, bnorm);
    ++out.report.iterations;
  }
  out.report.residual_norm = res;
  if (!(res <= opts.tol)) {
    std::ostringstream msg;
    msg << "direct solve residual " << res << " exceeds tolerance " << opts.tol;
    throw SolverBreakdown(msg.str());
  }
  return out;
}

SolveResult solve_iterative(const SparseMatrix& A, const Vector& b, const SolverOptions& opts,
                            double bnorm) {
  const Eigen::SparseMatrix<double> Ac = A;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-6);
  solver.setTolerance(opts.tol);
  solver.setMaxIterations(opts.max_iter);
  solver.compute(Ac);
  if (solver.info() != Eigen::Success) {
    throw SolverBreakdown("incomplete LU preconditioner failed");
  }
  SolveResult out;
  out.report.method = "bicgstab-ilut";
  out.solution = solver.solve(b);
  out.report.iterations = static_cast<int>(solver.iterations());
  out.report.residual_norm = relative_residual(A, out.solution, b, bnorm);
  if (solver.info() == Eigen::NoConvergence || out.report.residual_norm > opts.tol) {
    std::ostringstream msg;
    msg << "BiCGSTAB did not converge in " << solver.iterations() << " iterations (residual "
        << out.report.residual_norm << ")";
    throw NoConvergence(msg.str());
  }
  if (!out.solution.allFinite()) throw SolverBreakdown("BiCGSTAB produced non-finite values");
  return out;
}

}  // namespace

SolveResult solve(const SparseMatrix& A, const Vector& b, const SolverOptions& opts) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw ValidationError("solve: matrix must be square and match the right-hand side");
  }
  if (!(opts.tol > 0.0)) throw ValidationError("solve: tolerance must be positive");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    SolveResult zero;
    zero.solution = Vector::Zero(b.size());
    zero.report.method = opts.method == SolverMethod::Direct ? "sparse-lu" : "bicgstab-ilut";
    return zero;
  }
  return opts.method == SolverMethod::Direct ? solve_direct(A, b, opts, bnorm)
                                             : solve_iterative(A, b, opts, bnorm);
}

}  // namespace sla
