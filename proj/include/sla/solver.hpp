#pragma once

#include <string>

#include "sla/fem.hpp"

namespace sla {

enum class SolverMethod { Direct, Iterative };

struct SolverOptions {
  SolverMethod method = SolverMethod::Direct;
  double tol = 1e-8;///< relative residual ||A u - b|| / ||b||
  int max_iter = 2000;
};

struct SolveReport {
  double residual_norm = 0.0;  ///< relative
  int iterations = 0;          ///< 0 for the direct path without refinement
  std::string method;
};

struct SolveResult {
  Vector solution;
  SolveReport report;
};

/// Solves A u = b. The direct path is a sparse LU with partial pivoting and
/// COLAMD ordering, followed by up to three steps of iterative refinement if
/// the residual misses `tol`. The iterative path is BiCGSTAB with an
/// incomplete-LU preconditioner.
///
/// Throws SolverBreakdown when the factorization fails or the residual stays
/// above tol, NoConvergence when the iterative path runs out of iterations.
SolveResult solve(const SparseMatrix& A, const Vector& b, const SolverOptions& opts = {});

inline SolveResult solve(const SparseSystem& sys, const SolverOptions& opts = {}) {
  return solve(sys.matrix, sys.rhs, opts);
}

}  // namespace sla
