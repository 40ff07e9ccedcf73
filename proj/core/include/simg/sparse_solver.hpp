// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "simg/forward_model.hpp"
#include "simg/operators.hpp"
#include "simg/types.hpp"

namespace simg {

struct GelmaSettings {
  double tau = 0.0;           // sparsity weight
  double primal_step = 0.0;   // <= 0: auto, 0.99 / sigma_max(D)^2
  double dual_step = 0.0;     // <= 0: same as primal_step
  int max_iters = 20000;
  double residual_tol = 1e-8;   // on ||D rho - b||_2
  double change_tol = 1e-10;    // on the relative primal iterate change
  int power_iterations = 30;    // for the auto step size
  bool record_history = false;  // keep per-iteration residual norms
};

struct SolveResult {
  CVector solution;       // length cols(D)
  CVector dual;           // length rows(D)
  double residual_l2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // only when record_history is set
};

// Multi right-hand-side solve; column t of `solutions` solves against column
// t of B. Used by the gamma estimator where hundreds of directions share one
// matrix.
struct BatchSolveResult {
  CMatrix solutions;
  CMatrix duals;
  std::vector<double> residual_l2;
  std::vector<int> iterations;
  std::vector<bool> converged;
};

class SolverDivergence : public std::runtime_error {
 public:
  SolverDivergence(const std::string& what, int iteration)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

/// Componentwise complex soft threshold: v_k * max(1 - t/|v_k|, 0).
CVector soft_threshold(const CVector& v, double t);

// Semi-implicit primal-dual iteration for the l1 saddle functional
//   F(rho, z) = tau*||rho||_1 + 1/2*||D rho - b||_2^2 + <z, b - D rho>,
// from rho = 0, z = 0:
//   rho <- soft_threshold(rho + beta * D^H (z + b - D rho), beta * tau)
//   z   <- z + alpha_d * (b - D rho)          (with the updated rho)
// Stops on residual_tol, change_tol, or max_iters. For consistent systems
// the limit is the minimal-l1-norm solution regardless of tau.
//
// Throws std::invalid_argument if the configured step violates
// primal_step * sigma_max(D)^2 < 1, and SolverDivergence on non-finite
// iterates.
SolveResult gelma_solve(const LinearOperator& op, const CVector& b, const GelmaSettings& settings);
SolveResult gelma_solve(const SensingMatrix& matrix, const CVector& b, const GelmaSettings& settings);

BatchSolveResult gelma_solve_batch(const LinearOperator& op, const CMatrix& b_columns,
                                   const GelmaSettings& settings);
/// Overload with an individual tau per right-hand side (settings.tau ignored).
BatchSolveResult gelma_solve_batch(const LinearOperator& op, const CMatrix& b_columns,
                                   const GelmaSettings& settings, const RVector& tau_per_column);

/// Kirchhoff migration, the l2 baseline image A^H b.
CVector kirchhoff_migration(const SensingMatrix& matrix, const DataVector& b);

/// First image_length entries vs. the (possibly empty) collector remainder.
std::pair<CVector, CVector> split_solution(const SolveResult& result, Index image_length);

}  // namespace simg
