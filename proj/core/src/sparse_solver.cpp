// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/sparse_solver.hpp"

#include <cmath>
#include <string>

namespace simg {

CVector soft_threshold(const CVector& v, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  CVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = (mag <= t) ? Complex(0.0, 0.0) : v(i) * (1.0 - t / mag);
  }
  return out;
}

namespace {

void shrink_in_place(CMatrix& u, double t) {
  for (Index j = 0; j < u.cols(); ++j)
    for (Index i = 0; i < u.rows(); ++i) {
      const double mag = std::abs(u(i, j));
      u(i, j) = (mag <= t) ? Complex(0.0, 0.0) : u(i, j) * (1.0 - t / mag);
    }
}

void shrink_in_place(CMatrix& u, const RVector& t_per_column) {
  for (Index j = 0; j < u.cols(); ++j) {
    const double t = t_per_column(j);
    for (Index i = 0; i < u.rows(); ++i) {
      const double mag = std::abs(u(i, j));
      u(i, j) = (mag <= t) ? Complex(0.0, 0.0) : u(i, j) * (1.0 - t / mag);
    }
  }
}

BatchSolveResult run_gelma(const LinearOperator& op, const CMatrix& b_columns,
                           const GelmaSettings& settings, const RVector* tau_per_column,
                           std::vector<double>* history = nullptr) {
  if (op.cols() < 1) throw std::invalid_argument("gelma_solve: operator has no columns");
  if (b_columns.rows() != op.rows())
    throw std::invalid_argument("gelma_solve: data length does not match operator rows");
  if (settings.max_iters < 1) throw std::invalid_argument("gelma_solve: max_iters must be >= 1");
  if (settings.tau < 0.0) throw std::invalid_argument("gelma_solve: tau must be nonnegative");

  const double sigma = estimate_operator_norm(op, settings.power_iterations);
  double beta = settings.primal_step;
  if (beta <= 0.0) beta = (sigma > 0.0) ? 0.99 / (sigma * sigma) : 1.0;
  double alpha_d = settings.dual_step > 0.0 ? settings.dual_step : beta;
  if (beta * sigma * sigma >= 1.0)
    throw std::invalid_argument("gelma_solve: primal_step " + std::to_string(beta) +
                                " violates step-size safety against |D|^2 = " +
                                std::to_string(sigma * sigma));

  const Index t_count = b_columns.cols();
  BatchSolveResult out;
  out.solutions = CMatrix::Zero(op.cols(), t_count);
  out.duals = CMatrix::Zero(op.rows(), t_count);
  out.residual_l2.assign(t_count, 0.0);
  out.iterations.assign(t_count, 0);
  out.converged.assign(t_count, false);

  CMatrix rho = CMatrix::Zero(op.cols(), t_count);
  CMatrix z = CMatrix::Zero(op.rows(), t_count);
  CMatrix residual(op.rows(), t_count), u(op.cols(), t_count), applied(op.rows(), t_count);

  op.apply(rho, applied);
  residual = b_columns - applied;

  std::vector<double> resid_norm(t_count);
  bool all_done = true;
  for (Index t = 0; t < t_count; ++t) {
    resid_norm[t] = residual.col(t).norm();
    out.converged[t] = resid_norm[t] <= settings.residual_tol;
    all_done = all_done && out.converged[t];
  }

  int iter = 0;
  while (!all_done && iter < settings.max_iters) {
    ++iter;
    op.apply_adjoint(z + residual, u);
    u = rho + beta * u;
    if (tau_per_column != nullptr) {
      const RVector scaled = beta * (*tau_per_column);
      shrink_in_place(u, scaled);
    } else {
      shrink_in_place(u, beta * settings.tau);
    }

    std::vector<double> change(t_count);
    for (Index t = 0; t < t_count; ++t) change[t] = (u.col(t) - rho.col(t)).norm();
    rho.swap(u);

    op.apply(rho, applied);
    residual = b_columns - applied;
    z += alpha_d * residual;

    all_done = true;
    if (history != nullptr) history->push_back(residual.col(0).norm());
    for (Index t = 0; t < t_count; ++t) {
      resid_norm[t] = residual.col(t).norm();
      if (!std::isfinite(resid_norm[t]))
        throw SolverDivergence("gelma_solve: non-finite iterate at iteration " + std::to_string(iter),
                               iter);
      const double scale = rho.col(t).norm();
      const bool small_change = scale > 0.0 && change[t] <= settings.change_tol * scale;
      const bool small_residual = resid_norm[t] <= settings.residual_tol;
      if (!out.converged[t]) {
        out.iterations[t] = iter;
        if (small_residual || small_change) out.converged[t] = true;
      }
      all_done = all_done && out.converged[t];
    }
  }

  out.solutions = rho;
  out.duals = z;
  for (Index t = 0; t < t_count; ++t) out.residual_l2[t] = resid_norm[t];
  return out;
}

}  // namespace

SolveResult gelma_solve(const LinearOperator& op, const CVector& b, const GelmaSettings& settings) {
  SolveResult r;
  BatchSolveResult batch =
      run_gelma(op, b, settings, nullptr, settings.record_history ? &r.residual_history : nullptr);
  r.solution = batch.solutions.col(0);
  r.dual = batch.duals.col(0);
  r.residual_l2 = batch.residual_l2[0];
  r.iterations = batch.iterations[0];
  r.converged = batch.converged[0];
  return r;
}

SolveResult gelma_solve(const SensingMatrix& matrix, const CVector& b, const GelmaSettings& settings) {
  DenseOperator op(matrix.entries);
  return gelma_solve(op, b, settings);
}

BatchSolveResult gelma_solve_batch(const LinearOperator& op, const CMatrix& b_columns,
                                   const GelmaSettings& settings) {
  return run_gelma(op, b_columns, settings, nullptr);
}

BatchSolveResult gelma_solve_batch(const LinearOperator& op, const CMatrix& b_columns,
                                   const GelmaSettings& settings, const RVector& tau_per_column) {
  if (tau_per_column.size() != b_columns.cols())
    throw std::invalid_argument("gelma_solve_batch: one tau per right-hand side expected");
  return run_gelma(op, b_columns, settings, &tau_per_column);
}

CVector kirchhoff_migration(const SensingMatrix& matrix, const DataVector& b) {
  if (b.size() != matrix.rows())
    throw std::invalid_argument("kirchhoff_migration: data length does not match matrix rows");
  DenseOperator op(matrix.entries);
  return op.apply_adjoint(b);
}

std::pair<CVector, CVector> split_solution(const SolveResult& result, Index image_length) {
  if (result.solution.size() < image_length)
    throw std::invalid_argument("split_solution: solution shorter than the image part");
  return {result.solution.head(image_length),
          result.solution.tail(result.solution.size() - image_length)};
}

}  // namespace simg
