// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/operators.hpp"

#include "simg/rng.hpp"
#include "simg/threads.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace simg {

CVector LinearOperator::apply(const CVector& x) const {
  CMatrix y;
  apply(x, y);
  return y.col(0);
}

CVector LinearOperator::apply_adjoint(const CVector& y) const {
  CMatrix x;
  apply_adjoint(y, x);
  return x.col(0);
}

namespace {

// Single right-hand-side products partition the columns of the matrix into
// one block per thread; the forward product sums the block partials in block
// order. Multi-RHS products go straight to Eigen's GEMM.
void dense_apply(const CMatrix& m, const CMatrix& x, CMatrix& y) {
  configure_eigen_threads();
#ifdef _OPENMP
  if (x.cols() == 1 && thread_count() > 1) {
    const int nb = thread_count();
    const Index chunk = (m.cols() + nb - 1) / nb;
    CMatrix partial = CMatrix::Zero(m.rows(), nb);
#pragma omp parallel for schedule(static) num_threads(nb)
    for (int b = 0; b < nb; ++b) {
      const Index lo = b * chunk;
      if (lo >= m.cols()) continue;
      const Index len = std::min(chunk, m.cols() - lo);
      partial.col(b).noalias() = m.middleCols(lo, len) * x.block(lo, 0, len, 1);
    }
    y.resize(m.rows(), 1);
    y.col(0) = partial.col(0);
    for (int b = 1; b < nb; ++b) y.col(0) += partial.col(b);
    return;
  }
#endif
  y.noalias() = m * x;
}

void dense_apply_adjoint(const CMatrix& m, const CMatrix& y, CMatrix& x) {
  configure_eigen_threads();
#ifdef _OPENMP
  if (y.cols() == 1 && thread_count() > 1) {
    const int nb = thread_count();
    const Index chunk = (m.cols() + nb - 1) / nb;
    x.resize(m.cols(), 1);
#pragma omp parallel for schedule(static) num_threads(nb)
    for (int b = 0; b < nb; ++b) {
      const Index lo = b * chunk;
      if (lo >= m.cols()) continue;
      const Index len = std::min(chunk, m.cols() - lo);
      x.block(lo, 0, len, 1).noalias() = m.middleCols(lo, len).adjoint() * y.col(0);
    }
    return;
  }
#endif
  x.noalias() = m.adjoint() * y;
}

}  // namespace

void DenseOperator::apply(const CMatrix& x, CMatrix& y) const { dense_apply(*m_, x, y); }

void DenseOperator::apply_adjoint(const CMatrix& y, CMatrix& x) const { dense_apply_adjoint(*m_, y, x); }

void AugmentedOperator::apply(const CMatrix& x, CMatrix& y) const {
  CMatrix ya, yc;
  dense_apply(*a_, x.topRows(a_->cols()), ya);
  dense_apply(*c_, x.bottomRows(c_->cols()), yc);
  y = ya + yc;
}

void AugmentedOperator::apply_adjoint(const CMatrix& y, CMatrix& x) const {
  x.resize(cols(), y.cols());
  CMatrix xa, xc;
  dense_apply_adjoint(*a_, y, xa);
  dense_apply_adjoint(*c_, y, xc);
  x.topRows(a_->cols()) = xa;
  x.bottomRows(c_->cols()) = xc;
}

double estimate_operator_norm(const LinearOperator& op, int iterations, std::uint64_t seed) {
  GaussianStream g(seed);
  CVector v = g.cnormal_vector(op.cols());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    CVector w = op.apply_adjoint(op.apply(v));
    lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
  }
  return std::sqrt(lambda);
}

}  // namespace simg
