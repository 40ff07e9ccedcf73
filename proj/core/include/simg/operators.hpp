// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "simg/types.hpp"

namespace simg {

// Complex linear map with adjoint, the only interface the solvers need.
// Implementations must be bitwise deterministic for a fixed thread count;
// parallel reductions accumulate column-block partials in increasing block
// order.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  // y = D x, for one right-hand side per column of x.
  virtual void apply(const CMatrix& x, CMatrix& y) const = 0;
  // x = D^H y.
  virtual void apply_adjoint(const CMatrix& y, CMatrix& x) const = 0;

  CVector apply(const CVector& x) const;
  CVector apply_adjoint(const CVector& y) const;
};

// View over a dense matrix (not owned).
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(const CMatrix& m) : m_(&m) {}

  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  Index rows() const override { return m_->rows(); }
  Index cols() const override { return m_->cols(); }
  void apply(const CMatrix& x, CMatrix& y) const override;
  void apply_adjoint(const CMatrix& y, CMatrix& x) const override;

  const CMatrix& matrix() const { return *m_; }

 private:
  const CMatrix* m_;
};

// [A | C] without materializing the concatenation (neither block owned).
class AugmentedOperator final : public LinearOperator {
 public:
  AugmentedOperator(const CMatrix& a, const CMatrix& c) : a_(&a), c_(&c) {}

  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  Index rows() const override { return a_->rows(); }
  Index cols() const override { return a_->cols() + c_->cols(); }
  void apply(const CMatrix& x, CMatrix& y) const override;
  void apply_adjoint(const CMatrix& y, CMatrix& x) const override;

  Index left_cols() const { return a_->cols(); }

 private:
  const CMatrix* a_;
  const CMatrix* c_;
};

/// Largest singular value of D, estimated by power iteration on D^H D from a
/// seeded Gaussian start (an estimate from below as the iteration converges).
double estimate_operator_norm(const LinearOperator& op, int iterations = 30,
                              std::uint64_t seed = 0x5eed5eedULL);

}  // namespace simg
