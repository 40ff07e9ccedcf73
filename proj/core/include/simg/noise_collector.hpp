// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "simg/forward_model.hpp"
#include "simg/types.hpp"

namespace simg {

// Fictitious unit columns appended to the sensing matrix so that noise can be
// absorbed by nonphysical unknowns. Columns must be decorrelated below
// 1/(3M) from the image columns and from each other for the theory to apply;
// builders record the coherence bound they actually achieved.
struct NoiseCollector {
  enum class Kind { random, greedy };

  CMatrix columns;  // (N*S) x Sigma, unit l2 columns
  // Max coherence observed while screening, NaN when screening was disabled.
  double certified_bound = std::numeric_limits<double>::quiet_NaN();
  Kind kind = Kind::random;

  // Greedy builds only: empirical check of the stopping property (for random
  // unit b some frame vector has |<d_k, b>| > 1/(3M)).
  bool stopping_property_certified = false;
  double stopping_property_margin = 0.0;  // min over samples of max_k |<d_k, b>|
  int stopping_property_samples = 0;

  Index sigma() const { return columns.cols(); }
};

struct GreedyDecomposition {
  std::vector<Index> picked_indices;
  std::vector<Complex> coefficients;   // in the scale of the input vector
  std::vector<double> residual_norms;  // normalized scale; [0] = 1, [n] <= alpha^n

  double coefficient_l1() const;
};

class CollectorInfeasible : public std::runtime_error {
 public:
  CollectorInfeasible(const std::string& what, Index accepted, Index worst_i, Index worst_j,
                      double worst_value)
      : std::runtime_error(what),
        accepted(accepted),
        worst_i(worst_i),
        worst_j(worst_j),
        worst_value(worst_value) {}
  Index accepted;
  Index worst_i, worst_j;  // column ids in [A | C] order
  double worst_value;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RandomCollectorOptions {
  Index sigma = 0;
  int sparsity = 1;  // M in the 1/(3M) thresholds
  std::uint64_t seed = 0;
  long max_rejections = 1000000;
  // Screening cap on any coherence involving a candidate. Negative selects
  // the 1/(3M) threshold; +infinity disables screening (candidates are
  // accepted as drawn and no bound is recorded), which is how collectors at
  // the full experiment scale are built: i.i.d. Gaussian coherences
  // concentrate near 1/sqrt(NS) but their extremes over ~1e8 pairs exceed
  // 1/(3M), so a strict screen cannot reach Sigma ~ 1e4 there.
  double coherence_cap = -1.0;
};

/// Draws i.i.d. circular complex Gaussian columns (entry variance 1/(N*S)),
/// normalizes each exactly, and rejects candidates that violate the
/// screening cap against A and previously accepted columns. The candidate
/// stream is counted, so results are bit-identical for a fixed seed
/// regardless of batching. Throws CollectorInfeasible when the rejection
/// budget runs out.
NoiseCollector build_random_collector(const SensingMatrix& a, const RandomCollectorOptions& options);

struct GreedyFrameOptions {
  int sparsity = 1;
  std::uint64_t seed = 0;
  int candidate_budget = 500;  // consecutive failures before stopping
  bool real_valued = false;    // draw real candidates (real frames)
  int correction_passes = 4;   // project-out-and-renormalize repair attempts
  int stopping_samples = 1000;
};

/// Constructive frame from the saturation argument: starting from the
/// columns of `a` (may have zero columns), repeatedly searches for a unit
/// vector whose inner product with every existing frame vector stays below
/// 1/(3M), repairing near misses by projecting out the violated directions.
/// Stops after `candidate_budget` consecutive failures and then certifies the
/// stopping property on random unit vectors.
NoiseCollector build_greedy_frame(const CMatrix& a, const GreedyFrameOptions& options);

/// Matching-pursuit expansion of b over the unit-column frame: picks the
/// column with maximal |<d_k, residual>|, subtracts the projection, and
/// repeats until the normalized residual reaches tol. Throws
/// CertificationError if the residual ever contracts slower than
/// alpha = sqrt(1 - 1/(9 M^2)), which falsifies the stopping property.
GreedyDecomposition greedy_decompose(const CVector& b, const CMatrix& frame, int sparsity, double tol);

struct CoherenceCertificate {
  bool ok = false;
  Index worst_i = -1, worst_j = -1;  // column ids in [A | C] order
  double worst_value = 0.0;
  bool exhaustive = true;
  double threshold = 0.0;
};

struct CertifyOptions {
  // 0 = exhaustive; otherwise the number of random pairs sampled (used at
  // full experiment scale where the exhaustive check is quadratic in Sigma).
  long sample_pairs = 0;
  std::uint64_t seed = 0;
};

/// Max cross coherence |<a_i, c_j>| and intra coherence |<c_i, c_j>|;
/// ok iff both are below 1/(3M).
CoherenceCertificate certify_coherence(const CMatrix& a, const CMatrix& c, int sparsity,
                                       const CertifyOptions& options = {});

}  // namespace simg
