// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "simg/forward_model.hpp"
#include "simg/operators.hpp"
#include "simg/sparse_solver.hpp"
#include "simg/types.hpp"

namespace simg {

// Resolution theory built on vicinities: for a support column j, the set of
// columns whose coherence with it reaches 1/(3M). The support always belongs
// to its own vicinity.
struct VicinityMap {
  std::vector<Index> support;                  // T
  std::vector<std::vector<Index>> vicinities;  // S_j per support entry
  bool overlap_free = false;
  std::vector<Index> union_indices;  // sorted union of all S_j
  std::vector<char> union_mask;      // length = columns of A

  bool in_union(Index k) const {
    return k >= 0 && k < static_cast<Index>(union_mask.size()) && union_mask[k] != 0;
  }
};

struct MisfitReport {
  double coherent_misfit = 0.0;        // Co
  double incoherent_remainder = 0.0;   // In
  std::optional<double> gamma_estimate;
  double delta = 0.0;  // ||b - b_delta||_2 when known
};

/// Largest |<a_i, a_j>| over distinct unit columns. Needs >= 2 columns.
double mutual_coherence(const CMatrix& a);

/// Per-column count of other columns with coherence >= threshold, and the
/// minimum count over the grid (the quantity behind the coherence-count
/// claim). Computed blockwise, never materializing the full Gram matrix.
Index min_coherent_neighbor_count(const CMatrix& a, double threshold);

/// Vicinities S_j = { k : |<a_k, a_j>| >= 1/(3 M) } for each j in `support`.
/// M must equal the support size.
VicinityMap compute_vicinities(const CMatrix& a, const std::vector<Index>& support, int sparsity);

/// Co(rho, eta) = sum_j |rho_j - sum_{k in S_j} <a_j, a_k> eta_k|.
/// The map must have been built from rho's support against the same matrix.
double coherent_misfit(const GridSupport& rho, const CVector& eta, const CMatrix& a,
                       const VicinityMap& map);

/// In(rho, eta): l1 mass of eta outside the vicinity union. Entries of eta
/// beyond the mask length (e.g. collector coefficients of an augmented
/// solution) always count as outside.
double incoherent_remainder(const CVector& eta, const VicinityMap& map);

/// Largest coherence between distinct columns within a subset (collinearity
/// diagnostic for the vicinity union).
double max_coherence_within(const CMatrix& a, const std::vector<Index>& subset);

struct GammaProtocol {
  int trials = 100;          // random unit directions
  std::uint64_t seed = 0;
  // Also probe every canonical basis direction of the data space. The
  // operation's default; the full-scale experiment driver turns it off above
  // kCanonicalAutoLimit rows to keep the estimate tractable.
  bool include_canonical = true;
  GelmaSettings solver;  // solver.tau is relative to ||D^H c||_inf per direction
  Index batch = 64;
};

inline constexpr Index kCanonicalAutoLimit = 256;

/// Monte-Carlo lower estimate of gamma = sup_c ||xi||_1 / ||c||_2 with xi the
/// minimal-l1 solution of D xi = c: the max over sampled unit directions of
/// the solved ||xi||_1. Throws SolverDivergence (annotated with the trial)
/// if any solve diverges.
double estimate_gamma(const LinearOperator& op, const GammaProtocol& protocol);

struct EigenvalueBoundsReport {
  double lower = 0.0;
  double upper = 0.0;
  bool holds = false;
};

/// Spectral bounds for a Hermitian matrix with unit diagonal and off-diagonal
/// magnitudes at most c: every eigenvalue lies in [1-(M-1)c, 1+(M-1)c].
/// Computes the spectrum and verifies the bounds (1e-12 slack for round-off).
/// Requires (M-1)c < 1.
EigenvalueBoundsReport hermitian_eigenvalue_bounds(const CMatrix& b, double c);

// Bounding box of a vicinity in grid coordinates, split by axis (rows span
// the range direction, columns cross-range).
struct VicinityExtent {
  Index range_pixels = 0;
  Index cross_pixels = 0;
};

VicinityExtent vicinity_extent(const VicinityMap& map, std::size_t which, const ImagingConfig& config);

}  // namespace simg
