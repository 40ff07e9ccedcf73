// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/resolution.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "simg/rng.hpp"
#include "simg/threads.hpp"

namespace simg {

namespace {
constexpr Index kGramBlock = 256;
}

double mutual_coherence(const CMatrix& a) {
  if (a.cols() < 2) throw std::invalid_argument("mutual_coherence: needs at least two columns");
  configure_eigen_threads();
  double worst = 0.0;
  for (Index j0 = 0; j0 < a.cols(); j0 += kGramBlock) {
    const Index nb = std::min(kGramBlock, a.cols() - j0);
    CMatrix g = a.adjoint() * a.middleCols(j0, nb);
    for (Index j = 0; j < nb; ++j)
      for (Index i = 0; i < a.cols(); ++i) {
        if (i == j0 + j) continue;
        worst = std::max(worst, std::abs(g(i, j)));
      }
  }
  return worst;
}

Index min_coherent_neighbor_count(const CMatrix& a, double threshold) {
  configure_eigen_threads();
  Index min_count = a.cols();
  for (Index j0 = 0; j0 < a.cols(); j0 += kGramBlock) {
    const Index nb = std::min(kGramBlock, a.cols() - j0);
    CMatrix g = a.adjoint() * a.middleCols(j0, nb);
    for (Index j = 0; j < nb; ++j) {
      Index count = 0;
      for (Index i = 0; i < a.cols(); ++i) {
        if (i == j0 + j) continue;
        if (std::abs(g(i, j)) >= threshold) ++count;
      }
      min_count = std::min(min_count, count);
    }
  }
  return min_count;
}

VicinityMap compute_vicinities(const CMatrix& a, const std::vector<Index>& support, int sparsity) {
  if (support.empty()) throw std::invalid_argument("compute_vicinities: empty support");
  if (sparsity != static_cast<int>(support.size()))
    throw std::invalid_argument("compute_vicinities: sparsity must equal the support size");
  for (Index j : support)
    if (j < 0 || j >= a.cols()) throw std::invalid_argument("compute_vicinities: support index out of range");

  const double thr = 1.0 / (3.0 * sparsity);
  CMatrix a_t(a.rows(), support.size());
  for (std::size_t j = 0; j < support.size(); ++j) a_t.col(j) = a.col(support[j]);
  CMatrix g = a.adjoint() * a_t;  // cols(a) x |T|

  VicinityMap map;
  map.support = support;
  map.vicinities.resize(support.size());
  map.union_mask.assign(a.cols(), 0);
  std::vector<int> owner(a.cols(), -1);
  map.overlap_free = true;
  for (std::size_t j = 0; j < support.size(); ++j) {
    for (Index k = 0; k < a.cols(); ++k) {
      if (std::abs(g(k, j)) < thr) continue;
      map.vicinities[j].push_back(k);
      if (owner[k] >= 0 && owner[k] != static_cast<int>(j)) map.overlap_free = false;
      owner[k] = static_cast<int>(j);
      if (!map.union_mask[k]) {
        map.union_mask[k] = 1;
        map.union_indices.push_back(k);
      }
    }
  }
  std::sort(map.union_indices.begin(), map.union_indices.end());
  return map;
}

double coherent_misfit(const GridSupport& rho, const CVector& eta, const CMatrix& a,
                       const VicinityMap& map) {
  if (rho.indices != map.support)
    throw std::invalid_argument("coherent_misfit: vicinity map was not built from rho's support");
  if (eta.size() < a.cols()) throw std::invalid_argument("coherent_misfit: eta shorter than the image");

  double total = 0.0;
  for (std::size_t j = 0; j < map.support.size(); ++j) {
    const CVector aj = a.col(map.support[j]);
    Complex acc(0.0, 0.0);
    for (Index k : map.vicinities[j]) acc += aj.dot(a.col(k)) * eta(k);
    total += std::abs(rho.values[j] - acc);
  }
  return total;
}

double incoherent_remainder(const CVector& eta, const VicinityMap& map) {
  const Index mask_len = static_cast<Index>(map.union_mask.size());
  double total = 0.0;
  for (Index k = 0; k < eta.size(); ++k)
    if (k >= mask_len || !map.union_mask[k]) total += std::abs(eta(k));
  return total;
}

double max_coherence_within(const CMatrix& a, const std::vector<Index>& subset) {
  double worst = 0.0;
  for (std::size_t j = 1; j < subset.size(); ++j) {
    const CVector aj = a.col(subset[j]);
    for (std::size_t i = 0; i < j; ++i)
      worst = std::max(worst, std::abs(a.col(subset[i]).dot(aj)));
  }
  return worst;
}

double estimate_gamma(const LinearOperator& op, const GammaProtocol& protocol) {
  if (protocol.trials < 1) throw std::invalid_argument("estimate_gamma: trials must be >= 1");
  const Index rows = op.rows();

  std::vector<CVector> directions;
  directions.reserve(protocol.trials + (protocol.include_canonical ? rows : 0));
  if (protocol.include_canonical)
    for (Index i = 0; i < rows; ++i) {
      CVector e = CVector::Zero(rows);
      e(i) = Complex(1.0, 0.0);
      directions.push_back(std::move(e));
    }
  GaussianStream rng(protocol.seed);
  for (int t = 0; t < protocol.trials; ++t) {
    CVector c = rng.cnormal_vector(rows);
    c.normalize();
    directions.push_back(std::move(c));
  }

  const double tau_rel = protocol.solver.tau > 0.0 ? protocol.solver.tau : 0.1;
  double gamma = 0.0;
  const Index batch = std::max<Index>(1, protocol.batch);
  for (std::size_t lo = 0; lo < directions.size(); lo += batch) {
    const Index nb = std::min<Index>(batch, directions.size() - lo);
    CMatrix b(rows, nb);
    for (Index t = 0; t < nb; ++t) b.col(t) = directions[lo + t];
    CMatrix corr;
    op.apply_adjoint(b, corr);
    RVector taus(nb);
    for (Index t = 0; t < nb; ++t) taus(t) = tau_rel * corr.col(t).cwiseAbs().maxCoeff();

    GelmaSettings settings = protocol.solver;
    settings.tau = 0.0;
    BatchSolveResult solved;
    try {
      solved = gelma_solve_batch(op, b, settings, taus);
    } catch (const SolverDivergence& e) {
      throw SolverDivergence(std::string(e.what()) + " (gamma trial block starting at " +
                                 std::to_string(lo) + ", seed " + std::to_string(protocol.seed) + ")",
                             e.iteration);
    }
    for (Index t = 0; t < nb; ++t)
      gamma = std::max(gamma, solved.solutions.col(t).lpNorm<1>());
  }
  return gamma;
}

EigenvalueBoundsReport hermitian_eigenvalue_bounds(const CMatrix& b, double c) {
  if (b.rows() != b.cols()) throw std::invalid_argument("hermitian_eigenvalue_bounds: matrix not square");
  const Index m = b.rows();
  if (c < 0.0) throw std::invalid_argument("hermitian_eigenvalue_bounds: c must be nonnegative");
  if ((m - 1) * c >= 1.0)
    throw std::invalid_argument("hermitian_eigenvalue_bounds: (M-1)c must be below 1");
  for (Index i = 0; i < m; ++i) {
    if (std::abs(b(i, i) - Complex(1.0, 0.0)) > 1e-9)
      throw std::invalid_argument("hermitian_eigenvalue_bounds: diagonal must be one");
    for (Index j = 0; j < m; ++j) {
      if (i == j) continue;
      if (std::abs(b(i, j)) > c * (1.0 + 1e-12))
        throw std::invalid_argument("hermitian_eigenvalue_bounds: off-diagonal entry exceeds c");
      if (std::abs(b(i, j) - std::conj(b(j, i))) > 1e-9)
        throw std::invalid_argument("hermitian_eigenvalue_bounds: matrix not Hermitian");
    }
  }

  EigenvalueBoundsReport report;
  report.lower = 1.0 - (m - 1) * c;
  report.upper = 1.0 + (m - 1) * c;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(b, Eigen::EigenvaluesOnly);
  const RVector& lambda = eig.eigenvalues();
  report.holds = true;
  for (Index i = 0; i < m; ++i)
    if (lambda(i) < report.lower - 1e-12 || lambda(i) > report.upper + 1e-12) report.holds = false;
  return report;
}

VicinityExtent vicinity_extent(const VicinityMap& map, std::size_t which, const ImagingConfig& config) {
  if (which >= map.vicinities.size())
    throw std::invalid_argument("vicinity_extent: no such support entry");
  const std::vector<Index>& s = map.vicinities[which];
  if (s.empty()) return {};
  Index rmin = config.grid_rows, rmax = -1, cmin = config.grid_cols, cmax = -1;
  for (Index k : s) {
    const Index row = k / config.grid_cols, col = k % config.grid_cols;
    rmin = std::min(rmin, row);
    rmax = std::max(rmax, row);
    cmin = std::min(cmin, col);
    cmax = std::max(cmax, col);
  }
  return {rmax - rmin + 1, cmax - cmin + 1};
}

}  // namespace simg
