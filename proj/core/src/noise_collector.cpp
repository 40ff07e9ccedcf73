// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/noise_collector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simg/rng.hpp"
#include "simg/threads.hpp"

namespace simg {

double GreedyDecomposition::coefficient_l1() const {
  double s = 0.0;
  for (const Complex& c : coefficients) s += std::abs(c);
  return s;
}

namespace {

constexpr Index kCandidateBatch = 256;

double threshold_for(int sparsity) { return 1.0 / (3.0 * sparsity); }

}  // namespace

NoiseCollector build_random_collector(const SensingMatrix& a, const RandomCollectorOptions& options) {
  if (options.sigma < 1) throw std::invalid_argument("build_random_collector: sigma must be >= 1");
  if (options.sparsity < 1) throw std::invalid_argument("build_random_collector: sparsity must be >= 1");
  const Index ns = a.rows();
  const Index k = a.cols();
  const double cap =
      options.coherence_cap < 0.0 ? threshold_for(options.sparsity) : options.coherence_cap;
  const bool screened = std::isfinite(cap);
  const double entry_scale = 1.0 / std::sqrt(static_cast<double>(ns));

  NoiseCollector out;
  out.kind = NoiseCollector::Kind::random;
  out.columns.resize(ns, options.sigma);

  GaussianStream rng(options.seed);
  Index accepted = 0;
  long rejections = 0;
  double achieved = 0.0;
  Index worst_i = -1, worst_j = -1;
  double worst_violation = 0.0;

  CMatrix batch(ns, kCandidateBatch);
  while (accepted < options.sigma) {
    const Index batch_n = kCandidateBatch;
    for (Index j = 0; j < batch_n; ++j) {
      for (Index i = 0; i < ns; ++i) batch(i, j) = rng.cnormal() * entry_scale;
      batch.col(j).normalize();
    }

    if (!screened) {
      const Index take = std::min(batch_n, options.sigma - accepted);
      out.columns.middleCols(accepted, take) = batch.leftCols(take);
      accepted += take;
      continue;
    }

    // screen the whole batch against A and the accepted columns with two
    // GEMMs, then against earlier accepted members of the same batch
    CMatrix cross = a.entries.adjoint() * batch.leftCols(batch_n);  // K x nb
    CMatrix intra;
    if (accepted > 0) intra = out.columns.leftCols(accepted).adjoint() * batch.leftCols(batch_n);
    CMatrix within = batch.leftCols(batch_n).adjoint() * batch.leftCols(batch_n);

    std::vector<Index> accepted_in_batch;
    for (Index j = 0;
         j < batch_n && accepted + static_cast<Index>(accepted_in_batch.size()) < options.sigma;
         ++j) {
      double worst = 0.0;
      Index worst_other = -1;
      for (Index i = 0; i < k; ++i) {
        const double v = std::abs(cross(i, j));
        if (v > worst) {
          worst = v;
          worst_other = i;
        }
      }
      if (accepted > 0)
        for (Index i = 0; i < accepted; ++i) {
          const double v = std::abs(intra(i, j));
          if (v > worst) {
            worst = v;
            worst_other = k + i;
          }
        }
      for (std::size_t p = 0; p < accepted_in_batch.size(); ++p) {
        const double v = std::abs(within(accepted_in_batch[p], j));
        if (v > worst) {
          worst = v;
          worst_other = k + accepted + static_cast<Index>(p);
        }
      }

      if (worst < cap) {
        out.columns.col(accepted + accepted_in_batch.size()) = batch.col(j);
        accepted_in_batch.push_back(j);
        achieved = std::max(achieved, worst);
      } else {
        ++rejections;
        if (worst > worst_violation) {
          worst_violation = worst;
          worst_i = worst_other;
          worst_j = k + accepted + static_cast<Index>(accepted_in_batch.size());
        }
        if (rejections > options.max_rejections)
          throw CollectorInfeasible(
              "build_random_collector: rejection budget exhausted after accepting " +
                  std::to_string(accepted + accepted_in_batch.size()) + " of " +
                  std::to_string(options.sigma) + " columns (tightest violation |<d_" +
                  std::to_string(worst_i) + ", d_" + std::to_string(worst_j) +
                  ">| = " + std::to_string(worst_violation) + "); sigma too large for this N and M",
              accepted + static_cast<Index>(accepted_in_batch.size()), worst_i, worst_j,
              worst_violation);
      }
    }
    accepted += static_cast<Index>(accepted_in_batch.size());
  }

  if (screened) out.certified_bound = achieved;
  return out;
}

NoiseCollector build_greedy_frame(const CMatrix& a, const GreedyFrameOptions& options) {
  if (options.sparsity < 1) throw std::invalid_argument("build_greedy_frame: sparsity must be >= 1");
  if (a.rows() < 1) throw std::invalid_argument("build_greedy_frame: ambient dimension must be >= 1");
  const Index dim = a.rows();
  const double thr = threshold_for(options.sparsity);

  std::vector<CVector> frame;
  frame.reserve(static_cast<std::size_t>(a.cols()) + 64);
  for (Index j = 0; j < a.cols(); ++j) frame.push_back(a.col(j));

  GaussianStream rng(options.seed);
  auto draw = [&]() {
    CVector v(dim);
    if (options.real_valued)
      for (Index i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), 0.0);
    else
      for (Index i = 0; i < dim; ++i) v(i) = rng.cnormal();
    const double n = v.norm();
    if (n > 0.0) v /= n;
    return v;
  };

  const Index base = a.cols();
  double achieved = 0.0;
  int fail_streak = 0;
  std::vector<Index> offenders;
  while (fail_streak < options.candidate_budget) {
    CVector v = draw();
    bool ok = false;
    double candidate_max = 0.0;
    for (int pass = 0; pass <= options.correction_passes; ++pass) {
      candidate_max = 0.0;
      offenders.clear();
      for (std::size_t i = 0; i < frame.size(); ++i) {
        const double c = std::abs(frame[i].dot(v));
        candidate_max = std::max(candidate_max, c);
        if (c >= thr) offenders.push_back(static_cast<Index>(i));
      }
      if (offenders.empty()) {
        ok = true;
        break;
      }
      if (pass == options.correction_passes) break;
      for (Index i : offenders) v -= frame[i] * frame[i].dot(v);
      const double n = v.norm();
      if (n < 1e-10) break;
      v /= n;
    }
    if (ok) {
      frame.push_back(v);
      achieved = std::max(achieved, candidate_max);
      fail_streak = 0;
    } else {
      ++fail_streak;
    }
  }

  NoiseCollector out;
  out.kind = NoiseCollector::Kind::greedy;
  out.certified_bound = achieved;
  out.columns.resize(dim, static_cast<Index>(frame.size()) - base);
  for (Index j = base; j < static_cast<Index>(frame.size()); ++j)
    out.columns.col(j - base) = frame[j];

  // empirical certificate of the stopping property on random unit vectors
  GaussianStream cert_rng(splitmix64(options.seed ^ 0xCE47CE47CE47CE47ULL));
  double min_max_inner = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.stopping_samples; ++s) {
    CVector b(dim);
    if (options.real_valued)
      for (Index i = 0; i < dim; ++i) b(i) = Complex(cert_rng.normal(), 0.0);
    else
      for (Index i = 0; i < dim; ++i) b(i) = cert_rng.cnormal();
    b.normalize();
    double best = 0.0;
    for (const CVector& d : frame) best = std::max(best, std::abs(d.dot(b)));
    min_max_inner = std::min(min_max_inner, best);
  }
  out.stopping_property_samples = options.stopping_samples;
  out.stopping_property_margin = options.stopping_samples > 0 ? min_max_inner : 0.0;
  out.stopping_property_certified = options.stopping_samples > 0 && min_max_inner > thr;
  return out;
}

GreedyDecomposition greedy_decompose(const CVector& b, const CMatrix& frame, int sparsity,
                                     double tol) {
  if (sparsity < 1) throw std::invalid_argument("greedy_decompose: sparsity must be >= 1");
  if (frame.cols() < 1) throw std::invalid_argument("greedy_decompose: empty frame");
  if (!(tol > 0.0)) throw std::invalid_argument("greedy_decompose: tol must be positive");
  const double scale = b.norm();
  if (scale == 0.0) throw std::invalid_argument("greedy_decompose: zero vector");

  const double alpha = std::sqrt(1.0 - 1.0 / (9.0 * sparsity * sparsity));
  const int max_steps = static_cast<int>(std::ceil(std::log(tol) / std::log(alpha))) + 8;

  GreedyDecomposition out;
  CVector residual = b / scale;
  out.residual_norms.push_back(1.0);

  double bound = 1.0;
  for (int n = 1; n <= max_steps; ++n) {
    CVector corr = frame.adjoint() * residual;
    Index best = 0;
    double best_mag = 0.0;
    for (Index j = 0; j < corr.size(); ++j) {
      const double m = std::abs(corr(j));
      if (m > best_mag) {
        best_mag = m;
        best = j;
      }
    }
    const Complex coeff = corr(best);
    residual -= coeff * frame.col(best);
    const double rn = residual.norm();

    out.picked_indices.push_back(best);
    out.coefficients.push_back(coeff * scale);
    out.residual_norms.push_back(rn);

    bound *= alpha;
    if (rn > bound * (1.0 + 1e-12))
      throw CertificationError("greedy_decompose: residual " + std::to_string(rn) + " exceeds alpha^" +
                               std::to_string(n) + " = " + std::to_string(bound) +
                               "; the frame does not satisfy the stopping property");
    if (rn <= tol) return out;
  }
  throw CertificationError("greedy_decompose: tolerance not reached within the contraction budget");
}

CoherenceCertificate certify_coherence(const CMatrix& a, const CMatrix& c, int sparsity,
                                       const CertifyOptions& options) {
  if (sparsity < 1) throw std::invalid_argument("certify_coherence: sparsity must be >= 1");
  if (a.cols() > 0 && c.rows() > 0 && a.rows() != c.rows())
    throw std::invalid_argument("certify_coherence: row dimensions differ");

  CoherenceCertificate cert;
  cert.threshold = threshold_for(sparsity);

  auto consider = [&cert](Index i, Index j, double v) {
    if (v > cert.worst_value) {
      cert.worst_value = v;
      cert.worst_i = i;
      cert.worst_j = j;
    }
  };

  const Index k = a.cols(), sigma = c.cols();
  if (options.sample_pairs > 0) {
    cert.exhaustive = false;
    GaussianStream rng(options.seed);
    auto pick = [&rng](Index n) { return static_cast<Index>(rng.uniform() * n) % n; };
    for (long s = 0; s < options.sample_pairs; ++s) {
      if (k > 0 && (sigma < 2 || s % 2 == 0)) {
        const Index i = pick(k), j = pick(sigma);
        consider(i, k + j, std::abs(a.col(i).dot(c.col(j))));
      } else if (sigma >= 2) {
        Index i = pick(sigma), j = pick(sigma);
        if (i == j) j = (j + 1) % sigma;
        consider(k + i, k + j, std::abs(c.col(i).dot(c.col(j))));
      }
    }
  } else {
    constexpr Index kBlock = 512;
    for (Index j0 = 0; j0 < sigma; j0 += kBlock) {
      const Index nb = std::min(kBlock, sigma - j0);
      if (k > 0) {
        CMatrix g = a.adjoint() * c.middleCols(j0, nb);
        for (Index j = 0; j < nb; ++j)
          for (Index i = 0; i < k; ++i) consider(i, k + j0 + j, std::abs(g(i, j)));
      }
      CMatrix g = c.leftCols(j0 + nb).adjoint() * c.middleCols(j0, nb);
      for (Index j = 0; j < nb; ++j)
        for (Index i = 0; i < j0 + j; ++i) consider(k + i, k + j0 + j, std::abs(g(i, j)));
    }
  }

  cert.ok = cert.worst_value < cert.threshold;
  return cert;
}

}  // namespace simg
