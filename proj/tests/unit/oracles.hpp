// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

// Test-only oracles, independent of the library code paths they check.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "simg/scenario.hpp"
#include "simg/types.hpp"

namespace oracle {

// Direct cosine/sine evaluation of the free-space kernel.
inline simg::Complex green(const simg::Point& x, const simg::Point& y, double omega, double c0) {
  const double dx = x.x() - y.x(), dy = x.y() - y.y(), dz = x.z() - y.z();
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  const double phase = omega * r / c0;
  const double amp = 1.0 / (4.0 * simg::kPi * r);
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

// Brute-force double loop over sources and measurements.
inline simg::CVector data(const std::vector<simg::PointSource>& sources,
                          const simg::ImagingConfig& config) {
  const simg::Index n = config.receiver_count(), s = config.frequency_count();
  simg::CVector b = simg::CVector::Zero(n * s);
  for (simg::Index l = 0; l < s; ++l)
    for (simg::Index r = 0; r < n; ++r)
      for (const simg::PointSource& src : sources)
        b(l * n + r) += src.amplitude *
                        green(config.receiver_positions[r], src.position, config.frequencies[l],
                              config.wave_speed);
  return b;
}

// Exhaustive basis pursuit for real underdetermined systems: an optimal
// solution of min ||x||_1 s.t. Ax = b is basic, so it suffices to scan all
// supports of size rows(A) and solve the square subsystems exactly.
inline double basis_pursuit_min_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                   Eigen::VectorXd* best_x = nullptr) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  std::vector<int> support(m);
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> comb(m);
  for (int i = 0; i < m; ++i) comb[i] = i;
  auto advance = [&]() {
    int i = m - 1;
    while (i >= 0 && comb[i] == n - m + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };

  do {
    Eigen::MatrixXd sub(m, m);
    for (int j = 0; j < m; ++j) sub.col(j) = a.col(comb[j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd xs = lu.solve(b);
    if ((sub * xs - b).norm() > 1e-9 * (1.0 + b.norm())) continue;
    const double l1 = xs.lpNorm<1>();
    if (l1 < best) {
      best = l1;
      if (best_x != nullptr) {
        best_x->setZero(n);
        for (int j = 0; j < m; ++j) (*best_x)(comb[j]) = xs(j);
      }
    }
  } while (advance());
  return best;
}

// Small helper shared by tests: a physical configuration from the same
// ratio parameterization the scenarios use.
inline simg::ImagingConfig config(int receivers, int frequencies, double aperture_over_range,
                                  double bandwidth_ratio, double range, simg::Index rows,
                                  simg::Index cols, double spacing) {
  simg::ScenarioImaging im;
  im.receivers = receivers;
  im.frequencies = frequencies;
  im.aperture_over_range = aperture_over_range;
  im.bandwidth_ratio = bandwidth_ratio;
  im.range = range;
  im.grid_rows = rows;
  im.grid_cols = cols;
  im.grid_spacing = spacing;
  return simg::make_imaging_config(im);
}

}  // namespace oracle
