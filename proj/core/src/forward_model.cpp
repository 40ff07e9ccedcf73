// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/forward_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "simg/rng.hpp"
#include "simg/threads.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace simg {

void ImagingConfig::validate() const {
  if (receiver_positions.empty()) throw std::invalid_argument("ImagingConfig.receiver_positions: empty");
  if (frequencies.empty()) throw std::invalid_argument("ImagingConfig.frequencies: empty");
  for (double w : frequencies)
    if (!(w > 0.0)) throw std::invalid_argument("ImagingConfig.frequencies: must be positive");
  for (std::size_t l = 1; l < frequencies.size(); ++l)
    if (frequencies[l] <= frequencies[l - 1])
      throw std::invalid_argument("ImagingConfig.frequencies: must be strictly increasing");
  if (!(wave_speed > 0.0)) throw std::invalid_argument("ImagingConfig.wave_speed: must be positive");
  if (grid_rows < 1 || grid_cols < 1) throw std::invalid_argument("ImagingConfig.grid_shape: needs rows, cols >= 1");
  if (!(grid_spacing > 0.0)) throw std::invalid_argument("ImagingConfig.grid_spacing: must be positive");
}

void SourceScene::validate(const ImagingConfig& config) const {
  if (sources.empty()) throw std::invalid_argument("SourceScene.sources: empty");
  const double lo_x = config.grid_origin.x(), lo_y = config.grid_origin.y();
  const double hi_x = lo_x + (config.grid_rows - 1) * config.grid_spacing;
  const double hi_y = lo_y + (config.grid_cols - 1) * config.grid_spacing;
  for (std::size_t j = 0; j < sources.size(); ++j) {
    if (sources[j].amplitude == Complex(0.0, 0.0))
      throw std::invalid_argument("SourceScene.sources[" + std::to_string(j) + "].amplitude: zero");
    const Point& p = sources[j].position;
    if (p.x() < lo_x - config.grid_spacing || p.x() > hi_x + config.grid_spacing ||
        p.y() < lo_y - config.grid_spacing || p.y() > hi_y + config.grid_spacing)
      throw std::invalid_argument("SourceScene.sources[" + std::to_string(j) +
                                  "].position: outside the image window");
  }
}

CVector GridSupport::dense() const {
  CVector v = CVector::Zero(length);
  for (std::size_t i = 0; i < indices.size(); ++i) v(indices[i]) = values[i];
  return v;
}

CVector GridSupport::dense_normalized(const SensingMatrix& matrix) const {
  CVector v = CVector::Zero(length);
  for (std::size_t i = 0; i < indices.size(); ++i)
    v(indices[i]) = values[i] * matrix.column_norms_original(indices[i]);
  return v;
}

Complex green_function(const Point& x, const Point& y, double omega, double wave_speed) {
  const double r = (x - y).norm();
  if (r == 0.0) throw std::domain_error("green_function: coincident points");
  return std::exp(Complex(0.0, omega * r / wave_speed)) / (4.0 * kPi * r);
}

CVector green_vector(const Point& y, double omega, const ImagingConfig& config) {
  const Index n = config.receiver_count();
  CVector g(n);
  for (Index r = 0; r < n; ++r) {
    if ((config.receiver_positions[r] - y).norm() == 0.0)
      throw std::domain_error("green_vector: point coincides with receiver " + std::to_string(r));
    g(r) = green_function(config.receiver_positions[r], y, omega, config.wave_speed);
  }
  return g;
}

SensingMatrix build_sensing_matrix(const ImagingConfig& config) {
  config.validate();
  const Index n = config.receiver_count(), s = config.frequency_count(), k_total = config.pixel_count();
  SensingMatrix m;
  m.entries.resize(n * s, k_total);
  m.column_norms_original.resize(k_total);

  std::string error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
  for (Index k = 0; k < k_total; ++k) {
    const Point y = config.grid_point(k);
    for (Index r = 0; r < n; ++r) {
      const double dist = (config.receiver_positions[r] - y).norm();
      if (dist == 0.0) {
#ifdef _OPENMP
#pragma omp critical
#endif
        error = "build_sensing_matrix: pixel " + std::to_string(k) + " coincides with receiver " +
                std::to_string(r);
        continue;
      }
      for (Index l = 0; l < s; ++l)
        m.entries(l * n + r, k) =
            std::exp(Complex(0.0, config.frequencies[l] * dist / config.wave_speed)) / (4.0 * kPi * dist);
    }
    const double norm = m.entries.col(k).norm();
    m.column_norms_original(k) = norm;
    if (norm > 0.0) m.entries.col(k) /= norm;
  }
  if (!error.empty()) throw std::domain_error(error);
  return m;
}

DataVector synthesize_data(const SourceScene& scene, const ImagingConfig& config) {
  config.validate();
  scene.validate(config);
  const Index n = config.receiver_count(), s = config.frequency_count();
  DataVector b = DataVector::Zero(n * s);
  for (const PointSource& src : scene.sources) {
    for (Index r = 0; r < n; ++r) {
      const double dist = (config.receiver_positions[r] - src.position).norm();
      if (dist == 0.0)
        throw std::domain_error("synthesize_data: source coincides with receiver " + std::to_string(r));
      for (Index l = 0; l < s; ++l)
        b(l * n + r) += src.amplitude *
                        std::exp(Complex(0.0, config.frequencies[l] * dist / config.wave_speed)) /
                        (4.0 * kPi * dist);
    }
  }
  return b;
}

GridSupport nearest_grid_support(const SourceScene& scene, const ImagingConfig& config) {
  config.validate();
  scene.validate(config);
  GridSupport out;
  out.length = config.pixel_count();

  auto linf = [&](const Point& p, Index row, Index col) {
    const Point g = config.grid_origin + Point(row * config.grid_spacing, col * config.grid_spacing, 0.0);
    return std::max({std::abs(p.x() - g.x()), std::abs(p.y() - g.y()), std::abs(p.z() - g.z())});
  };

  std::vector<std::pair<Index, Complex>> hits;
  for (std::size_t j = 0; j < scene.sources.size(); ++j) {
    const Point& p = scene.sources[j].position;
    const double fr = (p.x() - config.grid_origin.x()) / config.grid_spacing;
    const double fc = (p.y() - config.grid_origin.y()) / config.grid_spacing;
    const Index r0 = static_cast<Index>(std::floor(fr)), c0 = static_cast<Index>(std::floor(fc));

    Index best = -1;
    double best_dist = 0.0;
    // candidates are the four cell corners; the lowest row-major index is
    // visited first, so ties resolve to it automatically
    for (Index dr = 0; dr <= 1; ++dr)
      for (Index dc = 0; dc <= 1; ++dc) {
        const Index row = r0 + dr, col = c0 + dc;
        if (row < 0 || row >= config.grid_rows || col < 0 || col >= config.grid_cols) continue;
        const double d = linf(p, row, col);
        if (best < 0 || d < best_dist) {
          best = row * config.grid_cols + col;
          best_dist = d;
        }
      }
    if (best < 0 || best_dist >= config.grid_spacing)
      throw std::invalid_argument("nearest_grid_support: source " + std::to_string(j) +
                                  " is a full grid spacing away from every node");
    hits.emplace_back(best, scene.sources[j].amplitude);
  }

  std::sort(hits.begin(), hits.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [k, amp] : hits) {
    if (!out.indices.empty() && out.indices.back() == k)
      out.values.back() += amp;  // shared node: amplitudes accumulate
    else {
      out.indices.push_back(k);
      out.values.push_back(amp);
    }
  }
  return out;
}

DataVector add_noise(const DataVector& b, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db)) throw std::invalid_argument("add_noise: snr_db is not a number");
  if (snr_db == kNoNoise) return b;
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite or +inf");
  const double b_norm = b.norm();
  if (b_norm == 0.0) throw std::invalid_argument("add_noise: data vector is zero");

  GaussianStream g(seed);
  CVector delta = g.cnormal_vector(b.size());
  const double target = b_norm * std::pow(10.0, -snr_db / 20.0);
  delta *= target / delta.norm();
  return b + delta;
}

}  // namespace simg
