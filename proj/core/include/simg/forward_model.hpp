// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "simg/types.hpp"

namespace simg {

// Physical model for passive array imaging: free-space Green's functions,
// Green's vectors, the multi-frequency sensing matrix, and synthetic data.
//
// Conventions used throughout:
//  - lengths are in units of the reference wavelength lambda0,
//  - data vectors stack the receiver index fastest and the frequency index
//    slowest: entry (l*N + r) is receiver r at frequency l, frequencies in
//    increasing order,
//  - the image grid is row-major: pixel k has row k/cols and column k%cols;
//    rows step along the range axis (x), columns along cross-range (y).

struct ImagingConfig {
  std::vector<Point> receiver_positions;  // length N
  std::vector<double> frequencies;        // angular, increasing, length S
  double wave_speed = 1.0;                // c0

  Point grid_origin = Point::Zero();
  Index grid_rows = 0;
  Index grid_cols = 0;
  double grid_spacing = 0.0;

  // Declared geometry scalars for the classical resolution formulas.
  double aperture = 0.0;  // a
  double range = 0.0;     // L

  Index receiver_count() const { return static_cast<Index>(receiver_positions.size()); }
  Index frequency_count() const { return static_cast<Index>(frequencies.size()); }
  Index pixel_count() const { return grid_rows * grid_cols; }
  Index data_length() const { return receiver_count() * frequency_count(); }

  Point grid_point(Index k) const {
    Index row = k / grid_cols, col = k % grid_cols;
    return grid_origin + Point(row * grid_spacing, col * grid_spacing, 0.0);
  }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PointSource {
  Point position;
  Complex amplitude;
};

struct SourceScene {
  std::vector<PointSource> sources;

  Index size() const { return static_cast<Index>(sources.size()); }
  /// Amplitudes must be nonzero and positions inside the grid bounding box.
  void validate(const ImagingConfig& config) const;
};

// Column-normalized sensing matrix. The original (pre-normalization) column
// norms are kept so data synthesized from raw Green's functions stays
// consistent with the normalized system: an on-grid source of amplitude
// alpha at pixel k has coefficient alpha * column_norms_original[k].
struct SensingMatrix {
  CMatrix entries;                 // (N*S) x K, unit columns
  RVector column_norms_original;   // length K, positive

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

// Sparse true-source vector on the grid (support indices sorted ascending).
struct GridSupport {
  Index length = 0;
  std::vector<Index> indices;
  std::vector<Complex> values;

  CVector dense() const;
  /// Dense vector in the normalized system: values scaled by the recorded
  /// original column norms.
  CVector dense_normalized(const SensingMatrix& matrix) const;
};

using DataVector = CVector;

/// Free-space Green's function exp(i*omega*|x-y|/c0) / (4*pi*|x-y|).
/// Throws std::domain_error when x and y coincide.
Complex green_function(const Point& x, const Point& y, double omega, double wave_speed);

/// Array response to a unit source at y: component r is the Green's function
/// from y to receiver r. Reports the offending receiver index on error.
CVector green_vector(const Point& y, double omega, const ImagingConfig& config);

/// Stacks g(y_k; omega_1) ... g(y_k; omega_S) per pixel, then rescales every
/// column to unit l2 norm. Column assembly runs in parallel over pixels.
SensingMatrix build_sensing_matrix(const ImagingConfig& config);

/// Synthetic array data for the (generally off-grid) sources of the scene,
/// summed from raw Green's functions in the documented stacking order.
DataVector synthesize_data(const SourceScene& scene, const ImagingConfig& config);

/// Places each amplitude at the grid node nearest in the l-infinity metric;
/// equidistant ties go to the lowest row-major index. Sources mapping to the
/// same node accumulate. Throws if a source is a full grid spacing or more
/// away from every node.
GridSupport nearest_grid_support(const SourceScene& scene, const ImagingConfig& config);

/// b + delta_b with i.i.d. circular complex Gaussian delta_b rescaled so that
/// 20*log10(|b|/|delta_b|) equals snr_db exactly. snr_db = +infinity returns
/// b unchanged; deterministic given the seed.
DataVector add_noise(const DataVector& b, double snr_db, std::uint64_t seed);

}  // namespace simg
