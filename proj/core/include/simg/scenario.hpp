// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simg/forward_model.hpp"
#include "simg/types.hpp"

namespace simg {

// Scenario files are versioned JSON. All physical quantities are in units of
// the reference wavelength lambda0 and center frequency omega0 (c0 = 1,
// omega0 = 2*pi): geometry is described by the aperture-to-range ratio a/L,
// the bandwidth ratio 2B/omega0, and the range L, which is how the
// experiments are naturally parameterized.
//
// The master seed fans out to per-stage seeds through
// stage_seed(master, stage): stage 0 = measurement noise, 1 = collector,
// 2 = gamma estimation, 3 = greedy frame. Adding stages never perturbs the
// streams of earlier ones.

struct ScenarioImaging {
  int receivers = 0;
  int frequencies = 0;
  double aperture_over_range = 0.0;  // a / L
  double bandwidth_ratio = 0.0;      // 2B / omega0; 0 = single frequency
  double range = 0.0;                // L
  Index grid_rows = 0;
  Index grid_cols = 0;
  double grid_spacing = 0.0;
};

struct ScenarioSource {
  double range_offset = 0.0;  // from the window center, along range
  double cross_offset = 0.0;  // along cross-range
  Complex amplitude;
};

struct ScenarioCollector {
  enum class Kind { none, random, greedy };
  Kind kind = Kind::none;
  Index sigma = 0;
  // "strict" = 1/(3M) rejection screening, "none" = accept as drawn (the
  // full-scale default; see NoiseCollector), or a numeric cap.
  double screening_cap = std::numeric_limits<double>::infinity();
  long max_rejections = 1000000;
  int greedy_budget = 500;
  int greedy_samples = 1000;
};

struct ScenarioSolver {
  double tau_relative = 0.1;  // times ||D^H b||_inf
  std::optional<double> tau_absolute;
  int max_iters = 20000;
  // Unset defaults resolve at run time: 1e-8 absolute for noiseless runs,
  // 1e-3 * ||b||_2 for noisy ones.
  std::optional<double> residual_tol_relative;
  std::optional<double> residual_tol_absolute;
  double change_tol = 1e-10;
};

struct ScenarioGamma {
  int trials = 0;  // 0 = skip gamma estimation
  std::optional<bool> include_canonical;
  int max_iters = 2000;
};

struct Scenario {
  int version = 1;
  std::string name;
  std::uint64_t seed = 0;
  ScenarioImaging imaging;
  std::vector<ScenarioSource> sources;
  bool positions_approximate = false;
  double snr_db = kNoNoise;
  ScenarioCollector collector;
  ScenarioSolver solver;
  ScenarioGamma gamma;
  std::vector<std::string> outputs;

  std::string source_path;  // where it was loaded from, if any
};

/// Parses and validates a scenario file. Parse failures report line and
/// column; validation failures name the offending field.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text, const std::string& origin = "<string>");

/// Receiver line array along cross-range, frequencies spanning the bandwidth,
/// image window centered at (L, 0).
ImagingConfig make_imaging_config(const ScenarioImaging& imaging);
SourceScene make_scene(const Scenario& scenario, const ImagingConfig& config);

}  // namespace simg
