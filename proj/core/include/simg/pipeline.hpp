// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simg/scenario.hpp"
#include "simg/sparse_solver.hpp"
#include "simg/types.hpp"

namespace simg {

// One scenario = one pipeline run: build the model, synthesize and corrupt
// the data, solve, analyze, write the requested artifacts, and record a
// manifest. Re-running the same scenario with the same seeds reproduces all
// numeric artifacts byte-identically; manifest timings are the only
// run-dependent values.

struct DiagnosticsSummary {
  double co = 0.0;            // coherent misfit against the true support
  double in_image = 0.0;      // grass within the image window
  double in_augmented = 0.0;  // grass including collector coefficients
  double l1_true = 0.0;       // ||rho_true||_1 in the normalized system
  double delta = 0.0;         // ||b_delta - b||_2 (0 for noiseless runs)
  std::vector<double> support_ratios;  // best-in-vicinity magnitude / true, per source
  bool overlap_free = false;
  double max_union_coherence = 0.0;  // collinearity diagnostic for the union
  std::optional<double> gamma;
  std::optional<double> collector_bound;  // screened builds only
};

struct SolverSummary {
  int iterations = 0;
  double residual_l2 = 0.0;
  bool converged = false;
  double tau = 0.0;
};

struct RunManifest {
  int manifest_version = 1;
  std::string scenario_name;
  std::string scenario_hash;  // fingerprint of the scenario file, "" if inline
  std::uint64_t seed = 0;
  Index data_length = 0;  // N*S
  Index pixel_count = 0;  // K
  Index sigma = 0;        // collector columns, 0 when none
  Index grid_rows = 0, grid_cols = 0;
  double grid_spacing = 0.0;
  bool positions_approximate = false;
  SolverSummary solver;
  DiagnosticsSummary diagnostics;
  std::map<std::string, std::string> artifacts;  // kind -> path
  std::map<std::string, double> timings_ms;
  std::string path;  // where the manifest file lives
};

struct ExportPaths {
  std::string image_csv;
  std::string collector_csv;
  std::string diagnostics_json;
};

/// Writes the image and collector parts as CSV plus a diagnostics JSON file.
ExportPaths export_vectors(const SolveResult& result, Index image_length, const std::string& prefix,
                           const SolverSummary& solver, const DiagnosticsSummary& diagnostics);

/// Runs the full pipeline and writes artifacts under out_dir. Pipeline errors
/// carry the stage name; validation errors name the offending field.
RunManifest run_scenario(const Scenario& scenario, const std::string& out_dir);

RunManifest load_manifest(const std::string& path);

/// JSON report of paired metrics and their ratios (b over a; equal values
/// give ratio 1, a zero denominator gives null). Grids must be compatible.
std::string compare_runs(const RunManifest& a, const RunManifest& b);

// Output tokens accepted in a scenario's "outputs" list.
//   l1_heatmap, l2_heatmap, overlay, image_csv, collector_csv, diagnostics,
//   matrix_cache, collector_cache
bool is_known_output(const std::string& token);

}  // namespace simg
