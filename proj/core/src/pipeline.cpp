// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "simg/io.hpp"
#include "simg/noise_collector.hpp"
#include "simg/resolution.hpp"
#include "simg/rng.hpp"

namespace simg {

namespace {

using nlohmann::json;

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename F>
  auto run(const std::string& stage, F&& f) -> decltype(f()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, start);
      } else {
        auto value = f();
        record(stage, start);
        return value;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("pipeline stage '" + stage + "': " + e.what());
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    sink_[stage] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  std::map<std::string, double>& sink_;
};

json diagnostics_json(const SolverSummary& solver, const DiagnosticsSummary& d) {
  json out;
  out["co"] = d.co;
  out["in_image"] = d.in_image;
  out["in_augmented"] = d.in_augmented;
  out["l1_true"] = d.l1_true;
  out["delta"] = d.delta;
  out["support_ratios"] = d.support_ratios;
  out["overlap_free"] = d.overlap_free;
  out["max_union_coherence"] = d.max_union_coherence;
  if (d.gamma) out["gamma"] = *d.gamma;
  if (d.collector_bound) out["collector_bound"] = *d.collector_bound;
  out["residual_l2"] = solver.residual_l2;
  out["iterations"] = solver.iterations;
  out["converged"] = solver.converged;
  out["tau"] = solver.tau;
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

bool is_known_output(const std::string& token) {
  static const std::set<std::string> known = {"l1_heatmap",  "l2_heatmap",      "overlay",
                                              "image_csv",   "collector_csv",   "diagnostics",
                                              "matrix_cache", "collector_cache"};
  return known.count(token) > 0;
}

ExportPaths export_vectors(const SolveResult& result, Index image_length, const std::string& prefix,
                           const SolverSummary& solver, const DiagnosticsSummary& diagnostics) {
  auto [image, collector] = split_solution(result, image_length);
  ExportPaths paths;
  paths.image_csv = prefix + "_image.csv";
  paths.collector_csv = prefix + "_collector.csv";
  paths.diagnostics_json = prefix + "_diagnostics.json";
  write_vector_csv(paths.image_csv, image);
  write_vector_csv(paths.collector_csv, collector);
  write_text(paths.diagnostics_json, diagnostics_json(solver, diagnostics).dump(2) + "\n");
  return paths;
}

RunManifest run_scenario(const Scenario& scenario, const std::string& out_dir) {
  for (const std::string& token : scenario.outputs)
    if (!is_known_output(token))
      throw std::invalid_argument("scenario field 'outputs': unknown token '" + token + "'");
  std::filesystem::create_directories(out_dir);
  const std::string prefix = (std::filesystem::path(out_dir) / scenario.name).string();
  const auto wants = [&](const char* token) {
    return std::find(scenario.outputs.begin(), scenario.outputs.end(), token) != scenario.outputs.end();
  };

  RunManifest manifest;
  manifest.scenario_name = scenario.name;
  manifest.seed = scenario.seed;
  if (!scenario.source_path.empty() && scenario.source_path != "<string>")
    manifest.scenario_hash = file_fingerprint(scenario.source_path);
  manifest.positions_approximate = scenario.positions_approximate;
  StageTimer timer(manifest.timings_ms);

  const ImagingConfig config = make_imaging_config(scenario.imaging);
  const SourceScene scene = make_scene(scenario, config);
  manifest.grid_rows = config.grid_rows;
  manifest.grid_cols = config.grid_cols;
  manifest.grid_spacing = config.grid_spacing;
  manifest.data_length = config.data_length();
  manifest.pixel_count = config.pixel_count();

  const SensingMatrix a = timer.run("build_matrix", [&] { return build_sensing_matrix(config); });
  const DataVector b = timer.run("synthesize", [&] { return synthesize_data(scene, config); });
  const GridSupport rho_true = nearest_grid_support(scene, config);

  DataVector b_delta = b;
  double delta = 0.0;
  if (scenario.snr_db != kNoNoise) {
    b_delta = timer.run("noise", [&] {
      return add_noise(b, scenario.snr_db, stage_seed(scenario.seed, SeedStage::noise));
    });
    delta = (b_delta - b).norm();
  }

  NoiseCollector collector;
  bool has_collector = false;
  if (scenario.collector.kind == ScenarioCollector::Kind::random) {
    collector = timer.run("collector", [&] {
      RandomCollectorOptions options;
      options.sigma = scenario.collector.sigma;
      options.sparsity = static_cast<int>(scene.size());
      options.seed = stage_seed(scenario.seed, SeedStage::collector);
      options.max_rejections = scenario.collector.max_rejections;
      options.coherence_cap = scenario.collector.screening_cap;
      return build_random_collector(a, options);
    });
    has_collector = true;
  } else if (scenario.collector.kind == ScenarioCollector::Kind::greedy) {
    collector = timer.run("collector", [&] {
      GreedyFrameOptions options;
      options.sparsity = static_cast<int>(scene.size());
      options.seed = stage_seed(scenario.seed, SeedStage::greedy_frame);
      options.candidate_budget = scenario.collector.greedy_budget;
      options.stopping_samples = scenario.collector.greedy_samples;
      return build_greedy_frame(a.entries, options);
    });
    has_collector = true;
  }
  manifest.sigma = has_collector ? collector.sigma() : 0;

  DenseOperator plain(a.entries);
  AugmentedOperator augmented(a.entries, collector.columns);
  const LinearOperator& op = has_collector ? static_cast<const LinearOperator&>(augmented) : plain;

  GelmaSettings settings;
  settings.max_iters = scenario.solver.max_iters;
  settings.change_tol = scenario.solver.change_tol;
  if (scenario.solver.residual_tol_absolute)
    settings.residual_tol = *scenario.solver.residual_tol_absolute;
  else if (scenario.solver.residual_tol_relative)
    settings.residual_tol = *scenario.solver.residual_tol_relative * b_delta.norm();
  else
    settings.residual_tol = scenario.snr_db == kNoNoise ? 1e-8 : 1e-3 * b_delta.norm();
  settings.tau = scenario.solver.tau_absolute
                     ? *scenario.solver.tau_absolute
                     : scenario.solver.tau_relative * op.apply_adjoint(b_delta).cwiseAbs().maxCoeff();

  const SolveResult solved = timer.run("solve", [&] { return gelma_solve(op, b_delta, settings); });
  manifest.solver = {solved.iterations, solved.residual_l2, solved.converged, settings.tau};
  auto [rho_image, rho_collector] = split_solution(solved, config.pixel_count());

  DiagnosticsSummary diagnostics = timer.run("analyze", [&] {
    DiagnosticsSummary d;
    const VicinityMap map =
        compute_vicinities(a.entries, rho_true.indices, static_cast<int>(rho_true.indices.size()));
    GridSupport rho_norm = rho_true;
    for (std::size_t i = 0; i < rho_norm.indices.size(); ++i)
      rho_norm.values[i] *= a.column_norms_original(rho_norm.indices[i]);
    d.co = coherent_misfit(rho_norm, rho_image, a.entries, map);
    d.in_image = incoherent_remainder(rho_image, map);
    d.in_augmented = incoherent_remainder(solved.solution, map);
    d.l1_true = rho_norm.dense().lpNorm<1>();
    d.delta = delta;
    d.overlap_free = map.overlap_free;
    d.max_union_coherence = max_coherence_within(a.entries, map.union_indices);
    for (std::size_t j = 0; j < map.support.size(); ++j) {
      double best = 0.0;
      for (Index k : map.vicinities[j]) best = std::max(best, std::abs(rho_image(k)));
      d.support_ratios.push_back(best / std::abs(rho_norm.values[j]));
    }
    if (has_collector && std::isfinite(collector.certified_bound))
      d.collector_bound = collector.certified_bound;
    return d;
  });

  if (scenario.gamma.trials > 0) {
    diagnostics.gamma = timer.run("gamma", [&] {
      GammaProtocol protocol;
      protocol.trials = scenario.gamma.trials;
      protocol.seed = stage_seed(scenario.seed, SeedStage::gamma);
      protocol.include_canonical = scenario.gamma.include_canonical
                                       ? *scenario.gamma.include_canonical
                                       : op.rows() <= kCanonicalAutoLimit;
      protocol.solver = settings;
      protocol.solver.max_iters = scenario.gamma.max_iters;
      return estimate_gamma(op, protocol);
    });
  }

  timer.run("artifacts", [&] {
    if (wants("image_csv")) {
      const std::string path = prefix + "_image.csv";
      write_vector_csv(path, rho_image);
      manifest.artifacts["image_csv"] = path;
    }
    if (wants("collector_csv")) {
      const std::string path = prefix + "_collector.csv";
      write_vector_csv(path, rho_collector);
      manifest.artifacts["collector_csv"] = path;
    }
    if (wants("diagnostics")) {
      const std::string path = prefix + "_diagnostics.json";
      write_text(path, diagnostics_json(manifest.solver, diagnostics).dump(2) + "\n");
      manifest.artifacts["diagnostics"] = path;
    }
    if (wants("l1_heatmap")) {
      const std::string path = prefix + "_l1.pgm";
      write_heatmap_pgm(path, rho_image, config.grid_rows, config.grid_cols);
      manifest.artifacts["l1_heatmap"] = path;
    }
    if (wants("l2_heatmap")) {
      const std::string path = prefix + "_l2.pgm";
      write_heatmap_pgm(path, kirchhoff_migration(a, b_delta), config.grid_rows, config.grid_cols);
      manifest.artifacts["l2_heatmap"] = path;
    }
    if (wants("overlay")) {
      const std::string path = prefix + "_overlay.txt";
      std::vector<std::pair<Index, Index>> pixels;
      for (Index k : rho_true.indices) pixels.emplace_back(k / config.grid_cols, k % config.grid_cols);
      write_overlay(path, pixels);
      manifest.artifacts["overlay"] = path;
    }
    if (wants("matrix_cache")) {
      const std::string path = prefix + "_matrix.bin";
      write_matrix(path, a.entries);
      manifest.artifacts["matrix_cache"] = path;
    }
    if (wants("collector_cache") && has_collector) {
      const std::string path = prefix + "_collector.bin";
      write_matrix(path, collector.columns);
      manifest.artifacts["collector_cache"] = path;
    }
  });

  manifest.diagnostics = diagnostics;
  manifest.path = prefix + "_manifest.json";

  json out;
  out["manifest_version"] = manifest.manifest_version;
  out["scenario_name"] = manifest.scenario_name;
  out["scenario_hash"] = manifest.scenario_hash;
  out["seed"] = manifest.seed;
  out["data_length"] = manifest.data_length;
  out["pixel_count"] = manifest.pixel_count;
  out["sigma"] = manifest.sigma;
  out["grid"] = {{"rows", manifest.grid_rows}, {"cols", manifest.grid_cols}, {"spacing", manifest.grid_spacing}};
  out["positions_approximate"] = manifest.positions_approximate;
  out["solver"] = {{"iterations", manifest.solver.iterations},
                   {"residual_l2", manifest.solver.residual_l2},
                   {"converged", manifest.solver.converged},
                   {"tau", manifest.solver.tau}};
  out["diagnostics"] = diagnostics_json(manifest.solver, manifest.diagnostics);
  out["artifacts"] = manifest.artifacts;
  out["timings_ms"] = manifest.timings_ms;
  write_text(manifest.path, out.dump(2) + "\n");
  return manifest;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("load_manifest: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("load_manifest: " + path + ": " + e.what());
  }
  RunManifest m;
  m.manifest_version = j.value("manifest_version", 1);
  m.scenario_name = j.value("scenario_name", "");
  m.scenario_hash = j.value("scenario_hash", "");
  m.seed = j.value("seed", 0ULL);
  m.data_length = j.value("data_length", 0LL);
  m.pixel_count = j.value("pixel_count", 0LL);
  m.sigma = j.value("sigma", 0LL);
  const json& grid = j.at("grid");
  m.grid_rows = grid.value("rows", 0LL);
  m.grid_cols = grid.value("cols", 0LL);
  m.grid_spacing = grid.value("spacing", 0.0);
  m.positions_approximate = j.value("positions_approximate", false);
  const json& solver = j.at("solver");
  m.solver.iterations = solver.value("iterations", 0);
  m.solver.residual_l2 = solver.value("residual_l2", 0.0);
  m.solver.converged = solver.value("converged", false);
  m.solver.tau = solver.value("tau", 0.0);
  const json& d = j.at("diagnostics");
  m.diagnostics.co = d.value("co", 0.0);
  m.diagnostics.in_image = d.value("in_image", 0.0);
  m.diagnostics.in_augmented = d.value("in_augmented", 0.0);
  m.diagnostics.l1_true = d.value("l1_true", 0.0);
  m.diagnostics.delta = d.value("delta", 0.0);
  m.diagnostics.support_ratios = d.value("support_ratios", std::vector<double>{});
  m.diagnostics.overlap_free = d.value("overlap_free", false);
  m.diagnostics.max_union_coherence = d.value("max_union_coherence", 0.0);
  if (d.contains("gamma")) m.diagnostics.gamma = d["gamma"].get<double>();
  if (d.contains("collector_bound")) m.diagnostics.collector_bound = d["collector_bound"].get<double>();
  if (j.contains("artifacts"))
    for (auto it = j["artifacts"].begin(); it != j["artifacts"].end(); ++it)
      m.artifacts[it.key()] = it.value().get<std::string>();
  if (j.contains("timings_ms"))
    for (auto it = j["timings_ms"].begin(); it != j["timings_ms"].end(); ++it)
      m.timings_ms[it.key()] = it.value().get<double>();
  m.path = path;
  return m;
}

std::string compare_runs(const RunManifest& a, const RunManifest& b) {
  if (a.grid_rows != b.grid_rows || a.grid_cols != b.grid_cols ||
      a.grid_spacing != b.grid_spacing)
    throw std::invalid_argument("compare_runs: incompatible grids (" + std::to_string(a.grid_rows) +
                                "x" + std::to_string(a.grid_cols) + " vs " +
                                std::to_string(b.grid_rows) + "x" + std::to_string(b.grid_cols) + ")");

  auto min_ratio = [](const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) m = std::min(m, x);
    return v.empty() ? 0.0 : m;
  };

  auto summary = [&](const RunManifest& m) {
    json s;
    s["manifest"] = m.path;
    s["scenario_name"] = m.scenario_name;
    s["data_length"] = m.data_length;
    s["sigma"] = m.sigma;
    s["co"] = m.diagnostics.co;
    s["in_image"] = m.diagnostics.in_image;
    s["in_augmented"] = m.diagnostics.in_augmented;
    s["l1_true"] = m.diagnostics.l1_true;
    s["min_support_ratio"] = min_ratio(m.diagnostics.support_ratios);
    s["support_recovered"] = !m.diagnostics.support_ratios.empty() &&
                             min_ratio(m.diagnostics.support_ratios) >= 0.5;
    if (m.diagnostics.gamma) s["gamma"] = *m.diagnostics.gamma;
    return s;
  };

  auto ratio = [](double x, double y) -> json {
    if (x == y) return 1.0;
    if (x == 0.0) return nullptr;
    return y / x;
  };

  json report;
  report["a"] = summary(a);
  report["b"] = summary(b);
  json ratios;
  ratios["co"] = ratio(a.diagnostics.co, b.diagnostics.co);
  ratios["in_image"] = ratio(a.diagnostics.in_image, b.diagnostics.in_image);
  ratios["in_augmented"] = ratio(a.diagnostics.in_augmented, b.diagnostics.in_augmented);
  ratios["min_support_ratio"] =
      ratio(min_ratio(a.diagnostics.support_ratios), min_ratio(b.diagnostics.support_ratios));
  if (a.diagnostics.gamma && b.diagnostics.gamma)
    ratios["gamma"] = ratio(*a.diagnostics.gamma, *b.diagnostics.gamma);
  report["ratios"] = ratios;
  return report.dump(2) + "\n";
}

}  // namespace simg
