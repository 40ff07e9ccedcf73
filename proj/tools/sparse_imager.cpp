// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "simg/io.hpp"
#include "simg/noise_collector.hpp"
#include "simg/operators.hpp"
#include "simg/pipeline.hpp"
#include "simg/resolution.hpp"
#include "simg/rng.hpp"
#include "simg/scenario.hpp"
#include "simg/threads.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
  simg::Scenario scenario = simg::load_scenario(scenario_path);
  if (seed_override) scenario.seed = *seed_override;
  const simg::RunManifest manifest = simg::run_scenario(scenario, out_dir);
  std::printf("scenario %s: %d iterations, residual %.3e%s\n", manifest.scenario_name.c_str(),
              manifest.solver.iterations, manifest.solver.residual_l2,
              manifest.solver.converged ? "" : " (not converged)");
  for (const auto& [kind, path] : manifest.artifacts) std::printf("  %-16s %s\n", kind.c_str(), path.c_str());
  std::printf("  %-16s %s\n", "manifest", manifest.path.c_str());
  return 0;
}

int cmd_compare(const std::string& manifest_a, const std::string& manifest_b,
                const std::string& out_path) {
  const simg::RunManifest a = simg::load_manifest(manifest_a);
  const simg::RunManifest b = simg::load_manifest(manifest_b);
  const std::string report = simg::compare_runs(a, b);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << report;
    std::printf("report written to %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_certify(const std::string& collector_path, const std::string& matrix_path, int sparsity,
                long samples, std::uint64_t seed) {
  const simg::CMatrix collector = simg::read_matrix(collector_path);
  const simg::CMatrix matrix = simg::read_matrix(matrix_path);
  simg::CertifyOptions options;
  options.sample_pairs = samples;
  if (samples < 0) {
    // at full experiment scale the exhaustive sweep is quadratic in sigma;
    // default to a sampled certificate there (--samples 0 forces exhaustive)
    const long long pairs = static_cast<long long>(collector.cols()) *
                            (collector.cols() + 2 * matrix.cols());
    options.sample_pairs = pairs > 20000000 ? 500000 : 0;
  }
  options.seed = seed;
  const simg::CoherenceCertificate cert = simg::certify_coherence(matrix, collector, sparsity, options);
  nlohmann::json out;
  out["ok"] = cert.ok;
  out["threshold"] = cert.threshold;
  out["worst_value"] = cert.worst_value;
  out["worst_pair"] = {cert.worst_i, cert.worst_j};
  out["exhaustive"] = cert.exhaustive;
  std::cout << out.dump(2) << "\n";
  return cert.ok ? 0 : 1;
}

int cmd_gamma(const std::string& scenario_path, int trials, std::optional<bool> canonical) {
  simg::Scenario scenario = simg::load_scenario(scenario_path);
  const simg::ImagingConfig config = simg::make_imaging_config(scenario.imaging);
  const simg::SensingMatrix a = simg::build_sensing_matrix(config);

  simg::NoiseCollector collector;
  bool has_collector = false;
  if (scenario.collector.kind == simg::ScenarioCollector::Kind::random) {
    simg::RandomCollectorOptions options;
    options.sigma = scenario.collector.sigma;
    options.sparsity = static_cast<int>(scenario.sources.size());
    options.seed = simg::stage_seed(scenario.seed, simg::SeedStage::collector);
    options.max_rejections = scenario.collector.max_rejections;
    options.coherence_cap = scenario.collector.screening_cap;
    collector = simg::build_random_collector(a, options);
    has_collector = true;
  } else if (scenario.collector.kind == simg::ScenarioCollector::Kind::greedy) {
    simg::GreedyFrameOptions options;
    options.sparsity = static_cast<int>(scenario.sources.size());
    options.seed = simg::stage_seed(scenario.seed, simg::SeedStage::greedy_frame);
    options.candidate_budget = scenario.collector.greedy_budget;
    options.stopping_samples = scenario.collector.greedy_samples;
    collector = simg::build_greedy_frame(a.entries, options);
    has_collector = true;
  }

  simg::DenseOperator plain(a.entries);
  simg::AugmentedOperator augmented(a.entries, collector.columns);
  const simg::LinearOperator& op =
      has_collector ? static_cast<const simg::LinearOperator&>(augmented) : plain;

  simg::GammaProtocol protocol;
  protocol.trials = trials;
  protocol.seed = simg::stage_seed(scenario.seed, simg::SeedStage::gamma);
  protocol.include_canonical = canonical ? *canonical : op.rows() <= simg::kCanonicalAutoLimit;
  protocol.solver.max_iters = scenario.gamma.max_iters;
  protocol.solver.residual_tol = 1e-3;  // directions are unit vectors

  const double gamma = simg::estimate_gamma(op, protocol);
  nlohmann::json out;
  out["gamma_lower_estimate"] = gamma;
  out["trials"] = trials;
  out["canonical_directions"] = protocol.include_canonical ? op.rows() : 0;
  out["rows"] = op.rows();
  out["cols"] = op.cols();
  out["sigma"] = has_collector ? collector.sigma() : 0;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse array imaging with l1 minimization and a noise collector"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  CLI::App* run = app.add_subcommand("run", "run a scenario end to end");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = run->add_option("--seed", seed_value, "override the master seed");

  std::string manifest_a, manifest_b, report_path;
  CLI::App* compare = app.add_subcommand("compare", "compare two run manifests");
  compare->add_option("manifest_a", manifest_a, "first manifest")->required();
  compare->add_option("manifest_b", manifest_b, "second manifest")->required();
  compare->add_option("--out", report_path, "write the report here instead of stdout");

  std::string collector_path, matrix_path;
  int sparsity = 1;
  long samples = -1;
  std::uint64_t certify_seed = 0;
  CLI::App* certify = app.add_subcommand("certify", "check collector coherence conditions");
  certify->add_option("collector", collector_path, "collector matrix cache (.bin)")->required();
  certify->add_option("matrix", matrix_path, "sensing matrix cache (.bin)")->required();
  certify->add_option("--m", sparsity, "sparsity M for the 1/(3M) threshold")->required();
  certify->add_option("--samples", samples,
                      "pairs to sample (0 = exhaustive; default: exhaustive below 2e7 pairs)");
  certify->add_option("--sample-seed", certify_seed, "seed for sampled certification");

  std::string gamma_scenario;
  int trials = 100;
  std::optional<bool> canonical;
  CLI::App* gamma = app.add_subcommand("gamma", "estimate the stability constant gamma");
  gamma->add_option("scenario", gamma_scenario, "scenario JSON file")->required();
  gamma->add_option("--trials", trials, "random unit directions (default 100)");
  bool canonical_on = false, canonical_off = false;
  CLI::Option* canon_opt = gamma->add_flag("--canonical", canonical_on, "probe all canonical directions");
  CLI::Option* no_canon_opt =
      gamma->add_flag("--no-canonical", canonical_off, "skip canonical directions");
  canon_opt->excludes(no_canon_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (seed_opt->count() > 0) seed_override = seed_value;
      return cmd_run(scenario_path, out_dir, seed_override);
    }
    if (compare->parsed()) return cmd_compare(manifest_a, manifest_b, report_path);
    if (certify->parsed()) return cmd_certify(collector_path, matrix_path, sparsity, samples, certify_seed);
    if (gamma->parsed()) {
      if (canonical_on) canonical = true;
      if (canonical_off) canonical = false;
      return cmd_gamma(gamma_scenario, trials, canonical);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
