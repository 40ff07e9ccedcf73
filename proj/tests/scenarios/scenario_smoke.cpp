// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

// Runs every bundled scenario end to end and checks that each manifest lists
// only existing, non-empty artifacts.

#include <cstdio>
#include <filesystem>
#include <vector>

#include "simg/io.hpp"
#include "simg/pipeline.hpp"
#include "simg/scenario.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  std::string scenario_dir = "scenarios";
  std::string out_dir = "scenario_smoke_out";
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--scenarios") scenario_dir = argv[i + 1];
    if (arg == "--out") out_dir = argv[i + 1];
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(scenario_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::printf("no scenarios found under %s\n", scenario_dir.c_str());
    return 1;
  }

  bool all_ok = true;
  for (const fs::path& file : files) {
    try {
      const simg::Scenario scenario = simg::load_scenario(file.string());
      const simg::RunManifest manifest =
          simg::run_scenario(scenario, (fs::path(out_dir) / scenario.name).string());
      bool complete = true;
      for (const auto& [kind, path] : manifest.artifacts)
        if (!fs::exists(path) || fs::file_size(path) == 0) complete = false;
      // exported vectors must have one data row per unknown
      if (manifest.artifacts.count("image_csv") &&
          simg::read_vector_csv(manifest.artifacts.at("image_csv")).size() != manifest.pixel_count)
        complete = false;
      if (manifest.artifacts.count("collector_csv") &&
          simg::read_vector_csv(manifest.artifacts.at("collector_csv")).size() != manifest.sigma)
        complete = false;
      std::printf("[%s] %-12s %5d iterations, residual %.2e, %zu artifacts%s\n",
                  complete ? "ok" : "INCOMPLETE", scenario.name.c_str(),
                  manifest.solver.iterations, manifest.solver.residual_l2,
                  manifest.artifacts.size(), manifest.solver.converged ? "" : " (not converged)");
      std::fflush(stdout);
      all_ok = all_ok && complete;
    } catch (const std::exception& e) {
      std::printf("[ERROR] %s: %s\n", file.filename().string().c_str(), e.what());
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
