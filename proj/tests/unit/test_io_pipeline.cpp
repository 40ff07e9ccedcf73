// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "simg/io.hpp"
#include "simg/pipeline.hpp"
#include "simg/rng.hpp"
#include "simg/scenario.hpp"

using namespace simg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("io_test_tmp") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kTinyScenario = R"({
  "version": 1,
  "name": "tiny",
  "seed": 424242,
  "imaging": {
    "receivers": 4, "frequencies": 3,
    "aperture_over_range": 0.5, "bandwidth_ratio": 0.4, "range": 12.0,
    "grid": { "rows": 5, "cols": 5, "spacing": 1.0 }
  },
  "scene": { "sources": [ { "range_offset": -1.0, "cross_offset": 1.0, "amplitude": [1.0, 0.25] } ] },
  "noise": { "snr_db": 10.0 },
  "collector": { "kind": "random", "sigma": 20, "screening": "none" },
  "solver": { "tau_relative": 0.1, "max_iters": 4000, "residual_tol_relative": 1e-4 },
  "outputs": ["l1_heatmap", "l2_heatmap", "overlay", "image_csv", "collector_csv", "diagnostics"]
})";

}  // namespace

TEST_SUITE("io_pipeline") {

TEST_CASE("matrix cache round trips bit for bit") {
  GaussianStream rng(1);
  CMatrix m(7, 5);
  for (Index j = 0; j < 5; ++j) m.col(j) = rng.cnormal_vector(7);
  const fs::path dir = fresh_dir("matrix");
  const std::string path = (dir / "m.bin").string();
  write_matrix(path, m);
  const CMatrix back = read_matrix(path);
  CHECK(back == m);

  std::ofstream bad((dir / "bad.bin").string(), std::ios::binary);
  bad << "NOTAMATRIX";
  bad.close();
  CHECK_THROWS_AS(read_matrix((dir / "bad.bin").string()), std::runtime_error);
}

TEST_CASE("pgm heatmaps follow the contract") {
  const fs::path dir = fresh_dir("pgm");

  const std::string zero_path = (dir / "zero.pgm").string();
  write_heatmap_pgm(zero_path, CVector::Zero(20), 4, 5);
  const std::string zero = slurp(zero_path);
  CHECK(zero.substr(0, 9) == "P5\n5 4\n25");
  const std::string zero_pixels = zero.substr(zero.find("255\n") + 4);
  REQUIRE(zero_pixels.size() == 20);
  for (char c : zero_pixels) CHECK(c == '\0');

  CVector spot = CVector::Zero(20);
  spot(13) = Complex(0.0, -2.0);
  const std::string spot_path = (dir / "spot.pgm").string();
  write_heatmap_pgm(spot_path, spot, 4, 5);
  const std::string pixels = slurp(spot_path).substr(zero.find("255\n") + 4);
  int bright = 0;
  for (std::size_t i = 0; i < pixels.size(); ++i)
    if (static_cast<unsigned char>(pixels[i]) == 255) {
      ++bright;
      CHECK(i == 13);
    }
  CHECK(bright == 1);

  // round half up: 0.5 of peak maps to floor(127.5 + 0.5) = 128
  CVector half(2);
  half << Complex(1.0, 0.0), Complex(0.5, 0.0);
  const std::string half_path = (dir / "half.pgm").string();
  write_heatmap_pgm(half_path, half, 1, 2);
  const std::string half_pixels = slurp(half_path).substr(slurp(half_path).find("255\n") + 4);
  CHECK(static_cast<unsigned char>(half_pixels[1]) == 128);

  CHECK_THROWS_AS(write_heatmap_pgm((dir / "x.pgm").string(), CVector::Zero(3), 2, 2),
                  std::invalid_argument);
}

TEST_CASE("csv vectors round trip at full precision with CRLF endings") {
  const fs::path dir = fresh_dir("csv");
  GaussianStream rng(2);
  CVector v = rng.cnormal_vector(9);
  v(0) = Complex(1.0 / 3.0, -2.0 / 7.0);
  const std::string path = (dir / "v.csv").string();
  write_vector_csv(path, v);

  const std::string text = slurp(path);
  CHECK(text.substr(0, 27) == "index,real,imag,magnitude\r\n");
  CHECK(text.find("\r\n") != std::string::npos);

  const CVector back = read_vector_csv(path);
  REQUIRE(back.size() == v.size());
  CHECK(back == v);  // 17 significant digits reproduce doubles exactly

  write_vector_csv(path, CVector(0));
  CHECK(slurp(path) == "index,real,imag,magnitude\r\n");
  CHECK(read_vector_csv(path).size() == 0);
}

TEST_CASE("scenario parse errors report line and column") {
  const std::string broken = "{\n  \"version\": 1,\n  \"name\": oops\n}";
  try {
    parse_scenario(broken, "broken.json");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("column") != std::string::npos);
  }
}

TEST_CASE("scenario validation names the offending field") {
  const char* missing_receivers = R"({
    "version": 1, "name": "x", "seed": 1,
    "imaging": { "frequencies": 2, "aperture_over_range": 0.5, "bandwidth_ratio": 0.2,
                 "range": 10.0, "grid": { "rows": 3, "cols": 3, "spacing": 1.0 } },
    "scene": { "sources": [ { "range_offset": 0, "cross_offset": 0, "amplitude": [1, 0] } ] }
  })";
  try {
    parse_scenario(missing_receivers);
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("imaging.receivers") != std::string::npos);
  }

  Scenario bad = parse_scenario(kTinyScenario);
  bad.outputs.push_back("bogus_token");
  CHECK_THROWS_WITH_AS(run_scenario(bad, fresh_dir("bad").string()),
                       doctest::Contains("bogus_token"), std::invalid_argument);
}

TEST_CASE("imaging config geometry matches the declared ratios") {
  const ImagingConfig config = oracle::config(5, 4, 0.5, 0.4, 100.0, 7, 9, 0.5);
  CHECK(config.aperture == doctest::Approx(50.0));
  CHECK(config.range == doctest::Approx(100.0));
  CHECK(config.receiver_positions.front().y() == doctest::Approx(-25.0));
  CHECK(config.receiver_positions.back().y() == doctest::Approx(25.0));
  const double w0 = 2 * kPi;
  CHECK(config.frequencies.front() == doctest::Approx(w0 * 0.8));
  CHECK(config.frequencies.back() == doctest::Approx(w0 * 1.2));
  // window centered at (L, 0)
  const Point first = config.grid_point(0);
  const Point last = config.grid_point(config.pixel_count() - 1);
  CHECK((first.x() + last.x()) / 2 == doctest::Approx(100.0));
  CHECK((first.y() + last.y()) / 2 == doctest::Approx(0.0));
}

TEST_CASE("the pipeline is deterministic and its manifest is complete") {
  Scenario scenario = parse_scenario(kTinyScenario);
  const fs::path dir_a = fresh_dir("run_a"), dir_b = fresh_dir("run_b");
  const RunManifest a = run_scenario(scenario, dir_a.string());
  const RunManifest b = run_scenario(scenario, dir_b.string());

  REQUIRE(a.artifacts.size() == 6);
  for (const auto& [kind, path] : a.artifacts) {
    CAPTURE(kind);
    REQUIRE(fs::exists(path));
    CHECK(fs::file_size(path) > 0);
    const std::string other = b.artifacts.at(kind);
    CHECK(slurp(path) == slurp(other));
  }
  CHECK(a.sigma == 20);
  CHECK(a.data_length == 12);
  CHECK(a.pixel_count == 25);
  CHECK(a.diagnostics.delta > 0.0);
  CHECK(a.diagnostics.l1_true > 0.0);
  REQUIRE(a.diagnostics.support_ratios.size() == 1);

  // a different master seed changes the noise draw
  scenario.seed = 7;
  const RunManifest c = run_scenario(scenario, fresh_dir("run_c").string());
  CHECK(slurp(c.artifacts.at("image_csv")) != slurp(a.artifacts.at("image_csv")));
}

TEST_CASE("manifests reload and self-comparison gives unit ratios") {
  Scenario scenario = parse_scenario(kTinyScenario);
  const RunManifest manifest = run_scenario(scenario, fresh_dir("cmp").string());
  const RunManifest loaded = load_manifest(manifest.path);
  CHECK(loaded.scenario_name == "tiny");
  CHECK(loaded.diagnostics.co == doctest::Approx(manifest.diagnostics.co));

  const std::string report = compare_runs(loaded, loaded);
  CHECK(report.find("\"co\": 1.0") != std::string::npos);
  CHECK(report.find("\"in_image\": 1.0") != std::string::npos);
  CHECK(report.find("\"min_support_ratio\": 1.0") != std::string::npos);

  RunManifest other = loaded;
  other.grid_rows = 99;
  CHECK_THROWS_AS(compare_runs(loaded, other), std::invalid_argument);
}

TEST_CASE("export vectors writes image, collector, and diagnostics files") {
  const fs::path dir = fresh_dir("export");
  SolveResult result;
  GaussianStream rng(3);
  result.solution = rng.cnormal_vector(6);
  result.residual_l2 = 0.125;
  result.iterations = 42;
  result.converged = true;

  SolverSummary solver{42, 0.125, true, 0.01};
  DiagnosticsSummary diagnostics;
  diagnostics.co = 0.5;
  diagnostics.in_image = 0.25;
  diagnostics.gamma = 3.5;

  const ExportPaths paths =
      export_vectors(result, 6, (dir / "run").string(), solver, diagnostics);
  CHECK(read_vector_csv(paths.image_csv) == result.solution);
  CHECK(slurp(paths.collector_csv) == "index,real,imag,magnitude\r\n");  // no collector part
  const std::string diag = slurp(paths.diagnostics_json);
  CHECK(diag.find("\"co\": 0.5") != std::string::npos);
  CHECK(diag.find("\"gamma\": 3.5") != std::string::npos);
  CHECK(diag.find("\"iterations\": 42") != std::string::npos);
}

TEST_CASE("pipeline errors carry the stage label") {
  Scenario scenario = parse_scenario(kTinyScenario);
  // range 2, a/L = 2: receiver 0 sits at (0, -2, 0), which is also grid
  // node (row 0, col 0), so the matrix build must fail
  scenario.imaging.range = 2.0;
  scenario.imaging.aperture_over_range = 2.0;
  scenario.sources[0].range_offset = 0.0;
  try {
    run_scenario(scenario, fresh_dir("stage").string());
    FAIL("expected a stage-labeled failure");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("pipeline stage") != std::string::npos);
  }
}

TEST_CASE("file fingerprints are stable and content sensitive") {
  const fs::path dir = fresh_dir("fp");
  const std::string p1 = (dir / "a.txt").string(), p2 = (dir / "b.txt").string();
  std::ofstream(p1, std::ios::binary) << "hello";
  std::ofstream(p2, std::ios::binary) << "hellp";
  CHECK(file_fingerprint(p1) == file_fingerprint(p1));
  CHECK(file_fingerprint(p1) != file_fingerprint(p2));
  CHECK(file_fingerprint(p1).size() == 16);
}

}  // TEST_SUITE
