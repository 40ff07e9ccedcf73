// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace simg {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("scenario field '" + field + "': " + what);
}

const json& member(const json& j, const std::string& field, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) field_error(field, "missing");
  return *it;
}

double number(const json& j, const std::string& field, const char* key) {
  const json& v = member(j, field, key);
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return it->get<double>();
}

long long integer(const json& j, const std::string& field, const char* key) {
  const json& v = member(j, field, key);
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<long long>();
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw std::invalid_argument(origin + ": JSON parse error at line " + std::to_string(line) +
                                ", column " + std::to_string(col) + ": " + e.what());
  }

  Scenario s;
  s.source_path = origin;
  s.version = static_cast<int>(integer(j, "version", "version"));
  if (s.version != 1) field_error("version", "unsupported (expected 1)");
  const json& name = member(j, "name", "name");
  if (!name.is_string()) field_error("name", "expected a string");
  s.name = name.get<std::string>();
  if (s.name.empty()) field_error("name", "empty");
  s.seed = static_cast<std::uint64_t>(integer(j, "seed", "seed"));

  const json& imaging = member(j, "imaging", "imaging");
  s.imaging.receivers = static_cast<int>(integer(imaging, "imaging.receivers", "receivers"));
  if (s.imaging.receivers < 1) field_error("imaging.receivers", "must be >= 1");
  s.imaging.frequencies = static_cast<int>(integer(imaging, "imaging.frequencies", "frequencies"));
  if (s.imaging.frequencies < 1) field_error("imaging.frequencies", "must be >= 1");
  s.imaging.aperture_over_range = number(imaging, "imaging.aperture_over_range", "aperture_over_range");
  if (!(s.imaging.aperture_over_range > 0.0)) field_error("imaging.aperture_over_range", "must be positive");
  s.imaging.bandwidth_ratio = number(imaging, "imaging.bandwidth_ratio", "bandwidth_ratio");
  if (s.imaging.bandwidth_ratio < 0.0 || s.imaging.bandwidth_ratio >= 2.0)
    field_error("imaging.bandwidth_ratio", "must be in [0, 2)");
  if (s.imaging.bandwidth_ratio == 0.0 && s.imaging.frequencies > 1)
    field_error("imaging.bandwidth_ratio", "zero bandwidth needs frequencies = 1");
  s.imaging.range = number(imaging, "imaging.range", "range");
  if (!(s.imaging.range > 0.0)) field_error("imaging.range", "must be positive");
  const json& grid = member(imaging, "imaging.grid", "grid");
  s.imaging.grid_rows = static_cast<Index>(integer(grid, "imaging.grid.rows", "rows"));
  s.imaging.grid_cols = static_cast<Index>(integer(grid, "imaging.grid.cols", "cols"));
  if (s.imaging.grid_rows < 1 || s.imaging.grid_cols < 1) field_error("imaging.grid", "rows and cols must be >= 1");
  s.imaging.grid_spacing = number(grid, "imaging.grid.spacing", "spacing");
  if (!(s.imaging.grid_spacing > 0.0)) field_error("imaging.grid.spacing", "must be positive");

  const json& scene = member(j, "scene", "scene");
  const json& sources = member(scene, "scene.sources", "sources");
  if (!sources.is_array() || sources.empty()) field_error("scene.sources", "expected a non-empty array");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string field = "scene.sources[" + std::to_string(i) + "]";
    const json& src = sources[i];
    ScenarioSource out;
    out.range_offset = number(src, field + ".range_offset", "range_offset");
    out.cross_offset = number(src, field + ".cross_offset", "cross_offset");
    const json& amp = member(src, field + ".amplitude", "amplitude");
    if (!amp.is_array() || amp.size() != 2) field_error(field + ".amplitude", "expected [re, im]");
    out.amplitude = Complex(amp[0].get<double>(), amp[1].get<double>());
    if (out.amplitude == Complex(0.0, 0.0)) field_error(field + ".amplitude", "must be nonzero");
    s.sources.push_back(out);
  }
  s.positions_approximate = scene.value("positions_approximate", false);

  if (j.contains("noise")) {
    const json& noise = j["noise"];
    if (!noise.is_null()) {
      s.snr_db = number(noise, "noise.snr_db", "snr_db");
      if (std::isnan(s.snr_db)) field_error("noise.snr_db", "not a number");
    }
  }

  if (j.contains("collector") && !j["collector"].is_null()) {
    const json& col = j["collector"];
    const json& kind = member(col, "collector.kind", "kind");
    const std::string k = kind.get<std::string>();
    if (k == "none") {
      s.collector.kind = ScenarioCollector::Kind::none;
    } else if (k == "random") {
      s.collector.kind = ScenarioCollector::Kind::random;
      s.collector.sigma = static_cast<Index>(integer(col, "collector.sigma", "sigma"));
      if (s.collector.sigma < 1) field_error("collector.sigma", "must be >= 1");
      if (col.contains("screening")) {
        const json& scr = col["screening"];
        if (scr.is_string()) {
          const std::string mode = scr.get<std::string>();
          if (mode == "strict")
            s.collector.screening_cap = -1.0;  // resolved to 1/(3M) at build time
          else if (mode == "none")
            s.collector.screening_cap = std::numeric_limits<double>::infinity();
          else
            field_error("collector.screening", "expected 'strict', 'none', or a number");
        } else if (scr.is_number()) {
          s.collector.screening_cap = scr.get<double>();
          if (!(s.collector.screening_cap > 0.0)) field_error("collector.screening", "cap must be positive");
        } else {
          field_error("collector.screening", "expected 'strict', 'none', or a number");
        }
      }
      s.collector.max_rejections =
          static_cast<long>(number_or(col, "max_rejections", static_cast<double>(s.collector.max_rejections)));
    } else if (k == "greedy") {
      s.collector.kind = ScenarioCollector::Kind::greedy;
      s.collector.greedy_budget = static_cast<int>(number_or(col, "budget", s.collector.greedy_budget));
      s.collector.greedy_samples = static_cast<int>(number_or(col, "samples", s.collector.greedy_samples));
    } else {
      field_error("collector.kind", "expected 'none', 'random', or 'greedy'");
    }
  }

  if (j.contains("solver") && !j["solver"].is_null()) {
    const json& sol = j["solver"];
    s.solver.tau_relative = number_or(sol, "tau_relative", s.solver.tau_relative);
    if (sol.contains("tau")) s.solver.tau_absolute = sol["tau"].get<double>();
    s.solver.max_iters = static_cast<int>(number_or(sol, "max_iters", s.solver.max_iters));
    if (s.solver.max_iters < 1) field_error("solver.max_iters", "must be >= 1");
    if (sol.contains("residual_tol_relative"))
      s.solver.residual_tol_relative = sol["residual_tol_relative"].get<double>();
    if (sol.contains("residual_tol")) s.solver.residual_tol_absolute = sol["residual_tol"].get<double>();
    s.solver.change_tol = number_or(sol, "change_tol", s.solver.change_tol);
  }

  if (j.contains("gamma") && !j["gamma"].is_null()) {
    const json& g = j["gamma"];
    s.gamma.trials = static_cast<int>(integer(g, "gamma.trials", "trials"));
    if (s.gamma.trials < 0) field_error("gamma.trials", "must be >= 0");
    if (g.contains("include_canonical")) s.gamma.include_canonical = g["include_canonical"].get<bool>();
    s.gamma.max_iters = static_cast<int>(number_or(g, "max_iters", s.gamma.max_iters));
  }

  if (j.contains("outputs")) {
    const json& outs = j["outputs"];
    if (!outs.is_array()) field_error("outputs", "expected an array of strings");
    for (const json& o : outs) {
      if (!o.is_string()) field_error("outputs", "expected an array of strings");
      s.outputs.push_back(o.get<std::string>());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("load_scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

ImagingConfig make_imaging_config(const ScenarioImaging& imaging) {
  ImagingConfig config;
  config.wave_speed = 1.0;
  config.range = imaging.range;
  config.aperture = imaging.aperture_over_range * imaging.range;

  config.receiver_positions.resize(imaging.receivers);
  for (int r = 0; r < imaging.receivers; ++r) {
    const double y = imaging.receivers == 1
                         ? 0.0
                         : -config.aperture / 2 + r * config.aperture / (imaging.receivers - 1);
    config.receiver_positions[r] = Point(0.0, y, 0.0);
  }

  const double omega0 = 2.0 * kPi;
  config.frequencies.resize(imaging.frequencies);
  for (int l = 0; l < imaging.frequencies; ++l)
    config.frequencies[l] =
        imaging.frequencies == 1
            ? omega0
            : omega0 * (1.0 - imaging.bandwidth_ratio / 2) +
                  l * omega0 * imaging.bandwidth_ratio / (imaging.frequencies - 1);

  config.grid_rows = imaging.grid_rows;
  config.grid_cols = imaging.grid_cols;
  config.grid_spacing = imaging.grid_spacing;
  config.grid_origin = Point(imaging.range - (imaging.grid_rows - 1) * imaging.grid_spacing / 2,
                             -(imaging.grid_cols - 1) * imaging.grid_spacing / 2, 0.0);
  config.validate();
  return config;
}

SourceScene make_scene(const Scenario& scenario, const ImagingConfig& config) {
  SourceScene scene;
  for (const ScenarioSource& s : scenario.sources)
    scene.sources.push_back(
        {Point(scenario.imaging.range + s.range_offset, s.cross_offset, 0.0), s.amplitude});
  scene.validate(config);
  return scene;
}

}  // namespace simg
