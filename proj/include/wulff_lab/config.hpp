#pragma once

// Run configuration shared by the command-line tool: a JSON file supplies
// defaults, explicitly given flags override them.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wulff_lab/io.hpp"

namespace wulff_lab {

/// Raised for malformed configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  NormSpec norm = NormSpec::euclidean();
  std::vector<ShapeSpec> shapes;
  double p = 2.0;
  std::optional<int> grid;
  std::uint64_t seed = 42;
  std::string out = "-";
  std::string format = "csv";

  double T = 3.0;
  std::vector<double> output_times;
  std::string svg_dir;
  std::vector<double> eps;
  std::string suite = "main";
  int cases = 100;
  std::optional<double> tolerance;
  std::vector<double> phi;  // [c0, a1, b1, a2, b2, ...] Fourier coefficients of the speed
  std::vector<double> ts;
  int iterations = 500;
  int modes = 32;

  [[nodiscard]] int grid_or(int fallback) const { return grid.value_or(fallback); }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Checks the invariants shared by every command.
inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& msg) { throw ConfigError("config key '" + key + "': " + msg); };
  if (!(std::isfinite(c.p) && c.p > 1.0)) fail("p", "p must exceed 1");
  if (c.grid && (*c.grid < 64 || !is_power_of_two(*c.grid))) fail("grid", "grid must be a power of two >= 64");
  if (c.format != "csv" && c.format != "json") fail("format", "format must be csv or json");
  if (!(c.T > 0.0)) fail("T", "T must be positive");
  if (c.cases < 0) fail("cases", "cases must be nonnegative");
  if (c.iterations < 0) fail("iterations", "iterations must be nonnegative");
  if (c.modes < 1) fail("modes", "modes must be at least 1");
  for (double e : c.eps)
    if (!(e > 0.0)) fail("eps", "cut depths must be positive");
  for (double t : c.ts)
    if (!(t > 0.0)) fail("t", "finite-difference steps must be positive");
}

/// Merges a JSON configuration object into `cfg`.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {"norm", "shape", "shapes", "p", "grid", "seed", "out", "format",
                                              "T", "output_times", "svg_dir", "eps", "suite", "cases",
                                              "tolerance", "phi", "t", "iterations", "modes"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("config key '" + key + "': unknown key");
    try {
      if (key == "norm") cfg.norm = io::norm_from_json(value);
      else if (key == "shape") cfg.shapes = {io::shape_from_json(value)};
      else if (key == "shapes") {
        cfg.shapes.clear();
        for (const auto& s : value) cfg.shapes.push_back(io::shape_from_json(s));
      } else if (key == "p") cfg.p = value.get<double>();
      else if (key == "grid") cfg.grid = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "T") cfg.T = value.get<double>();
      else if (key == "output_times") cfg.output_times = value.get<std::vector<double>>();
      else if (key == "svg_dir") cfg.svg_dir = value.get<std::string>();
      else if (key == "eps") cfg.eps = value.get<std::vector<double>>();
      else if (key == "suite") cfg.suite = value.get<std::string>();
      else if (key == "cases") cfg.cases = value.get<int>();
      else if (key == "tolerance") cfg.tolerance = value.get<double>();
      else if (key == "phi") cfg.phi = value.get<std::vector<double>>();
      else if (key == "t") cfg.ts = value.get<std::vector<double>>();
      else if (key == "iterations") cfg.iterations = value.get<int>();
      else if (key == "modes") cfg.modes = value.get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    } catch (const Error& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

inline void load_json_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  apply_json(cfg, j);
}

/// A configuration record that reproduces `shape` under the compute command.
inline nlohmann::json shape_record(const NormSpec& norm, double p, const ShapeSpec& shape) {
  nlohmann::json j = {{"norm", io::to_json(norm)}, {"p", io::jnum(p)}, {"shape", io::to_json(shape)}};
  if (shape.grid > 0) j["grid"] = shape.grid;
  return j;
}

}  // namespace wulff_lab
