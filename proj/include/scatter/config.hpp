#pragma once

#include <optional>
#include <string>

#include "scatter/spectral.hpp"
#include "scatter/stats.hpp"
#include "scatter/types.hpp"

#include <nlohmann/json.hpp>

namespace scatter::config {

/// One experiment description; a JSON document with flag overrides on top.
struct ExperimentConfig {
  QuasiMomentum k = QuasiMomentum::reference();
  std::string k_name = "paper";  // "paper" or "custom"
  Vec3 x0{0.0, 0.0, 0.0};
  double phi = 0.0;
  double window_lo = 0.0;
  double window_hi = 50.0;
  double delta = 1.0 / 16.0;  // truncation exponent: L = lambda^{-delta}
  stats::FilterParams filter;
  std::string output_dir = "out";

  spectral::ScattererConfig scatterer() const { return {x0, phi}; }
  void validate() const;
};

ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Echo used by every JSON report for provenance.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Parses "a,b,c" or the preset name "paper".
void apply_k_flag(ExperimentConfig& cfg, const std::string& text);
/// Parses "a:b".
void apply_window_flag(ExperimentConfig& cfg, const std::string& text);

}  // namespace scatter::config
