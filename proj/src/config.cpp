#include "scatter/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace scatter::config {

void ExperimentConfig::validate() const {
  if (!(window_lo >= 0.0) || !(window_hi >= window_lo) || !std::isfinite(window_hi)) {
    throw ConfigError("window must satisfy 0 <= a <= b < inf");
  }
  if (!(phi > -pi && phi < pi)) throw ConfigError("phi must lie strictly inside (-pi, pi)");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(filter.G > 0.0) || !(filter.D >= 0.0)) throw ConfigError("filter needs G > 0, D >= 0");
}

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(what) + " must be a 3-element array");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

ExperimentConfig parse_config_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  try {
    if (doc.contains("k")) {
      const auto& jk = doc.at("k");
      if (jk.is_string()) {
        apply_k_flag(cfg, jk.get<std::string>());
      } else {
        cfg.k = QuasiMomentum(vec3_from_json(jk, "k"));
        cfg.k_name = "custom";
      }
    }
    if (doc.contains("x0")) cfg.x0 = vec3_from_json(doc.at("x0"), "x0");
    if (doc.contains("phi")) cfg.phi = doc.at("phi").get<double>();
    if (doc.contains("window")) {
      const auto& w = doc.at("window");
      if (!w.is_array() || w.size() != 2) throw ConfigError("window must be [a, b]");
      cfg.window_lo = w.at(0).get<double>();
      cfg.window_hi = w.at(1).get<double>();
    }
    if (doc.contains("delta")) cfg.delta = doc.at("delta").get<double>();
    if (doc.contains("filter")) {
      const auto& f = doc.at("filter");
      if (f.contains("G")) cfg.filter.G = f.at("G").get<double>();
      if (f.contains("D")) cfg.filter.D = f.at("D").get<double>();
      if (f.contains("E") && !f.at("E").is_null()) cfg.filter.E = f.at("E").get<double>();
      if (f.contains("F") && !f.at("F").is_null()) cfg.filter.F = f.at("F").get<double>();
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config JSON parse failure in " + path + ": " + e.what());
  }
  return parse_config_json(doc);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["k"] = {cfg.k.k.x, cfg.k.k.y, cfg.k.k.z};
  j["k_name"] = cfg.k_name;
  j["x0"] = {cfg.x0.x, cfg.x0.y, cfg.x0.z};
  j["phi"] = cfg.phi;
  j["window"] = {cfg.window_lo, cfg.window_hi};
  j["delta"] = cfg.delta;
  j["filter"] = {{"G", cfg.filter.G},
                 {"D", cfg.filter.D},
                 {"E", cfg.filter.E},
                 {"F", cfg.filter.F}};
  j["output_dir"] = cfg.output_dir;
  return j;
}

void apply_k_flag(ExperimentConfig& cfg, const std::string& text) {
  if (text == "paper") {
    cfg.k = QuasiMomentum::reference();
    cfg.k_name = "paper";
    return;
  }
  Vec3 v;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',') {
    throw ConfigError("expected --k a,b,c or --k paper, got '" + text + "'");
  }
  cfg.k = QuasiMomentum(v);
  cfg.k_name = "custom";
}

void apply_window_flag(ExperimentConfig& cfg, const std::string& text) {
  char sep = 0;
  std::istringstream is(text);
  if (!(is >> cfg.window_lo >> sep >> cfg.window_hi) || sep != ':') {
    throw ConfigError("expected --window a:b, got '" + text + "'");
  }
}

}  // namespace scatter::config
