// scatterlab: spectra, perturbed eigenvalues, momentum measures and spectral
// statistics for a point scatterer on the 3-torus with Bloch quasimomentum.
//
// Subcommands: spectrum | perturbed | measure | paircorr | localize | count.
// A JSON config supplies defaults; flags override individual fields.  Output
// is CSV/JSON tables plus PPM heatmaps, byte-stable for identical configs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scatter/config.hpp"
#include "scatter/csv.hpp"
#include "scatter/greens.hpp"
#include "scatter/heatmap.hpp"
#include "scatter/lattice.hpp"
#include "scatter/parallel.hpp"
#include "scatter/quantize.hpp"
#include "scatter/spectral.hpp"
#include "scatter/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace scatter;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_other = 1;
constexpr int exit_config = 2;
constexpr int exit_coverage = 3;
constexpr int exit_solver = 4;
constexpr int exit_io = 5;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string k_text;
  std::string window_text;
  std::string colormap = "viridis";
  double phi = 0.0;
  bool phi_set = false;
  double bandwidth = 0.05;
  int threads = 0;
};

config::ExperimentConfig resolve_config(const CommonFlags& flags) {
  config::ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = config::load_config_file(flags.config_path);
  if (!flags.k_text.empty()) config::apply_k_flag(cfg, flags.k_text);
  if (!flags.window_text.empty()) config::apply_window_flag(cfg, flags.window_text);
  if (flags.phi_set) cfg.phi = flags.phi;
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  cfg.validate();
  if (flags.threads > 0) set_default_threads(flags.threads);
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void write_json_report(const fs::path& path, const ordered_json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << "\n";
  if (!os) throw IoError("failed while writing " + path.string());
}

ordered_json base_report(const std::string& command, const config::ExperimentConfig& cfg) {
  ordered_json doc;
  doc["command"] = command;
  doc["config"] = config::config_to_json(cfg);
  return doc;
}

int run_spectrum(const CommonFlags& flags) {
  const auto cfg = resolve_config(flags);
  const auto spectrum = lattice::enumerate_window(cfg.k, cfg.window_lo, cfg.window_hi);
  const fs::path path = fs::path(cfg.output_dir) / "spectrum.csv";
  auto os = open_output(path);
  lattice::write_spectrum_csv(spectrum, os);
  std::cout << path.string() << ": " << spectrum.size() << " modes\n";
  return exit_ok;
}

int run_perturbed(const CommonFlags& flags) {
  const auto cfg = resolve_config(flags);
  const double margin = 2.0;
  const auto spectrum = lattice::enumerate_window(cfg.k, 0.0, cfg.window_hi + margin);
  const spectral::SecularEngine engine(cfg.k, cfg.window_hi + margin);
  const auto result =
      spectral::perturbed_spectrum(engine, spectrum, cfg.scatterer(), cfg.window_lo, cfg.window_hi);
  const fs::path path = fs::path(cfg.output_dir) / "perturbed.csv";
  auto os = open_output(path);
  spectral::write_perturbed_csv(result.values, spectrum, os);
  std::cout << path.string() << ": " << result.values.size() << " eigenvalues";
  if (result.skipped_narrow_gaps > 0) {
    std::cout << " (" << result.skipped_narrow_gaps << " gaps below the width floor skipped)";
  }
  std::cout << "\n";
  return exit_ok;
}

int run_measure(const CommonFlags& flags, std::int64_t index, std::int64_t top_j) {
  const auto cfg = resolve_config(flags);
  const double margin = 2.0;
  const auto spectrum = lattice::enumerate_window(cfg.k, 0.0, cfg.window_hi + margin);
  const spectral::SecularEngine engine(cfg.k, cfg.window_hi + margin);
  const auto result =
      spectral::perturbed_spectrum(engine, spectrum, cfg.scatterer(), cfg.window_lo, cfg.window_hi);
  if (index < 0 || index >= static_cast<std::int64_t>(result.values.size())) {
    throw ParameterError("eigenvalue index " + std::to_string(index) + " out of range [0, " +
                         std::to_string(result.values.size()) + ")");
  }
  const double lambda = result.values[static_cast<std::size_t>(index)].lambda;
  const double cutoff = 2.0 * lambda + 50.0;
  const auto green = greens::green_full(cfg.k, cfg.x0, lambda, cutoff);
  const auto mu = quantize::momentum_measure(green, true);

  const fs::path csv_path = fs::path(cfg.output_dir) / ("measure_" + std::to_string(index) + ".csv");
  auto os = open_output(csv_path);
  quantize::write_measure_csv(mu, os);

  heatmap::RenderOptions opts;
  opts.bandwidth = flags.bandwidth;
  opts.colormap = heatmap::colormap_from_name(flags.colormap);
  const auto img = heatmap::render_measure(mu, opts);
  const fs::path ppm_path = fs::path(cfg.output_dir) / ("measure_" + std::to_string(index) + ".ppm");
  auto ppm = open_output(ppm_path);
  heatmap::write_ppm(img, ppm);

  const double fraction = quantize::top_mass_fraction(mu, top_j);
  std::cout << csv_path.string() << " " << ppm_path.string() << "\n";
  std::cout << "lambda=" << csv::format_double(lambda) << " top-" << top_j
            << " mass fraction=" << csv::format_double(fraction) << "\n";
  return exit_ok;
}

int run_paircorr(const CommonFlags& flags, double T, double D) {
  const auto cfg = resolve_config(flags);
  const auto spectrum = lattice::enumerate_window(cfg.k, 0.0, T);
  stats::PairCorrConfig pc;
  pc.T = T;
  pc.psi1 = stats::Window::indicator(0.5, 1.0);
  pc.psi2 = pc.psi1;
  pc.hhat = stats::Window::indicator(-D, D);
  const double r = stats::pair_correlation(spectrum, pc);
  const double limit = stats::pc_limit(pc);
  const std::int64_t pairs = stats::close_pair_count(spectrum, T, D);

  ordered_json doc = base_report("paircorr", cfg);
  ordered_json res;
  res["T"] = T;
  res["D"] = D;
  res["R"] = r;
  res["limit"] = limit;
  if (limit != 0.0) {
    res["ratio"] = r / limit;
  } else {
    res["ratio"] = nullptr;
  }
  res["close_pairs"] = pairs;
  res["expected_pairs"] = 3.0 * pi * pi * D * std::pow(T, 1.5);
  doc["results"] = res;
  const fs::path path = fs::path(cfg.output_dir) / "paircorr.json";
  write_json_report(path, doc);
  std::cout << path.string() << "\n";
  return exit_ok;
}

int run_localize(const CommonFlags& flags, double T) {
  const auto cfg = resolve_config(flags);
  const double margin = 2.0;
  const auto spectrum = lattice::enumerate_window(cfg.k, 0.0, T + margin);
  const spectral::SecularEngine engine(cfg.k, T + margin);
  const auto report =
      stats::run_localization_pipeline(spectrum, engine, cfg.scatterer(), cfg.filter, T);

  const fs::path cert_path = fs::path(cfg.output_dir) / "certificates.csv";
  {
    auto os = open_output(cert_path);
    csv::Writer w(os);
    w.header({"m", "lambda", "top_atom_mass", "cluster_count", "cluster_mass", "tail_mass",
              "total_enumerated", "total_full", "top_e1_fraction"});
    for (const auto& c : report.certificates) {
      w.field(c.m).field(c.lambda).field(c.top_atom_mass).field(c.cluster_count);
      w.field(c.cluster_mass).field(c.tail_mass).field(c.total_enumerated).field(c.total_full);
      w.field(c.top_e1_fraction);
      w.end_row();
    }
  }

  stats::PairCorrConfig pc;
  pc.T = T;
  pc.hhat = stats::Window::indicator(-report.filter.params.D, report.filter.params.D);
  const double r = stats::pair_correlation(spectrum, pc);
  const double limit = stats::pc_limit(pc);

  ordered_json doc = base_report("localize", cfg);
  ordered_json res;
  res["T"] = T;
  res["G"] = report.filter.params.G;
  res["D"] = report.filter.params.D;
  res["E"] = report.filter.params.E;
  res["F"] = report.filter.params.F;
  res["retained_density"] = report.filter.density;
  res["retained_count"] = static_cast<std::int64_t>(report.filter.retained.size());
  res["total_count"] = report.filter.total;
  res["removed"] = {{"gap", report.filter.removed_gap},
                    {"cluster", report.filter.removed_cluster},
                    {"tail", report.filter.removed_tail}};
  res["min_top_mass"] = report.min_top_fraction;
  res["min_top_mass_energy"] = report.min_top_fraction_energy;
  res["solver_skips"] = report.solver_skips;
  res["pair_corr"] = {{"R", r}, {"limit", limit}, {"ratio", limit != 0.0 ? ordered_json(r / limit) : ordered_json(nullptr)}};
  doc["results"] = res;
  const fs::path path = fs::path(cfg.output_dir) / "localize.json";
  write_json_report(path, doc);
  std::cout << path.string() << " " << cert_path.string() << "\n";
  return exit_ok;
}

int run_count(const CommonFlags& flags, double r_max) {
  const auto cfg = resolve_config(flags);
  if (!(r_max > 0.0)) throw ParameterError("--rmax must be positive");
  std::vector<double> radii;
  for (int i = 1; i <= 16; ++i) radii.push_back(r_max * i / 16.0);

  const fs::path csv_path = fs::path(cfg.output_dir) / "count.csv";
  {
    auto os = open_output(csv_path);
    csv::Writer w(os);
    w.header({"R", "S", "weyl_volume", "remainder"});
    for (double r : radii) {
      const auto s = lattice::ball_count(cfg.k, r);
      const double vol = 4.0 / 3.0 * pi * r * r * r;
      w.field(r).field(s).field(vol).field(static_cast<double>(s) - vol);
      w.end_row();
    }
  }

  ordered_json doc = base_report("count", cfg);
  ordered_json res;
  res["r_max"] = r_max;
  res["radii"] = radii;
  try {
    const auto fit = lattice::remainder_exponent_fit(cfg.k, radii);
    res["fit"] = {{"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"residual_rms", fit.residual_rms},
                  {"points_used", fit.points_used}};
    res["fit_error"] = nullptr;
  } catch (const SolverError& e) {
    res["fit"] = nullptr;
    res["fit_error"] = e.what();
  }
  doc["results"] = res;
  const fs::path path = fs::path(cfg.output_dir) / "count.json";
  write_json_report(path, doc);
  std::cout << path.string() << " " << csv_path.string() << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point scatterer on the 3-torus: spectra, eigenfunctions, statistics"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--k", flags.k_text, "quasimomentum a,b,c or 'paper'");
    cmd->add_option("--window", flags.window_text, "energy window a:b");
    cmd->add_option("--phi", flags.phi, "extension parameter in (-pi, pi)")
        ->each([&](const std::string&) { flags.phi_set = true; });
    cmd->add_option("--bandwidth", flags.bandwidth, "heatmap kernel bandwidth (radians)");
    cmd->add_option("--colormap", flags.colormap, "viridis or gray");
    cmd->add_option("--threads", flags.threads, "worker threads (default: SCATTER_THREADS or all cores)");
  };

  auto* cmd_spectrum = app.add_subcommand("spectrum", "unperturbed spectrum CSV");
  add_common(cmd_spectrum);

  auto* cmd_perturbed = app.add_subcommand("perturbed", "perturbed eigenvalues CSV");
  add_common(cmd_perturbed);

  std::int64_t measure_index = 0;
  std::int64_t measure_top = 5;
  auto* cmd_measure = app.add_subcommand("measure", "momentum measure CSV + heatmap");
  add_common(cmd_measure);
  cmd_measure->add_option("--index", measure_index, "eigenvalue index within the window")->required();
  cmd_measure->add_option("--top", measure_top, "report the top-j mass fraction");

  double pc_T = 400.0, pc_D = 1.0;
  auto* cmd_paircorr = app.add_subcommand("paircorr", "pair correlation JSON report");
  add_common(cmd_paircorr);
  cmd_paircorr->add_option("--T", pc_T, "energy scale");
  cmd_paircorr->add_option("--D", pc_D, "window half-width");

  double loc_T = 300.0;
  auto* cmd_localize = app.add_subcommand("localize", "localization filter + certificates");
  add_common(cmd_localize);
  cmd_localize->add_option("--T", loc_T, "energy scale");

  double count_rmax = 80.0;
  auto* cmd_count = app.add_subcommand("count", "shifted ball counts and remainder fit");
  add_common(cmd_count);
  cmd_count->add_option("--rmax", count_rmax, "largest radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (cmd_spectrum->parsed()) return run_spectrum(flags);
    if (cmd_perturbed->parsed()) return run_perturbed(flags);
    if (cmd_measure->parsed()) return run_measure(flags, measure_index, measure_top);
    if (cmd_paircorr->parsed()) return run_paircorr(flags, pc_T, pc_D);
    if (cmd_localize->parsed()) return run_localize(flags, loc_T);
    if (cmd_count->parsed()) return run_count(flags, count_rmax);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return exit_coverage;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return exit_solver;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_other;
  }
  return exit_other;
}
