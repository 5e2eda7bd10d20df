#pragma once

#include <cstdint>
#include <vector>

#include "scatter/spectral.hpp"
#include "scatter/types.hpp"

namespace scatter::stats {

/// Window function on the line: sharp indicator of [lo, hi] or a smooth
/// C-infinity bump supported on (lo, hi).
struct Window {
  enum class Kind { indicator, bump };
  Kind kind = Kind::indicator;
  double lo = 0.0;
  double hi = 1.0;

  double operator()(double x) const;
  double integral() const;

  static Window indicator(double lo, double hi);
  static Window smooth_bump(double lo, double hi);
};

struct PairCorrConfig {
  Window psi1 = Window::indicator(0.5, 1.0);
  Window psi2 = Window::indicator(0.5, 1.0);
  Window hhat = Window::indicator(-1.0, 1.0);  // even window, support [-D, D]
  double T = 100.0;
};

/// R(psi1, psi2, h, T) = 3/(4 pi T^{3/2}) sum_{i != j} psi1(n_i/T) psi2(n_j/T)
/// hhat(sqrt(T) (n_i - n_j)), by a sorted sweep over the window support.
double pair_correlation(const OrderedSpectrum& spectrum, const PairCorrConfig& cfg);

/// Ordered pairs n != m, both in (T/2, T], with sqrt(T) |n - m| <= D.
std::int64_t close_pair_count(const OrderedSpectrum& spectrum, double T, double D);

/// T -> infinity limit: 3 pi (int hhat) (int_0^inf psi1 psi2 r dr).
double pc_limit(const PairCorrConfig& cfg);

/// #{n_i <= T : n_{i+1} - n_i > G / sqrt(n_{i+1})}.
std::int64_t gap_excess_count(const OrderedSpectrum& spectrum, double G, double T);

/// #{n <= T : |N(T) cap [n - D/sqrt(n), n + D/sqrt(n)]| > E + 1}.
std::int64_t cluster_excess_count(const OrderedSpectrum& spectrum, double D, double E, double T);

/// sum over n <= T with sqrt(m) |n - m| > A of (n - m)^{-2}.
double tail_sum(const OrderedSpectrum& spectrum, double m_energy, double A, double T);
double tail_sum_by_index(const OrderedSpectrum& spectrum, std::size_t m_index, double A, double T);

struct ShellCounts {
  std::vector<std::int64_t> counts;  // counts[j] = #{n <= T : n^{3/2} in [j, j+1)}
  std::int64_t total = 0;
  double second_moment = 0.0;
};
ShellCounts shell_counts(const OrderedSpectrum& spectrum, double T);

struct FilterParams {
  double G = 10.0;
  double D = 1.0;
  double E = -1.0;  // < 0: smallest integer E with the cluster count within budget
  double F = -1.0;  // < 0: percentile of tail sums meeting the budget
};

struct FilterResult {
  FilterParams params;  // with E, F resolved
  double T = 0.0;
  std::vector<std::size_t> retained;  // indices into the spectrum
  std::int64_t total = 0;             // |N(T)|
  std::int64_t removed_gap = 0;
  std::int64_t removed_cluster = 0;
  std::int64_t removed_tail = 0;
  double density = 0.0;
  double smallest_energy = 0.0;  // the lower cutoff the tail lemma assumes
};

/// Three-stage removal: wide left gaps, overcrowded windows, heavy tails.
/// Stages are evaluated on the full N(T); the removal sets may overlap.
FilterResult localization_filter(const OrderedSpectrum& spectrum, FilterParams params, double T);

struct MassCertificate {
  std::size_t m_index = 0;
  double m = 0.0;
  double lambda = 0.0;          // secular root in the gap left of m
  double top_atom_mass = 0.0;   // (m - lambda)^{-2}
  std::int64_t cluster_count = 0;
  double cluster_mass = 0.0;    // atoms with 0 < |n - m| <= D/sqrt(m)
  double tail_mass = 0.0;       // remaining enumerated atoms
  double total_enumerated = 0.0;
  double total_full = 0.0;      // all modes, density tail included
  double top_e1_fraction = 0.0; // E+1 largest atom weights / total_full
};

MassCertificate localized_measure_certificate(const OrderedSpectrum& spectrum,
                                              const spectral::SecularEngine& engine,
                                              const spectral::ScattererConfig& cfg,
                                              std::size_t m_index, const FilterParams& params,
                                              double T);

struct LocalizationReport {
  FilterResult filter;
  std::vector<MassCertificate> certificates;
  double min_top_fraction = 0.0;
  double min_top_fraction_energy = 0.0;
  std::int64_t solver_skips = 0;  // retained m whose certificate could not be solved
};

LocalizationReport run_localization_pipeline(const OrderedSpectrum& spectrum,
                                             const spectral::SecularEngine& engine,
                                             const spectral::ScattererConfig& cfg,
                                             FilterParams params, double T, int threads = 0);

}  // namespace scatter::stats
