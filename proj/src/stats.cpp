#include "scatter/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scatter/parallel.hpp"
#include "scatter/quadrature.hpp"

namespace scatter::stats {

double Window::operator()(double x) const {
  if (x < lo || x > hi) return 0.0;
  if (kind == Kind::indicator) return 1.0;
  const double u = 2.0 * (x - lo) / (hi - lo) - 1.0;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / d);
}

double Window::integral() const {
  if (kind == Kind::indicator) return hi - lo;
  return adaptive_simpson([this](double x) { return (*this)(x); }, lo, hi, 1e-12);
}

Window Window::indicator(double lo, double hi) {
  if (!(lo <= hi)) throw ParameterError("window needs lo <= hi");
  return Window{Kind::indicator, lo, hi};
}

Window Window::smooth_bump(double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("bump window needs lo < hi");
  return Window{Kind::bump, lo, hi};
}

namespace {

void require_coverage(const OrderedSpectrum& spectrum, double hi_needed, const char* what) {
  if (spectrum.window_lo() > 0.0 || spectrum.window_hi() < hi_needed - 1e-9) {
    throw CoverageError(std::string(what) + ": spectrum must cover [0, " +
                        std::to_string(hi_needed) + "]");
  }
}

}  // namespace

double pair_correlation(const OrderedSpectrum& spectrum, const PairCorrConfig& cfg) {
  if (!(cfg.T > 0.0)) throw ParameterError("T must be positive");
  const double sup = std::max(cfg.psi1.hi, cfg.psi2.hi);
  require_coverage(spectrum, cfg.T * sup, "pair_correlation");
  const auto& e = spectrum.energies();
  const double sqrtT = std::sqrt(cfg.T);
  const double reach = std::max(std::abs(cfg.hhat.lo), std::abs(cfg.hhat.hi)) / sqrtT;

  double acc = 0.0;
  const std::size_t i_begin = spectrum.lower_bound(cfg.T * cfg.psi1.lo);
  for (std::size_t i = i_begin; i < e.size(); ++i) {
    if (e[i] > cfg.T * cfg.psi1.hi) break;
    const double w1 = cfg.psi1(e[i] / cfg.T);
    if (w1 == 0.0) continue;
    for (std::size_t j = spectrum.lower_bound(e[i] - reach); j < e.size(); ++j) {
      if (e[j] > e[i] + reach) break;
      if (j == i) continue;
      const double w2 = cfg.psi2(e[j] / cfg.T);
      if (w2 == 0.0) continue;
      acc += w1 * w2 * cfg.hhat(sqrtT * (e[i] - e[j]));
    }
  }
  return 3.0 / (4.0 * pi * std::pow(cfg.T, 1.5)) * acc;
}

std::int64_t close_pair_count(const OrderedSpectrum& spectrum, double T, double D) {
  if (!(T > 0.0) || !(D >= 0.0)) throw ParameterError("need T > 0 and D >= 0");
  require_coverage(spectrum, T, "close_pair_count");
  const auto& e = spectrum.energies();
  const double reach = D / std::sqrt(T);
  std::int64_t count = 0;
  for (std::size_t i = spectrum.upper_bound(T / 2.0); i < e.size(); ++i) {
    if (e[i] > T) break;
    for (std::size_t j = spectrum.lower_bound(e[i] - reach); j < e.size(); ++j) {
      if (e[j] > e[i] + reach) break;
      if (j == i || e[j] <= T / 2.0 || e[j] > T) continue;
      ++count;
    }
  }
  return count;
}

double pc_limit(const PairCorrConfig& cfg) {
  double hhat_int = cfg.hhat.integral();
  double radial;
  if (cfg.psi1.kind == Window::Kind::indicator && cfg.psi2.kind == Window::Kind::indicator) {
    const double lo = std::max(cfg.psi1.lo, cfg.psi2.lo);
    const double hi = std::min(cfg.psi1.hi, cfg.psi2.hi);
    radial = hi > lo ? 0.5 * (hi * hi - lo * lo) : 0.0;
  } else {
    const double lo = std::max({0.0, cfg.psi1.lo, cfg.psi2.lo});
    const double hi = std::min(cfg.psi1.hi, cfg.psi2.hi);
    radial = hi > lo
                 ? adaptive_simpson([&](double r) { return cfg.psi1(r) * cfg.psi2(r) * r; }, lo,
                                    hi, 1e-12)
                 : 0.0;
  }
  return 3.0 * pi * hhat_int * radial;
}

std::int64_t gap_excess_count(const OrderedSpectrum& spectrum, double G, double T) {
  if (!(G > 0.0)) throw ParameterError("G must be positive");
  require_coverage(spectrum, T, "gap_excess_count");
  const auto& e = spectrum.energies();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < e.size() && e[i] <= T; ++i) {
    if (i + 1 >= e.size()) {
      throw CoverageError("gap_excess_count needs one mode beyond T");
    }
    if (e[i + 1] - e[i] > G / std::sqrt(e[i + 1])) ++count;
  }
  return count;
}

std::int64_t cluster_excess_count(const OrderedSpectrum& spectrum, double D, double E, double T) {
  if (!(D >= 0.0) || !(E >= 0.0)) throw ParameterError("need D >= 0 and E >= 0");
  require_coverage(spectrum, T, "cluster_excess_count");
  const auto& e = spectrum.energies();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < e.size() && e[i] <= T; ++i) {
    const double w = D / std::sqrt(e[i]);
    const std::size_t lo = spectrum.lower_bound(e[i] - w);
    const std::size_t hi = spectrum.upper_bound(std::min(e[i] + w, T));
    if (static_cast<double>(hi - lo) > E + 1.0) ++count;
  }
  return count;
}

double tail_sum_by_index(const OrderedSpectrum& spectrum, std::size_t m_index, double A,
                         double T) {
  if (m_index >= spectrum.size()) throw ParameterError("mode index out of range");
  if (!(A >= 0.0)) throw ParameterError("A must be nonnegative");
  require_coverage(spectrum, T, "tail_sum");
  const auto& e = spectrum.energies();
  const double m = e[m_index];
  const double w = A / std::sqrt(m);
  double acc = 0.0;
  const std::size_t left_end = spectrum.lower_bound(m - w);
  for (std::size_t i = 0; i < left_end; ++i) {
    const double d = e[i] - m;
    acc += 1.0 / (d * d);
  }
  const std::size_t right_end = spectrum.upper_bound(T);
  for (std::size_t i = spectrum.upper_bound(m + w); i < right_end; ++i) {
    const double d = e[i] - m;
    acc += 1.0 / (d * d);
  }
  return acc;
}

double tail_sum(const OrderedSpectrum& spectrum, double m_energy, double A, double T) {
  return tail_sum_by_index(spectrum, spectrum.index_of_energy(m_energy), A, T);
}

ShellCounts shell_counts(const OrderedSpectrum& spectrum, double T) {
  require_coverage(spectrum, T, "shell_counts");
  ShellCounts out;
  out.counts.assign(static_cast<std::size_t>(std::floor(std::pow(T, 1.5))) + 1, 0);
  for (double n : spectrum.energies()) {
    if (n > T) break;
    const auto j = static_cast<std::size_t>(std::pow(n, 1.5));
    if (j < out.counts.size()) ++out.counts[j];
    ++out.total;
  }
  for (std::int64_t c : out.counts) out.second_moment += static_cast<double>(c) * c;
  return out;
}

FilterResult localization_filter(const OrderedSpectrum& spectrum, FilterParams params, double T) {
  if (!(params.G > 0.0) || !(params.D >= 0.0)) throw ParameterError("need G > 0 and D >= 0");
  require_coverage(spectrum, T, "localization_filter");
  const auto& e = spectrum.energies();
  const auto n_t = static_cast<std::size_t>(spectrum.upper_bound(T));
  const double budget = std::pow(T, 1.5) / params.G;

  if (params.E < 0.0) {
    double chosen = 1.0;
    while (chosen < 4096.0 &&
           static_cast<double>(cluster_excess_count(spectrum, params.D, chosen, T)) > budget) {
      chosen += 1.0;
    }
    params.E = chosen;
  }
  if (params.F < 0.0) {
    std::vector<double> scaled(n_t);
    parallel_for(static_cast<std::int64_t>(n_t), [&](std::int64_t i) {
      scaled[static_cast<std::size_t>(i)] =
          tail_sum_by_index(spectrum, static_cast<std::size_t>(i), params.D, T) /
          e[static_cast<std::size_t>(i)];
    });
    std::vector<double> sorted = scaled;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const auto k = static_cast<std::size_t>(budget);
    params.F = k < sorted.size() ? sorted[k] : 0.0;
  }

  FilterResult out;
  out.params = params;
  out.T = T;
  out.total = static_cast<std::int64_t>(n_t);
  out.smallest_energy = e.empty() ? 0.0 : e[0];

  std::vector<char> removed(n_t, 0);
  for (std::size_t i = 0; i < n_t; ++i) {
    // The first point has no left neighbour and is treated as an infinite gap.
    const bool wide = i == 0 || (e[i] - e[i - 1]) > params.G / std::sqrt(e[i]);
    if (wide) {
      removed[i] |= 1;
      ++out.removed_gap;
    }
  }
  for (std::size_t i = 0; i < n_t; ++i) {
    const double w = params.D / std::sqrt(e[i]);
    const std::size_t lo = spectrum.lower_bound(e[i] - w);
    const std::size_t hi = spectrum.upper_bound(std::min(e[i] + w, T));
    if (static_cast<double>(hi - lo) > params.E + 1.0) {
      removed[i] |= 2;
      ++out.removed_cluster;
    }
  }
  {
    std::vector<double> tails(n_t);
    parallel_for(static_cast<std::int64_t>(n_t), [&](std::int64_t i) {
      tails[static_cast<std::size_t>(i)] =
          tail_sum_by_index(spectrum, static_cast<std::size_t>(i), params.D, T);
    });
    for (std::size_t i = 0; i < n_t; ++i) {
      if (tails[i] > params.F * e[i]) {
        removed[i] |= 4;
        ++out.removed_tail;
      }
    }
  }
  for (std::size_t i = 0; i < n_t; ++i) {
    if (!removed[i]) out.retained.push_back(i);
  }
  out.density = n_t == 0 ? 0.0 : static_cast<double>(out.retained.size()) / static_cast<double>(n_t);
  return out;
}

MassCertificate localized_measure_certificate(const OrderedSpectrum& spectrum,
                                              const spectral::SecularEngine& engine,
                                              const spectral::ScattererConfig& cfg,
                                              std::size_t m_index, const FilterParams& params,
                                              double T) {
  if (m_index == 0 || m_index >= spectrum.size()) {
    throw ParameterError("certificate needs a mode with a left neighbour");
  }
  require_coverage(spectrum, T, "certificate");
  const auto& e = spectrum.energies();
  MassCertificate cert;
  cert.m_index = m_index;
  cert.m = e[m_index];
  cert.lambda =
      spectral::solve_gap(engine, spectrum, cfg, static_cast<std::int64_t>(m_index) - 1).lambda;

  const double w = params.D / std::sqrt(cert.m);
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double d = e[i] - cert.lambda;
    const double mass = 1.0 / (d * d);
    total += mass;
    if (i == m_index) {
      cert.top_atom_mass = mass;
    } else if (std::abs(e[i] - cert.m) <= w) {
      ++cert.cluster_count;
      cert.cluster_mass += mass;
    } else {
      cert.tail_mass += mass;
    }
  }
  cert.total_enumerated = total;
  cert.total_full = engine.inv_square_sum(cert.lambda);

  // Literal top-(E+1) mass of the momentum measure.
  const auto take = static_cast<std::size_t>(std::max(1.0, params.E + 1.0));
  thread_local std::vector<double> weights;
  weights.clear();
  weights.reserve(e.size());
  for (double n : e) {
    const double d = n - cert.lambda;
    weights.push_back(1.0 / (d * d));
  }
  const std::size_t cut = std::min(take, weights.size());
  std::nth_element(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(cut - 1),
                   weights.end(), std::greater<double>());
  double top = 0.0;
  for (std::size_t i = 0; i < cut; ++i) top += weights[i];
  cert.top_e1_fraction = top / cert.total_full;
  return cert;
}

LocalizationReport run_localization_pipeline(const OrderedSpectrum& spectrum,
                                             const spectral::SecularEngine& engine,
                                             const spectral::ScattererConfig& cfg,
                                             FilterParams params, double T, int threads) {
  LocalizationReport report;
  report.filter = localization_filter(spectrum, params, T);
  if (cfg.phi != 0.0) engine.c0();
  const auto& retained = report.filter.retained;
  std::vector<MassCertificate> certs(retained.size());
  std::vector<char> ok(retained.size(), 0);
  parallel_for(
      static_cast<std::int64_t>(retained.size()),
      [&](std::int64_t i) {
        const std::size_t idx = retained[static_cast<std::size_t>(i)];
        if (idx == 0) return;  // no left gap: filter already removed it
        try {
          certs[static_cast<std::size_t>(i)] = localized_measure_certificate(
              spectrum, engine, cfg, idx, report.filter.params, T);
          ok[static_cast<std::size_t>(i)] = 1;
        } catch (const SolverError&) {
          ok[static_cast<std::size_t>(i)] = 0;
        }
      },
      threads);
  report.min_top_fraction = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < certs.size(); ++i) {
    if (!ok[i]) {
      ++report.solver_skips;
      continue;
    }
    report.certificates.push_back(certs[i]);
    if (certs[i].top_e1_fraction < report.min_top_fraction) {
      report.min_top_fraction = certs[i].top_e1_fraction;
      report.min_top_fraction_energy = certs[i].m;
    }
  }
  if (report.certificates.empty()) report.min_top_fraction = 0.0;
  return report;
}

}  // namespace scatter::stats
