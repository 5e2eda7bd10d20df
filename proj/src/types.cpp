#include "scatter/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace scatter {

QuasiMomentum::QuasiMomentum(Vec3 kv, std::optional<double> kappa) : k(kv), dioph_type(kappa) {
  if (!std::isfinite(k.x) || !std::isfinite(k.y) || !std::isfinite(k.z)) {
    throw ConfigError("quasimomentum components must be finite");
  }
  if (dioph_type && *dioph_type < 4.0 / 3.0) {
    throw ConfigError("Diophantine type must be >= 4/3 in dimension 3");
  }
}

QuasiMomentum QuasiMomentum::reference() {
  QuasiMomentum q(Vec3{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(5.0)});
  q.check_rational_independence();
  return q;
}

bool QuasiMomentum::check_rational_independence(std::int64_t max_coeff, double tol) {
  bool independent = true;
  for (std::int64_t a = -max_coeff; a <= max_coeff && independent; ++a) {
    for (std::int64_t b = -max_coeff; b <= max_coeff && independent; ++b) {
      for (std::int64_t c = -max_coeff; c <= max_coeff; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double v = static_cast<double>(a) * k.x + static_cast<double>(b) * k.y +
                         static_cast<double>(c) * k.z;
        if (std::abs(v - std::nearbyint(v)) < tol) {
          independent = false;
          break;
        }
      }
    }
  }
  indep_checked = true;
  return independent;
}

LatticeMode LatticeMode::make(const Int3& xi, const Vec3& k) {
  LatticeMode m;
  m.xi = xi;
  m.energy = mode_energy(xi, k);
  if (m.energy > 0.0) {
    const double inv = 1.0 / std::sqrt(m.energy);
    m.direction = inv * (xi + k);
  }
  return m;
}

OrderedSpectrum::OrderedSpectrum(QuasiMomentum k, double lo, double hi, std::vector<LatticeMode> modes)
    : k_(k), lo_(lo), hi_(hi), modes_(std::move(modes)) {
  std::sort(modes_.begin(), modes_.end(),
            [](const LatticeMode& a, const LatticeMode& b) { return a.energy < b.energy; });
  energies_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) energies_[i] = modes_[i].energy;
  for (std::size_t i = 1; i < energies_.size(); ++i) {
    const double gap = energies_[i] - energies_[i - 1];
    if (gap <= 1e-12 * std::max(1.0, energies_[i])) {
      throw DegeneracyError("degenerate energies " + std::to_string(energies_[i - 1]) + " and " +
                            std::to_string(energies_[i]) + "; k looks rationally dependent");
    }
  }
}

OrderedSpectrum::Gap OrderedSpectrum::gap(std::int64_t j) const {
  if (j < 0 || j + 1 >= static_cast<std::int64_t>(modes_.size())) {
    throw ParameterError("gap index out of range");
  }
  return {energies_[static_cast<std::size_t>(j)], energies_[static_cast<std::size_t>(j) + 1]};
}

std::size_t OrderedSpectrum::lower_bound(double x) const {
  return static_cast<std::size_t>(std::lower_bound(energies_.begin(), energies_.end(), x) -
                                  energies_.begin());
}

std::size_t OrderedSpectrum::upper_bound(double x) const {
  return static_cast<std::size_t>(std::upper_bound(energies_.begin(), energies_.end(), x) -
                                  energies_.begin());
}

double OrderedSpectrum::nearest_distance(double lambda) const {
  if (energies_.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t i = lower_bound(lambda);
  double best = std::numeric_limits<double>::infinity();
  if (i < energies_.size()) best = std::min(best, std::abs(energies_[i] - lambda));
  if (i > 0) best = std::min(best, std::abs(energies_[i - 1] - lambda));
  return best;
}

std::size_t OrderedSpectrum::index_of_energy(double m) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(m));
  const std::size_t i = lower_bound(m - tol);
  if (i < energies_.size() && std::abs(energies_[i] - m) <= tol) return i;
  throw ParameterError("energy " + std::to_string(m) + " is not in the spectrum");
}

}  // namespace scatter
