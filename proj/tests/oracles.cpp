#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include "scatter/quadrature.hpp"

namespace scatter::oracle {

std::vector<LatticeMode> box_enumerate(const QuasiMomentum& k, double lo, double hi) {
  std::vector<LatticeMode> out;
  const double reach = std::sqrt(hi) + 1.0;
  const Vec3& kv = k.k;
  const auto lo1 = static_cast<std::int64_t>(std::floor(-kv.x - reach));
  const auto hi1 = static_cast<std::int64_t>(std::ceil(-kv.x + reach));
  const auto lo2 = static_cast<std::int64_t>(std::floor(-kv.y - reach));
  const auto hi2 = static_cast<std::int64_t>(std::ceil(-kv.y + reach));
  const auto lo3 = static_cast<std::int64_t>(std::floor(-kv.z - reach));
  const auto hi3 = static_cast<std::int64_t>(std::ceil(-kv.z + reach));
  for (std::int64_t x = lo1; x <= hi1; ++x) {
    for (std::int64_t y = lo2; y <= hi2; ++y) {
      for (std::int64_t z = lo3; z <= hi3; ++z) {
        const Int3 xi{x, y, z};
        const double n = mode_energy(xi, kv);
        if (n >= lo && n <= hi) out.push_back(LatticeMode::make(xi, kv));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LatticeMode& a, const LatticeMode& b) { return a.energy < b.energy; });
  return out;
}

double c0_box(const QuasiMomentum& k, std::int64_t box) {
  const double cutoff = static_cast<double>(box) * static_cast<double>(box);
  double sum = 0.0;
  const Vec3& kv = k.k;
  for (std::int64_t x = -box; x <= box; ++x) {
    for (std::int64_t y = -box; y <= box; ++y) {
      for (std::int64_t z = -box; z <= box; ++z) {
        const double n = mode_energy(Int3{x, y, z}, kv);
        if (n <= cutoff) sum += 1.0 / (n * n + 1.0);
      }
    }
  }
  auto tail = [cutoff](double u) {
    const double t = cutoff / (u * u);
    return 2.0 * pi * std::sqrt(t) / (t * t + 1.0) * (2.0 * cutoff / (u * u * u));
  };
  return sum + gl_integrate(tail, 0.0, 1.0, 64);
}

std::vector<double> ball_energies_box(const QuasiMomentum& k, std::int64_t box) {
  const double cutoff = static_cast<double>(box) * static_cast<double>(box);
  std::vector<double> out;
  const Vec3& kv = k.k;
  for (std::int64_t x = -box; x <= box; ++x) {
    for (std::int64_t y = -box; y <= box; ++y) {
      for (std::int64_t z = -box; z <= box; ++z) {
        const double n = mode_energy(Int3{x, y, z}, kv);
        if (n <= cutoff) out.push_back(n);
      }
    }
  }
  return out;
}

double secular_box(const std::vector<double>& energies, double cutoff, double lambda) {
  double sum = 0.0;
  for (double n : energies) {
    sum += 1.0 / (n - lambda) - n / (n * n + 1.0);
  }
  auto tail = [cutoff, lambda](double u) {
    const double t = cutoff / (u * u);
    return 2.0 * pi * std::sqrt(t) * (1.0 + t * lambda) / ((t - lambda) * (t * t + 1.0)) *
           (2.0 * cutoff / (u * u * u));
  };
  return sum + gl_integrate(tail, 0.0, 1.0, 64);
}

double pair_correlation_naive(const std::vector<double>& energies, double T, double psi_lo,
                              double psi_hi, double D) {
  const double sqrtT = std::sqrt(T);
  double acc = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double xi = energies[i] / T;
    if (xi < psi_lo || xi > psi_hi) continue;
    for (std::size_t j = 0; j < energies.size(); ++j) {
      if (j == i) continue;
      const double xj = energies[j] / T;
      if (xj < psi_lo || xj > psi_hi) continue;
      if (std::abs(sqrtT * (energies[i] - energies[j])) <= D) acc += 1.0;
    }
  }
  return 3.0 / (4.0 * pi * std::pow(T, 1.5)) * acc;
}

std::int64_t close_pairs_naive(const std::vector<double>& energies, double T, double D) {
  const double sqrtT = std::sqrt(T);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (energies[i] <= T / 2.0 || energies[i] > T) continue;
    for (std::size_t j = 0; j < energies.size(); ++j) {
      if (j == i) continue;
      if (energies[j] <= T / 2.0 || energies[j] > T) continue;
      if (sqrtT * std::abs(energies[i] - energies[j]) <= D) ++count;
    }
  }
  return count;
}

std::complex<double> ylm_pair_integral(quantize::SphericalHarmonicIndex a,
                                       quantize::SphericalHarmonicIndex b, int n_theta,
                                       int n_phi) {
  const auto& rule = gauss_legendre(n_theta);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double ct = rule.nodes[static_cast<std::size_t>(i)];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    std::complex<double> ring = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      const Vec3 dir{st * std::cos(phi), st * std::sin(phi), ct};
      ring += quantize::ylm(a, dir) * std::conj(quantize::ylm(b, dir));
    }
    acc += rule.weights[static_cast<std::size_t>(i)] * ring * (2.0 * pi / n_phi);
  }
  return acc;
}

}  // namespace scatter::oracle
