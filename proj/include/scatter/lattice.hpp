#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "scatter/errors.hpp"
#include "scatter/types.hpp"

namespace scatter::lattice {

struct EnumerationLimits {
  std::size_t max_modes = 50'000'000;
};

/// All modes with |xi+k|^2 in [lo, hi], sorted by energy.  The xi3 range per
/// (xi1, xi2) column is solved analytically, so cost is O(output + surface).
OrderedSpectrum enumerate_window(const QuasiMomentum& k, double lo, double hi,
                                 const EnumerationLimits& limits = {});

/// N(x) = #{xi : |xi+k|^2 <= x}, computed without materializing modes.
std::int64_t counting_n(const QuasiMomentum& k, double x);

/// S(R) = N(R^2).
std::int64_t ball_count(const QuasiMomentum& k, double radius);

/// Smoothed count: sum over the lattice of the ball indicator mollified by the
/// radial bump c (1-|x|^2)^4 at scale delta.  Satisfies
/// S(R-delta) <= smoothed_count(R, delta) <= S(R+delta).
double smoothed_count(const QuasiMomentum& k, double radius, double delta);

/// Mollifier weight at distance t from the ball center (exposed for tests).
double smoothing_weight(double t, double radius, double delta);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int points_used = 0;
};

/// Least-squares slope of log|S(R) - (4/3) pi R^3| against log R.
ExponentFit remainder_exponent_fit(const QuasiMomentum& k, std::span<const double> radii);

/// Columns xi1,xi2,xi3,energy,dir_x,dir_y,dir_z, sorted by energy.
void write_spectrum_csv(const OrderedSpectrum& spectrum, std::ostream& os);

/// Streaming visit of every mode with energy <= energy_max, in deterministic
/// (xi1, xi2, xi3) order.  fn(xi, energy).
template <class F>
void visit_ball_modes(const Vec3& k, double energy_max, F&& fn) {
  if (energy_max < 0.0) return;
  const double s1 = std::sqrt(energy_max);
  const auto lo1 = static_cast<std::int64_t>(std::ceil(-k.x - s1)) - 1;
  const auto hi1 = static_cast<std::int64_t>(std::floor(-k.x + s1)) + 1;
  for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) {
    const double d1 = static_cast<double>(x1) + k.x;
    const double rem1 = energy_max - d1 * d1;
    if (rem1 < 0.0) continue;
    const double s2 = std::sqrt(rem1);
    const auto lo2 = static_cast<std::int64_t>(std::ceil(-k.y - s2)) - 1;
    const auto hi2 = static_cast<std::int64_t>(std::floor(-k.y + s2)) + 1;
    for (std::int64_t x2 = lo2; x2 <= hi2; ++x2) {
      const double d2 = static_cast<double>(x2) + k.y;
      const double rem2 = rem1 - d2 * d2;
      if (rem2 < 0.0) continue;
      const double s3 = std::sqrt(rem2);
      const auto lo3 = static_cast<std::int64_t>(std::ceil(-k.z - s3)) - 1;
      const auto hi3 = static_cast<std::int64_t>(std::floor(-k.z + s3)) + 1;
      for (std::int64_t x3 = lo3; x3 <= hi3; ++x3) {
        const Int3 xi{x1, x2, x3};
        const double n = mode_energy(xi, k);
        if (n <= energy_max) fn(xi, n);
      }
    }
  }
}

}  // namespace scatter::lattice
