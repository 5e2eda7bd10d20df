#include "scatter/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "scatter/csv.hpp"
#include "scatter/quadrature.hpp"

namespace scatter::lattice {

namespace {

// Integer interval [lo, hi]; empty when lo > hi.
struct IRange {
  std::int64_t lo = 1, hi = 0;
};

}  // namespace

OrderedSpectrum enumerate_window(const QuasiMomentum& k, double lo, double hi,
                                 const EnumerationLimits& limits) {
  if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ParameterError("energy window must satisfy 0 <= a <= b < inf");
  }
  const double estimate =
      4.0 / 3.0 * pi * (std::pow(hi, 1.5) - std::pow(lo, 1.5)) + 4.0 * pi * hi + 1024.0;
  if (estimate > static_cast<double>(limits.max_modes)) {
    throw CapacityError("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] needs ~" + std::to_string(static_cast<std::int64_t>(estimate)) +
                        " modes, over the budget of " + std::to_string(limits.max_modes));
  }

  std::vector<LatticeMode> modes;
  modes.reserve(static_cast<std::size_t>(std::max(0.0, estimate * 0.75)));
  const Vec3& kv = k.k;
  const double s1 = std::sqrt(hi);
  const auto lo1 = static_cast<std::int64_t>(std::ceil(-kv.x - s1)) - 1;
  const auto hi1 = static_cast<std::int64_t>(std::floor(-kv.x + s1)) + 1;
  for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) {
    const double d1 = static_cast<double>(x1) + kv.x;
    const double rem1 = hi - d1 * d1;
    if (rem1 < 0.0) continue;
    const double s2 = std::sqrt(rem1);
    const auto lo2 = static_cast<std::int64_t>(std::ceil(-kv.y - s2)) - 1;
    const auto hi2 = static_cast<std::int64_t>(std::floor(-kv.y + s2)) + 1;
    for (std::int64_t x2 = lo2; x2 <= hi2; ++x2) {
      const double d2 = static_cast<double>(x2) + kv.y;
      const double rem2 = rem1 - d2 * d2;
      if (rem2 < 0.0) continue;
      const double hi3 = std::sqrt(rem2);
      const double alo = lo - (hi - rem2);  // lo - r12

      IRange ranges[2];
      int nranges = 0;
      if (alo <= 0.0) {
        ranges[nranges++] = {static_cast<std::int64_t>(std::ceil(-kv.z - hi3)) - 1,
                             static_cast<std::int64_t>(std::floor(-kv.z + hi3)) + 1};
      } else {
        const double lo3 = std::sqrt(alo);
        ranges[0] = {static_cast<std::int64_t>(std::ceil(-kv.z - hi3)) - 1,
                     static_cast<std::int64_t>(std::floor(-kv.z - lo3)) + 1};
        ranges[1] = {static_cast<std::int64_t>(std::ceil(-kv.z + lo3)) - 1,
                     static_cast<std::int64_t>(std::floor(-kv.z + hi3)) + 1};
        nranges = 2;
        if (ranges[0].hi + 1 >= ranges[1].lo) {  // nudged intervals touch: visit once
          ranges[0].hi = ranges[1].hi;
          nranges = 1;
        }
      }
      for (int r = 0; r < nranges; ++r) {
        for (std::int64_t x3 = ranges[r].lo; x3 <= ranges[r].hi; ++x3) {
          const Int3 xi{x1, x2, x3};
          const double n = mode_energy(xi, kv);
          if (n >= lo && n <= hi) modes.push_back(LatticeMode::make(xi, kv));
        }
      }
    }
  }
  return OrderedSpectrum(k, lo, hi, std::move(modes));
}

std::int64_t counting_n(const QuasiMomentum& k, double x) {
  if (!(x >= 0.0)) {
    if (std::isnan(x)) throw ParameterError("counting bound must be a number");
    return 0;
  }
  const Vec3& kv = k.k;
  std::int64_t count = 0;
  const double s1 = std::sqrt(x);
  const auto lo1 = static_cast<std::int64_t>(std::ceil(-kv.x - s1)) - 1;
  const auto hi1 = static_cast<std::int64_t>(std::floor(-kv.x + s1)) + 1;
  for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) {
    const double d1 = static_cast<double>(x1) + kv.x;
    const double rem1 = x - d1 * d1;
    if (rem1 < 0.0) continue;
    const double s2 = std::sqrt(rem1);
    const auto lo2 = static_cast<std::int64_t>(std::ceil(-kv.y - s2)) - 1;
    const auto hi2 = static_cast<std::int64_t>(std::floor(-kv.y + s2)) + 1;
    for (std::int64_t x2 = lo2; x2 <= hi2; ++x2) {
      const double d2 = static_cast<double>(x2) + kv.y;
      const double rem2 = rem1 - d2 * d2;
      if (rem2 < 0.0) continue;
      const double s3 = std::sqrt(rem2);
      auto e3 = [&](std::int64_t x3) { return mode_energy(Int3{x1, x2, x3}, kv); };
      auto lo3 = static_cast<std::int64_t>(std::ceil(-kv.z - s3));
      auto hi3 = static_cast<std::int64_t>(std::floor(-kv.z + s3));
      // Reconcile the analytic range with the exact predicate at the ends.
      while (e3(lo3 - 1) <= x) --lo3;
      while (e3(hi3 + 1) <= x) ++hi3;
      while (lo3 <= hi3 && e3(lo3) > x) ++lo3;
      while (lo3 <= hi3 && e3(hi3) > x) --hi3;
      if (lo3 <= hi3) count += hi3 - lo3 + 1;
    }
  }
  return count;
}

std::int64_t ball_count(const QuasiMomentum& k, double radius) {
  if (!(radius >= 0.0)) throw ParameterError("radius must be nonnegative");
  return counting_n(k, radius * radius);
}

namespace {

// Radial bump c (1-r^2)^4 on r < 1, unit integral over R^3: c = 3465/(512 pi).
constexpr double bump_c = 3465.0 / (512.0 * pi);

double bump_density(double r) {
  const double u = 1.0 - r * r;
  return 4.0 * pi * bump_c * r * r * u * u * u * u;
}

// int_0^x 4 pi c r^2 (1-r^2)^4 dr, closed form; bump_mass(1) == 1.
double bump_mass(double x) {
  const double x2 = x * x;
  const double poly = x2 * x * (1.0 / 3.0 + x2 * (-4.0 / 5.0 + x2 * (6.0 / 7.0 + x2 * (-4.0 / 9.0 + x2 / 11.0))));
  return 4.0 * pi * bump_c * poly;
}

// Fraction of the sphere of radius s around a point at distance t from the
// center that lies inside the ball of radius R.
double cap_fraction(double t, double s, double radius) {
  const double c = (t * t + s * s - radius * radius) / (2.0 * t * s);
  return 0.5 * (1.0 - std::clamp(c, -1.0, 1.0));
}

}  // namespace

double smoothing_weight(double t, double radius, double delta) {
  if (t <= radius - delta) return 1.0;
  if (t >= radius + delta) return 0.0;
  if (t < 1e-300) return 1.0;
  // The clamp boundary sits at s* = |t - R|; below it the cap fraction is
  // constant, above it the integrand is analytic. Integrate the two pieces.
  const double rstar = std::min(1.0, std::abs(t - radius) / delta);
  double acc = 0.0;
  if (rstar > 0.0 && t < radius) acc += bump_mass(rstar);
  auto f = [&](double r) { return bump_density(r) * cap_fraction(t, delta * r, radius); };
  acc += gl_integrate(f, rstar, 1.0, 64);
  return acc;
}

double smoothed_count(const QuasiMomentum& k, double radius, double delta) {
  if (!(radius > 0.0)) throw ParameterError("radius must be positive");
  if (!(delta > 0.0) || !(delta < radius)) throw ParameterError("need 0 < delta < radius");
  const double inner = (radius - delta) * (radius - delta);
  const double outer = (radius + delta) * (radius + delta);
  // Interior points carry weight 1; only the shell needs the mollifier.
  // Streamed directly: the smoothed sum is insensitive to degenerate energies.
  double total = static_cast<double>(counting_n(k, inner));
  visit_ball_modes(k.k, outer, [&](const Int3&, double n) {
    if (n <= inner) return;
    total += smoothing_weight(std::sqrt(n), radius, delta);
  });
  return total;
}

ExponentFit remainder_exponent_fit(const QuasiMomentum& k, std::span<const double> radii) {
  if (radii.size() < 8) throw ParameterError("need at least 8 radii");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw ParameterError("radii must be increasing");
  }
  std::vector<double> xs, ys;
  for (double r : radii) {
    if (!(r > 0.0)) continue;
    const double s = static_cast<double>(ball_count(k, r));
    const double rem = std::abs(s - 4.0 / 3.0 * pi * r * r * r);
    if (rem <= 0.0) continue;  // exact agreement carries no slope information
    xs.push_back(std::log(r));
    ys.push_back(std::log(rem));
  }
  if (xs.size() < 3) throw FitError("fewer than 3 usable remainder points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += e * e;
  }
  fit.residual_rms = std::sqrt(rss / n);
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

void write_spectrum_csv(const OrderedSpectrum& spectrum, std::ostream& os) {
  csv::Writer w(os);
  w.header({"xi1", "xi2", "xi3", "energy", "dir_x", "dir_y", "dir_z"});
  for (const auto& m : spectrum.modes()) {
    w.field(m.xi.x).field(m.xi.y).field(m.xi.z).field(m.energy);
    w.field(m.direction.x).field(m.direction.y).field(m.direction.z);
    w.end_row();
  }
}

}  // namespace scatter::lattice
