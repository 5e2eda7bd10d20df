#include "scatter/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "scatter/csv.hpp"
#include "scatter/lattice.hpp"
#include "scatter/parallel.hpp"
#include "scatter/quadrature.hpp"

namespace scatter::spectral {

ScattererConfig::ScattererConfig(Vec3 x0_in, double phi_in) : phi(phi_in) {
  if (!(phi > -pi && phi < pi)) {
    throw ConfigError("phi must lie strictly inside (-pi, pi)");
  }
  auto wrap = [](double v) {
    double w = std::fmod(v, 2.0 * pi);
    if (w < 0.0) w += 2.0 * pi;
    return w;
  };
  x0 = {wrap(x0_in.x), wrap(x0_in.y), wrap(x0_in.z)};
}

double c0_sum(const QuasiMomentum& k, double cutoff_radius) {
  if (!(cutoff_radius > 1.0)) throw ParameterError("c0 cutoff radius too small");
  const double x_cut = cutoff_radius * cutoff_radius;
  double sum = 0.0, comp = 0.0;  // Kahan
  lattice::visit_ball_modes(k.k, x_cut, [&](const Int3&, double n) {
    const double term = 1.0 / (n * n + 1.0);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  });
  auto tail_integrand = [x_cut](double u) {
    const double t = x_cut / (u * u);
    return 2.0 * pi * std::sqrt(t) / (t * t + 1.0) * (2.0 * x_cut / (u * u * u));
  };
  return sum + gl_integrate(tail_integrand, 0.0, 1.0, 64);
}

namespace detail {

namespace {

// Pascal triangle up to J.
const double* binomials() {
  static double table[EnergyMomentTree::J][EnergyMomentTree::J] = {};
  static bool built = [] {
    for (int j = 0; j < EnergyMomentTree::J; ++j) {
      table[j][0] = 1.0;
      table[j][j] = 1.0;
      for (int i = 1; i < j; ++i) table[j][i] = table[j - 1][i - 1] + table[j - 1][i];
    }
    return true;
  }();
  (void)built;
  return &table[0][0];
}

}  // namespace

void EnergyMomentTree::init(std::int64_t limit) {
  limit_ = limit;
  grid_ = static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(limit) + 1));
  levels_ = std::countr_zero(static_cast<std::uint64_t>(grid_)) + 1;
  mom_.assign(static_cast<std::size_t>(levels_), {});
  mom_[0].assign(static_cast<std::size_t>(grid_) * J, 0.0);
  reg_prefix_.assign(static_cast<std::size_t>(grid_) + 1, 0.0);
}

void EnergyMomentTree::add(double n) {
  const auto cell = static_cast<std::int64_t>(n);
  double* m = mom_[0].data() + cell * J;
  const double u = 2.0 * (n - static_cast<double>(cell)) - 1.0;
  double p = 1.0;
  for (int j = 0; j < J; ++j) {
    m[j] += p;
    p *= u;
  }
  reg_prefix_[static_cast<std::size_t>(cell) + 1] += n / (n * n + 1.0);
}

void EnergyMomentTree::finalize() {
  const double* binom = binomials();
  for (int level = 1; level < levels_; ++level) {
    const std::int64_t cells = grid_ >> level;
    mom_[static_cast<std::size_t>(level)].assign(static_cast<std::size_t>(cells) * J, 0.0);
    const auto& child = mom_[static_cast<std::size_t>(level - 1)];
    auto& parent = mom_[static_cast<std::size_t>(level)];
    for (std::int64_t p = 0; p < cells; ++p) {
      const double* cl = child.data() + (2 * p) * J;
      const double* cr = child.data() + (2 * p + 1) * J;
      double* out = parent.data() + p * J;
      for (int j = 0; j < J; ++j) {
        double acc = 0.0;
        for (int i = 0; i <= j; ++i) {
          const double sign = ((j - i) & 1) ? -1.0 : 1.0;
          acc += binom[j * J + i] * (sign * cl[i] + cr[i]);
        }
        out[j] = std::ldexp(acc, -j);
      }
    }
  }
  for (std::size_t i = 1; i < reg_prefix_.size(); ++i) reg_prefix_[i] += reg_prefix_[i - 1];
}

double EnergyMomentTree::eval_inv(int level, std::int64_t idx, double lambda) const {
  const double w = static_cast<double>(std::int64_t{1} << level);
  const double c = static_cast<double>(idx << level) + 0.5 * w;
  const double invd = 1.0 / (lambda - c);
  const double rho = 0.5 * w * invd;
  const double* s = mom_[static_cast<std::size_t>(level)].data() + idx * J;
  double acc = 0.0;
  for (int j = J - 1; j >= 0; --j) acc = acc * rho + s[j];
  return -invd * acc;
}

double EnergyMomentTree::eval_inv_sq(int level, std::int64_t idx, double lambda) const {
  const double w = static_cast<double>(std::int64_t{1} << level);
  const double c = static_cast<double>(idx << level) + 0.5 * w;
  const double invd = 1.0 / (lambda - c);
  const double rho = 0.5 * w * invd;
  const double* s = mom_[static_cast<std::size_t>(level)].data() + idx * J;
  double acc = 0.0;
  for (int j = J - 1; j >= 0; --j) acc = acc * rho + (j + 1) * s[j];
  return invd * invd * acc;
}

template <bool Squared>
double EnergyMomentTree::recurse(int level, std::int64_t idx, double lambda, std::int64_t lo,
                                 std::int64_t hi) const {
  const std::int64_t a = idx << level;
  const std::int64_t b = a + (std::int64_t{1} << level);
  if (b <= lo || a >= hi) return 0.0;
  const double w = static_cast<double>(b - a);
  if (a >= lo && b <= hi) {
    const double c = static_cast<double>(a) + 0.5 * w;
    if (std::abs(lambda - c) >= 1.5 * w) {
      return Squared ? eval_inv_sq(level, idx, lambda) : eval_inv(level, idx, lambda);
    }
  }
  if (level == 0) {
    throw Error("moment tree: query range reaches an unseparated unit cell");
  }
  return recurse<Squared>(level - 1, 2 * idx, lambda, lo, hi) +
         recurse<Squared>(level - 1, 2 * idx + 1, lambda, lo, hi);
}

double EnergyMomentTree::sum_inv(double lambda, std::int64_t lo, std::int64_t hi) const {
  if (lo >= hi) return 0.0;
  return recurse<false>(levels_ - 1, 0, lambda, lo, hi);
}

double EnergyMomentTree::sum_inv_sq(double lambda, std::int64_t lo, std::int64_t hi) const {
  if (lo >= hi) return 0.0;
  return recurse<true>(levels_ - 1, 0, lambda, lo, hi);
}

double EnergyMomentTree::sum_regularizer(std::int64_t lo, std::int64_t hi) const {
  if (lo >= hi) return 0.0;
  return reg_prefix_[static_cast<std::size_t>(hi)] - reg_prefix_[static_cast<std::size_t>(lo)];
}

}  // namespace detail

SecularEngine::SecularEngine(QuasiMomentum k, double lambda_max) : k_(k) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw ParameterError("lambda_max must be positive and finite");
  }
  lambda_max_ = std::max(lambda_max, 1.0);
  x_near_ = std::ceil(lambda_max_) + 8.0;
  far_limit_ = static_cast<std::int64_t>(std::ceil(std::max(100.0 * lambda_max_, 1e4)));
  tree_.init(far_limit_);
  low_.reserve(static_cast<std::size_t>(4.19 * std::pow(x_near_, 1.5)) + 64);
  lattice::visit_ball_modes(k_.k, static_cast<double>(far_limit_), [&](const Int3&, double n) {
    tree_.add(n);
    if (n <= x_near_) low_.push_back(n);
  });
  tree_.finalize();
  std::sort(low_.begin(), low_.end());
}

double SecularEngine::nearest_energy_distance(double lambda) const {
  auto it = std::lower_bound(low_.begin(), low_.end(), lambda);
  double best = std::numeric_limits<double>::infinity();
  if (it != low_.end()) best = std::min(best, std::abs(*it - lambda));
  if (it != low_.begin()) best = std::min(best, std::abs(*(it - 1) - lambda));
  return best;
}

double SecularEngine::tail_secular(double cutoff, double lambda) const {
  auto integrand = [cutoff, lambda](double u) {
    const double t = cutoff / (u * u);
    return 2.0 * pi * std::sqrt(t) * (1.0 + t * lambda) /
           ((t - lambda) * (t * t + 1.0)) * (2.0 * cutoff / (u * u * u));
  };
  return gl_integrate(integrand, 0.0, 1.0, 64);
}

double SecularEngine::tail_inv_sq(double cutoff, double lambda) const {
  auto integrand = [cutoff, lambda](double u) {
    const double t = cutoff / (u * u);
    const double d = t - lambda;
    return 2.0 * pi * std::sqrt(t) / (d * d) * (2.0 * cutoff / (u * u * u));
  };
  return gl_integrate(integrand, 0.0, 1.0, 64);
}

double SecularEngine::lhs(double lambda) const {
  if (!(lambda >= 0.0) || lambda > lambda_max_) {
    throw ParameterError("lambda outside the engine range [0, lambda_max]");
  }
  if (nearest_energy_distance(lambda) <= 1e-9) {
    throw PoleError("lambda within 1e-9 of an unperturbed energy");
  }
  const auto cut = static_cast<std::int64_t>(std::ceil(std::max(100.0 * lambda, 1e4)));
  const std::int64_t b = std::min(far_limit_, cut);
  const auto ml = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lambda - near_halfwidth)));
  const auto mr = static_cast<std::int64_t>(std::ceil(lambda + near_halfwidth));

  double near = 0.0;
  const auto first = std::lower_bound(low_.begin(), low_.end(), static_cast<double>(ml));
  const auto last = std::lower_bound(first, low_.end(), static_cast<double>(mr));
  for (auto it = first; it != last; ++it) {
    const double n = *it;
    near += 1.0 / (n - lambda) - n / (n * n + 1.0);
  }

  const double far_pole = tree_.sum_inv(lambda, 0, ml) + tree_.sum_inv(lambda, mr, b);
  const double far_reg = tree_.sum_regularizer(0, ml) + tree_.sum_regularizer(mr, b);
  return near + far_pole - far_reg + tail_secular(static_cast<double>(b), lambda);
}

double SecularEngine::inv_square_sum(double lambda) const {
  if (!(lambda >= 0.0) || lambda > lambda_max_) {
    throw ParameterError("lambda outside the engine range [0, lambda_max]");
  }
  const auto ml = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lambda - near_halfwidth)));
  const auto mr = static_cast<std::int64_t>(std::ceil(lambda + near_halfwidth));
  double near = 0.0;
  const auto first = std::lower_bound(low_.begin(), low_.end(), static_cast<double>(ml));
  const auto last = std::lower_bound(first, low_.end(), static_cast<double>(mr));
  for (auto it = first; it != last; ++it) {
    const double d = *it - lambda;
    near += 1.0 / (d * d);
  }
  const double far = tree_.sum_inv_sq(lambda, 0, ml) + tree_.sum_inv_sq(lambda, mr, far_limit_);
  return near + far + tail_inv_sq(static_cast<double>(far_limit_), lambda);
}

double SecularEngine::c0() const {
  std::call_once(c0_once_, [this] { c0_value_ = c0_sum(k_); });
  return c0_value_;
}

PerturbedEigenvalue solve_gap(const SecularEngine& engine, const OrderedSpectrum& spectrum,
                              const ScattererConfig& cfg, std::int64_t gap_index) {
  if (!(spectrum.k().k == engine.quasimomentum().k)) {
    throw ConfigError("spectrum and engine quasimomenta differ");
  }
  const auto [left, right] = spectrum.gap(gap_index);
  if (right - left <= 2e-9) {
    throw SolverError("gap (" + std::to_string(left) + ", " + std::to_string(right) +
                      ") is below the 2e-9 width floor");
  }
  const double rhs = cfg.phi == 0.0 ? 0.0 : engine.c0() * std::tan(0.5 * cfg.phi);
  double a = left + 1e-9;
  double b = right - 1e-9;
  double fa = engine.lhs(a) - rhs;
  double fb = engine.lhs(b) - rhs;
  if (!(fa < 0.0) || !(fb > 0.0)) {
    throw SolverError("no sign change across gap " + std::to_string(gap_index) + " (" +
                      std::to_string(left) + ", " + std::to_string(right) + "): f(a)=" +
                      std::to_string(fa) + ", f(b)=" + std::to_string(fb));
  }
  // Run to bracket collapse; the achievable residual is limited by the slope
  // sum (n-lambda)^{-2} times one ulp of lambda.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = engine.lhs(mid) - rhs;
    if (fm < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  PerturbedEigenvalue out;
  out.lambda = 0.5 * (a + b);
  out.gap_index = gap_index;
  out.residual = engine.lhs(out.lambda) - rhs;
  return out;
}

PerturbedSpectrum perturbed_spectrum(const SecularEngine& engine, const OrderedSpectrum& spectrum,
                                     const ScattererConfig& cfg, double lo, double hi,
                                     int threads) {
  if (lo < spectrum.window_lo() || hi > spectrum.window_hi()) {
    throw CoverageError("requested window exceeds the enumerated spectrum");
  }
  if (hi > engine.lambda_max()) {
    throw CoverageError("requested window exceeds the engine lambda_max");
  }
  if (cfg.phi != 0.0) engine.c0();  // materialize before the parallel section

  std::vector<std::int64_t> gaps;
  for (std::int64_t j = 0; j < spectrum.gap_count(); ++j) {
    const auto [l, r] = spectrum.gap(j);
    if (r >= lo && l <= hi) gaps.push_back(j);
  }
  std::vector<PerturbedEigenvalue> slots(gaps.size());
  std::vector<char> narrow(gaps.size(), 0);
  parallel_for(
      static_cast<std::int64_t>(gaps.size()),
      [&](std::int64_t i) {
        const auto [l, r] = spectrum.gap(gaps[static_cast<std::size_t>(i)]);
        if (r - l <= 2e-9) {
          narrow[static_cast<std::size_t>(i)] = 1;
          return;
        }
        slots[static_cast<std::size_t>(i)] =
            solve_gap(engine, spectrum, cfg, gaps[static_cast<std::size_t>(i)]);
      },
      threads);
  PerturbedSpectrum out;
  out.values.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (narrow[i]) {
      ++out.skipped_narrow_gaps;
    } else {
      out.values.push_back(slots[i]);
    }
  }
  return out;
}

void write_perturbed_csv(const std::vector<PerturbedEigenvalue>& values,
                         const OrderedSpectrum& spectrum, std::ostream& os) {
  csv::Writer w(os);
  w.header({"gap_index", "n_left", "n_right", "lambda", "residual"});
  for (const auto& v : values) {
    const auto [l, r] = spectrum.gap(v.gap_index);
    w.field(v.gap_index).field(l).field(r).field(v.lambda).field(v.residual);
    w.end_row();
  }
}

}  // namespace scatter::spectral
