#include "scatter/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "scatter/csv.hpp"
#include "scatter/lattice.hpp"
#include "scatter/parallel.hpp"
#include "scatter/quadrature.hpp"

namespace scatter::greens {

namespace {

constexpr double green_prefactor = -1.0 / torus_volume;

std::complex<double> coefficient(const LatticeMode& m, const Vec3& x0, double lambda) {
  const double phase = -dot(m.xi, x0);
  return green_prefactor * std::polar(1.0, phase) / (m.energy - lambda);
}

void check_pole(const OrderedSpectrum& spectrum, double lambda, double cutoff) {
  const std::size_t i = spectrum.lower_bound(lambda - 1e-9);
  if (i < spectrum.size() && spectrum.energies()[i] <= std::min(cutoff, lambda + 1e-9)) {
    throw PoleError("lambda within 1e-9 of an enumerated energy");
  }
}

}  // namespace

double GreenVector::entry_norm_sq() const {
  double acc = 0.0;
  for (const auto& e : entries) acc += std::norm(e.coeff);
  return torus_volume * acc;
}

GreenVector GreenVector::normalized() const {
  GreenVector out = *this;
  const double nrm = std::sqrt(norm_sq);
  if (!(nrm > 0.0)) throw DegenerateMeasureError("cannot normalize a zero Green vector");
  const double inv = 1.0 / nrm;
  for (auto& e : out.entries) e.coeff *= inv;
  out.norm_sq = 1.0;
  out.tail_estimate = tail_estimate * inv * inv;
  out.tail_bound = tail_bound * inv * inv;
  return out;
}

std::vector<LatticeMode> truncation_set(const OrderedSpectrum& spectrum, double lambda, double L) {
  if (!(L > 0.0)) throw ParameterError("truncation window L must be positive");
  const double lo_need = std::max(0.0, lambda - L);
  if (lo_need < spectrum.window_lo() - 1e-12 || lambda + L > spectrum.window_hi() + 1e-12) {
    throw CoverageError("truncation window exceeds the enumerated spectrum");
  }
  std::vector<LatticeMode> out;
  const std::size_t first = spectrum.lower_bound(lambda - L);
  for (std::size_t i = first; i < spectrum.size(); ++i) {
    const auto& m = spectrum.modes()[i];
    if (m.energy >= lambda + L) break;
    if (std::abs(m.energy - lambda) < L) out.push_back(m);
  }
  return out;
}

double norm_tail_estimate(double lambda, double cutoff) {
  auto integrand = [cutoff, lambda](double u) {
    const double t = cutoff / (u * u);
    const double d = t - lambda;
    return 2.0 * pi * std::sqrt(t) / (d * d) * (2.0 * cutoff / (u * u * u));
  };
  return gl_integrate(integrand, 0.0, 1.0, 64) / torus_volume;
}

double norm_tail_upper_bound(double lambda, double cutoff) {
  if (!(cutoff > lambda)) throw ParameterError("tail bound needs cutoff > lambda");
  // Dyadic shells (a, 2a]; every lattice point in a shell owns a unit cube
  // inside the shell fattened by half the cube diagonal.
  const double h = std::sqrt(3.0) / 2.0;
  double total = 0.0;
  double a = cutoff;
  for (int shell = 0; shell < 2048; ++shell) {
    const double b = 2.0 * a;
    const double r_lo = std::max(0.0, std::sqrt(a) - h);
    const double r_hi = std::sqrt(b) + h;
    const double count_bound = 4.0 / 3.0 * pi * (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo);
    const double d = a - lambda;
    const double term = count_bound / (d * d);
    total += term;
    if (term < 1e-16 * total) break;
    a = b;
  }
  return total / torus_volume;
}

namespace {

GreenVector build_full(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda,
                       double cutoff) {
  if (cutoff > spectrum.window_hi() + 1e-12) {
    throw CoverageError("cutoff exceeds the enumerated spectrum");
  }
  check_pole(spectrum, lambda, cutoff);
  GreenVector v;
  v.k = spectrum.k();
  v.x0 = x0;
  v.lambda = lambda;
  v.cutoff = cutoff;
  double acc = 0.0;
  for (const auto& m : spectrum.modes()) {
    if (m.energy > cutoff) break;
    v.entries.push_back({m, coefficient(m, x0, lambda)});
    acc += std::norm(v.entries.back().coeff);
  }
  v.tail_estimate = norm_tail_estimate(lambda, cutoff);
  v.tail_bound = norm_tail_upper_bound(lambda, cutoff);
  v.norm_sq = torus_volume * acc + v.tail_estimate;
  return v;
}

}  // namespace

GreenVector green_full(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda,
                       double cutoff) {
  return build_full(spectrum, x0, lambda, cutoff);
}

GreenVector green_full(const QuasiMomentum& k, const Vec3& x0, double lambda, double cutoff) {
  return build_full(lattice::enumerate_window(k, 0.0, cutoff), x0, lambda, cutoff);
}

GreenVector green_truncated(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda,
                            double L) {
  auto set = truncation_set(spectrum, lambda, L);
  if (set.empty()) {
    throw EmptyTruncationError("A(lambda, L) is empty for lambda=" + std::to_string(lambda) +
                               ", L=" + std::to_string(L));
  }
  GreenVector v;
  v.k = spectrum.k();
  v.x0 = x0;
  v.lambda = lambda;
  v.truncation = L;
  double acc = 0.0;
  for (const auto& m : set) {
    v.entries.push_back({m, coefficient(m, x0, lambda)});
    acc += std::norm(v.entries.back().coeff);
  }
  v.norm_sq = torus_volume * acc;
  return v;
}

double truncation_error(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda, double L,
                        double cutoff) {
  const GreenVector full = green_full(spectrum, x0, lambda, cutoff);
  const GreenVector trunc = green_truncated(spectrum, x0, lambda, L);
  const double a_sq = trunc.norm_sq;
  const double b_sq_hi = (full.norm_sq - full.tail_estimate) + full.tail_bound;
  const double a = std::sqrt(a_sq);
  const double b = std::sqrt(b_sq_hi);
  // Coefficient differences of the normalized vectors; the truncated entries
  // are a subset with identical raw coefficients.
  const double diff_common = (1.0 / a - 1.0 / b);
  double acc = a_sq * diff_common * diff_common;
  const double outside = std::max(0.0, b_sq_hi - a_sq);
  acc += outside / b_sq_hi;
  return std::sqrt(acc);
}

double truncation_error_fast(const spectral::SecularEngine& engine,
                             const OrderedSpectrum& spectrum, double lambda, double L) {
  const std::size_t first = spectrum.lower_bound(lambda - L);
  double window = 0.0;
  for (std::size_t i = first; i < spectrum.size(); ++i) {
    const double n = spectrum.energies()[i];
    if (n >= lambda + L) break;
    if (std::abs(n - lambda) < L) {
      const double d = n - lambda;
      window += 1.0 / (d * d);
    }
  }
  if (window <= 0.0) {
    throw EmptyTruncationError("A(lambda, L) is empty");
  }
  const double total = engine.inv_square_sum(lambda);
  const double ratio = std::min(1.0, std::sqrt(window / total));
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - ratio)));
}

std::complex<double> evaluate_green(const GreenVector& v, const Vec3& x) {
  std::complex<double> acc = 0.0;
  for (const auto& e : v.entries) {
    acc += e.coeff * std::polar(1.0, dot(e.mode.xi, x));
  }
  return acc;
}

double grid_mean_abs2(const GreenVector& v, int nside, int threads) {
  if (nside <= 0) throw ParameterError("grid resolution must be positive");
  const auto n3 = static_cast<std::int64_t>(nside) * nside * nside;
  std::vector<double> slab(static_cast<std::size_t>(nside), 0.0);
  parallel_for(
      nside,
      [&](std::int64_t ix) {
        const double step = 2.0 * pi / nside;
        double acc = 0.0;
        Vec3 x;
        x.x = step * static_cast<double>(ix);
        for (int iy = 0; iy < nside; ++iy) {
          x.y = step * iy;
          for (int iz = 0; iz < nside; ++iz) {
            x.z = step * iz;
            acc += std::norm(evaluate_green(v, x));
          }
        }
        slab[static_cast<std::size_t>(ix)] = acc;
      },
      threads);
  double total = 0.0;
  for (double s : slab) total += s;
  return total / static_cast<double>(n3);
}

void write_green_csv(const GreenVector& v, std::ostream& os) {
  csv::Writer w(os);
  w.header({"xi1", "xi2", "xi3", "energy", "re_coeff", "im_coeff"});
  for (const auto& e : v.entries) {
    w.field(e.mode.xi.x).field(e.mode.xi.y).field(e.mode.xi.z);
    w.field(e.mode.energy).field(e.coeff.real()).field(e.coeff.imag());
    w.end_row();
  }
}

std::string green_sidecar_json(const GreenVector& v) {
  std::ostringstream os;
  os << "{\"lambda\": " << csv::format_double(v.lambda);
  os << ", \"L\": ";
  if (v.truncation) {
    os << csv::format_double(*v.truncation);
  } else {
    os << "null";
  }
  os << ", \"norm_sq\": " << csv::format_double(v.norm_sq);
  os << ", \"tail_bound\": " << csv::format_double(v.tail_bound) << "}";
  return os.str();
}

}  // namespace scatter::greens
