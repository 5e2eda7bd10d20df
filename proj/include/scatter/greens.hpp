#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "scatter/spectral.hpp"
#include "scatter/types.hpp"

namespace scatter::greens {

struct GreenEntry {
  LatticeMode mode;
  std::complex<double> coeff;  // -(1/8pi^3) e^{-i<xi,x0>} / (n - lambda)
};

/// Fourier-side Green's vector at spectral parameter lambda.  norm_sq is the
/// L^2(T^3, dx) norm squared (volume 8 pi^3 convention): 8 pi^3 sum |coeff|^2
/// over the stored entries plus, for full vectors, a density tail estimate.
struct GreenVector {
  QuasiMomentum k;
  Vec3 x0;
  double lambda = 0.0;
  std::optional<double> truncation;  // window L for truncated vectors
  double cutoff = 0.0;               // energy cutoff for full vectors
  std::vector<GreenEntry> entries;
  double norm_sq = 0.0;
  double tail_estimate = 0.0;  // Weyl-density estimate of the norm^2 beyond cutoff
  double tail_bound = 0.0;     // rigorous upper bound on the same quantity

  double entry_norm_sq() const;  // 8 pi^3 sum |coeff|^2 (no tail)
  GreenVector normalized() const;
};

/// A(lambda, L): all modes with |n - lambda| < L.
std::vector<LatticeMode> truncation_set(const OrderedSpectrum& spectrum, double lambda, double L);

/// Full vector over all modes with n <= cutoff, tail bookkeeping beyond it.
GreenVector green_full(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda,
                       double cutoff);
GreenVector green_full(const QuasiMomentum& k, const Vec3& x0, double lambda, double cutoff);

/// Vector restricted to A(lambda, L); exact norm, no tail.
GreenVector green_truncated(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda,
                            double L);

/// Guaranteed upper bound on || g_{lambda,L} - g_lambda || computed from
/// coefficient differences, with the rigorous tail bound on ||G_lambda||.
double truncation_error(const OrderedSpectrum& spectrum, const Vec3& x0, double lambda, double L,
                        double cutoff);

/// Same quantity from energy sums alone (density tail): || g_L - g || =
/// sqrt(2 (1 - ||G_L|| / ||G||)).  Used for bulk trend scans.
double truncation_error_fast(const spectral::SecularEngine& engine,
                             const OrderedSpectrum& spectrum, double lambda, double L);

/// Pointwise synthesis sum coeff e^{i<xi,x>}.
std::complex<double> evaluate_green(const GreenVector& v, const Vec3& x);

/// Mean of |evaluate|^2 over the uniform nside^3 grid on [0,2pi)^3.
double grid_mean_abs2(const GreenVector& v, int nside, int threads = 0);

/// Rigorous upper bound on (1/8pi^3) sum_{n > cutoff} (n-lambda)^{-2} via
/// dyadic shells and the fattened-ball count bound.
double norm_tail_upper_bound(double lambda, double cutoff);
/// Weyl-density estimate of the same sum.
double norm_tail_estimate(double lambda, double cutoff);

void write_green_csv(const GreenVector& v, std::ostream& os);
std::string green_sidecar_json(const GreenVector& v);

}  // namespace scatter::greens
