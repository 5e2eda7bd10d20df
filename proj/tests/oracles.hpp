// Test-only oracles, independent of the production code paths they check:
// plain box scans, naive double loops and quadrature.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "scatter/quantize.hpp"
#include "scatter/types.hpp"

namespace scatter::oracle {

/// Brute-force scan over the integer box |xi_i + k_i| <= sqrt(hi) + 1,
/// keeping energies in [lo, hi].  Sorted ascending.
std::vector<LatticeMode> box_enumerate(const QuasiMomentum& k, double lo, double hi);

/// Box scan restricted to the ball n <= radius^2, summing 1/(n^2+1), plus the
/// density tail 2 pi int sqrt(t)/(t^2+1) dt beyond radius^2.
double c0_box(const QuasiMomentum& k, std::int64_t box);

/// Energies inside the ball n <= box^2, from a triple box loop (cached by the
/// caller; ~storage is box^3 doubles before the ball restriction).
std::vector<double> ball_energies_box(const QuasiMomentum& k, std::int64_t box);

/// Regularized secular sum over precomputed energies plus the density tail
/// from cutoff = box^2.
double secular_box(const std::vector<double>& energies, double cutoff, double lambda);

/// Naive O(N^2) pair correlation with the same windows as the sweep version.
double pair_correlation_naive(const std::vector<double>& energies, double T, double psi_lo,
                              double psi_hi, double D);

/// Naive ordered close-pair count on (T/2, T].
std::int64_t close_pairs_naive(const std::vector<double>& energies, double T, double D);

/// Product quadrature of Y_{l,m} conj(Y_{l',m'}) over the sphere, exact for
/// the polynomial degrees involved (Gauss-Legendre in cos(theta), uniform in
/// phi).
std::complex<double> ylm_pair_integral(quantize::SphericalHarmonicIndex a,
                                       quantize::SphericalHarmonicIndex b, int n_theta = 40,
                                       int n_phi = 80);

}  // namespace scatter::oracle
