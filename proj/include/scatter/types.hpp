#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scatter/errors.hpp"
#include "scatter/geometry.hpp"

namespace scatter {

/// Bloch vector of the shifted Laplacian. Stored exactly as supplied (no
/// reduction mod 1): the energies |xi+k|^2 depend on the representative.
struct QuasiMomentum {
  Vec3 k;
  std::optional<double> dioph_type;  // claimed Diophantine type, >= 4/3 in dimension 3
  bool indep_checked = false;        // heuristic rational-independence scan performed

  QuasiMomentum() = default;
  explicit QuasiMomentum(Vec3 kv, std::optional<double> kappa = std::nullopt);

  /// k = (1/sqrt 2, 1/sqrt 3, 1/sqrt 5), materialized once in double precision.
  static QuasiMomentum reference();

  /// Brute-force scan for small integer relations a0 + <a, k> ~ 0.  Returns
  /// true when none is found up to |a_i| <= max_coeff; sets indep_checked.
  bool check_rational_independence(std::int64_t max_coeff = 20, double tol = 1e-9);
};

struct LatticeMode {
  Int3 xi;
  double energy = 0.0;  // |xi+k|^2
  Vec3 direction;       // (xi+k)/|xi+k|; undefined (zero) when energy == 0

  static LatticeMode make(const Int3& xi, const Vec3& k);
};

/// Sorted slice of the unperturbed spectrum over an energy window [lo, hi].
/// Construction rejects near-degenerate energies: ties are incompatible with
/// the rational-independence assumption and would corrupt gap logic.
class OrderedSpectrum {
 public:
  OrderedSpectrum() = default;
  OrderedSpectrum(QuasiMomentum k, double lo, double hi, std::vector<LatticeMode> modes);

  const QuasiMomentum& k() const { return k_; }
  double window_lo() const { return lo_; }
  double window_hi() const { return hi_; }
  const std::vector<LatticeMode>& modes() const { return modes_; }
  const std::vector<double>& energies() const { return energies_; }
  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }

  /// Number of interior gaps (consecutive mode pairs).
  std::int64_t gap_count() const { return modes_.empty() ? 0 : static_cast<std::int64_t>(modes_.size()) - 1; }
  struct Gap {
    double left, right;
  };
  Gap gap(std::int64_t j) const;

  /// Index of the first mode with energy >= x.
  std::size_t lower_bound(double x) const;
  /// Index of the first mode with energy > x.
  std::size_t upper_bound(double x) const;
  /// Distance from lambda to the nearest enumerated energy (infinity if empty).
  double nearest_distance(double lambda) const;
  /// Index of a mode whose energy matches m within 1e-12*max(1,m), or throws.
  std::size_t index_of_energy(double m) const;

 private:
  QuasiMomentum k_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<LatticeMode> modes_;
  std::vector<double> energies_;
};

}  // namespace scatter
