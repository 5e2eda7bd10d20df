#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <ostream>
#include <tuple>
#include <vector>

#include "scatter/greens.hpp"
#include "scatter/types.hpp"

namespace scatter::quantize {

struct SphericalHarmonicIndex {
  int l = 0;
  int m = 0;
};

/// Complex spherical harmonic, orthonormal on S^2 with surface measure
/// (Y_00 = 1/sqrt(4 pi)), Condon-Shortley phase, evaluated by the stable
/// normalized associated-Legendre recurrence.
std::complex<double> ylm(SphericalHarmonicIndex idx, const Vec3& unit_direction);

/// epsilon(zeta): distance from 2<k, zeta> to the nearest integer.  Since
/// 2<xi, zeta> + |zeta|^2 is an integer, |2<xi+k, zeta> + |zeta|^2| >=
/// epsilon(zeta) for every xi.
double nonorthogonality_threshold(const QuasiMomentum& k, const Int3& zeta);

struct SymbolTerm {
  Int3 zeta;
  int l = 0;
  int m = 0;
  std::complex<double> amp;
};

/// Finite polynomial symbol: sum of amp * Y_{l,m}(dir) e^{i<zeta,x>} terms.
class Symbol {
 public:
  Symbol() = default;

  void add(const SymbolTerm& term);
  const std::vector<SymbolTerm>& terms() const { return terms_; }

  std::int64_t degree_zeta() const;  // max |zeta|_inf
  int degree_l() const;

  /// Real-valued iff amp(-zeta, l, -m) == (-1)^m conj(amp(zeta, l, m)).
  bool is_real_valued(double tol = 1e-14) const;

  static Symbol constant_one();  // amp(0,0,0) = sqrt(4 pi): the symbol a == 1
  static Symbol single(const Int3& zeta, int l, int m, std::complex<double> amp = 1.0);

 private:
  std::vector<SymbolTerm> terms_;
};

/// <Op(sym) v, w> in L^2(T^3, dx): 8 pi^3 sum over symbol terms and over
/// pairs (xi, xi+zeta) present in v resp. w of
///   amp * Y_{l,m}(dir(xi)) * coeff_v(xi) * conj(coeff_w(xi+zeta)).
/// Pair membership is structural: absent pairs contribute exactly nothing.
std::complex<double> op_matrix_element(const Symbol& sym, const greens::GreenVector& v,
                                       const greens::GreenVector& w);

/// <e^{i<zeta,x>} v, v> normalized by the stored-entry mass; returns exactly
/// 1 for zeta = 0.
std::complex<double> position_expectation(const Int3& zeta, const greens::GreenVector& v);

struct MomentumAtom {
  Vec3 direction;
  double weight = 0.0;
};

/// Atomic measure on S^2: mass |coeff(xi)|^2 at (xi+k)/|xi+k|.
struct MomentumMeasure {
  std::vector<MomentumAtom> atoms;
  bool normalized = false;
  double total_weight = 0.0;  // pre-normalization mass; 8 pi^3 * this = entry norm^2
};

MomentumMeasure momentum_measure(const greens::GreenVector& v, bool normalize);

/// Sum of the j largest atom weights of a normalized measure.
double top_mass_fraction(const MomentumMeasure& mu, std::int64_t j);

void write_measure_csv(const MomentumMeasure& mu, std::ostream& os);

/// Parses [{"zeta":[a,b,c],"l":int,"m":int,"re":x,"im":y}, ...].
Symbol symbol_from_json(const std::string& text);

}  // namespace scatter::quantize
