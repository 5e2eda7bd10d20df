#include "scatter/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "scatter/csv.hpp"

namespace scatter::quantize {

std::complex<double> ylm(SphericalHarmonicIndex idx, const Vec3& dir) {
  const int l = idx.l;
  const int m_signed = idx.m;
  if (l < 0 || std::abs(m_signed) > l) throw ParameterError("need l >= 0 and |m| <= l");
  const double len2 = norm_sq(dir);
  if (std::abs(len2 - 1.0) > 2e-9) {
    throw ParameterError("direction must be a unit vector");
  }
  const int m = std::abs(m_signed);
  const double ct = dir.z;
  const double st = std::sqrt(std::max(0.0, dir.x * dir.x + dir.y * dir.y));

  // Normalized associated Legendre P~_l^m(cos theta), Condon-Shortley phase
  // carried in the seed recurrence.
  double pmm = std::sqrt(1.0 / (4.0 * pi));
  for (int i = 1; i <= m; ++i) {
    pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * st;
  }
  double p = pmm;
  if (l > m) {
    double pm1 = pmm;
    double pm2 = 0.0;
    p = std::sqrt(2.0 * m + 3.0) * ct * pm1;
    for (int ll = m + 2; ll <= l; ++ll) {
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - m * m));
      const double b =
          std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      pm2 = pm1;
      pm1 = p;
      p = a * (ct * pm1 - b * pm2);
    }
  }
  const double phi = std::atan2(dir.y, dir.x);
  std::complex<double> y = p * std::polar(1.0, m * phi);
  if (m_signed < 0) {
    y = std::conj(y);
    if (m & 1) y = -y;
  }
  return y;
}

double nonorthogonality_threshold(const QuasiMomentum& k, const Int3& zeta) {
  if (zeta == Int3{0, 0, 0}) throw ParameterError("zeta must be nonzero");
  const double v = 2.0 * dot(zeta, k.k);
  return std::abs(v - std::nearbyint(v));
}

void Symbol::add(const SymbolTerm& term) {
  if (term.l < 0 || std::abs(term.m) > term.l) throw ParameterError("bad harmonic index");
  for (auto& t : terms_) {
    if (t.zeta == term.zeta && t.l == term.l && t.m == term.m) {
      t.amp += term.amp;
      return;
    }
  }
  terms_.push_back(term);
}

std::int64_t Symbol::degree_zeta() const {
  std::int64_t d = 0;
  for (const auto& t : terms_) {
    d = std::max({d, std::abs(t.zeta.x), std::abs(t.zeta.y), std::abs(t.zeta.z)});
  }
  return d;
}

int Symbol::degree_l() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.l);
  return d;
}

bool Symbol::is_real_valued(double tol) const {
  for (const auto& t : terms_) {
    std::complex<double> partner = 0.0;
    for (const auto& u : terms_) {
      if (u.zeta == -t.zeta && u.l == t.l && u.m == -t.m) {
        partner = u.amp;
        break;
      }
    }
    const double sign = (t.m & 1) ? -1.0 : 1.0;
    if (std::abs(partner - sign * std::conj(t.amp)) > tol * std::max(1.0, std::abs(t.amp))) {
      return false;
    }
  }
  return true;
}

Symbol Symbol::constant_one() {
  Symbol s;
  s.add({Int3{0, 0, 0}, 0, 0, std::sqrt(4.0 * pi)});
  return s;
}

Symbol Symbol::single(const Int3& zeta, int l, int m, std::complex<double> amp) {
  Symbol s;
  s.add({zeta, l, m, amp});
  return s;
}

std::complex<double> op_matrix_element(const Symbol& sym, const greens::GreenVector& v,
                                       const greens::GreenVector& w) {
  if (!(v.k.k == w.k.k) || !(v.x0 == w.x0)) {
    throw ConfigError("matrix element needs matching quasimomentum and scatterer position");
  }
  std::unordered_map<Int3, std::size_t, Int3Hash> w_index;
  w_index.reserve(w.entries.size() * 2);
  for (std::size_t i = 0; i < w.entries.size(); ++i) w_index.emplace(w.entries[i].mode.xi, i);

  std::complex<double> total = 0.0;
  for (const auto& term : sym.terms()) {
    std::complex<double> acc = 0.0;
    for (const auto& e : v.entries) {
      const auto it = w_index.find(e.mode.xi + term.zeta);
      if (it == w_index.end()) continue;
      if (e.mode.energy <= 0.0) {
        throw ParameterError("zero-energy mode has no direction for the symbol");
      }
      acc += ylm({term.l, term.m}, e.mode.direction) * e.coeff *
             std::conj(w.entries[it->second].coeff);
    }
    total += term.amp * acc;
  }
  return torus_volume * total;
}

std::complex<double> position_expectation(const Int3& zeta, const greens::GreenVector& v) {
  if (zeta == Int3{0, 0, 0}) return {1.0, 0.0};
  std::unordered_map<Int3, std::size_t, Int3Hash> index;
  index.reserve(v.entries.size() * 2);
  for (std::size_t i = 0; i < v.entries.size(); ++i) index.emplace(v.entries[i].mode.xi, i);
  std::complex<double> num = 0.0;
  double den = 0.0;
  for (const auto& e : v.entries) {
    den += std::norm(e.coeff);
    const auto it = index.find(e.mode.xi + zeta);
    if (it != index.end()) {
      num += e.coeff * std::conj(v.entries[it->second].coeff);
    }
  }
  if (!(den > 0.0)) throw DegenerateMeasureError("zero-mass Green vector");
  return num / den;
}

MomentumMeasure momentum_measure(const greens::GreenVector& v, bool normalize) {
  MomentumMeasure mu;
  mu.atoms.reserve(v.entries.size());
  double total = 0.0;
  for (const auto& e : v.entries) {
    const double wgt = std::norm(e.coeff);
    if (e.mode.energy <= 0.0 && wgt > 0.0) {
      throw ParameterError("zero-energy mode has no direction on S^2");
    }
    mu.atoms.push_back({e.mode.direction, wgt});
    total += wgt;
  }
  mu.total_weight = total;
  if (normalize) {
    if (!(total > 0.0)) throw DegenerateMeasureError("momentum measure has zero mass");
    const double inv = 1.0 / total;
    for (auto& a : mu.atoms) a.weight *= inv;
    mu.normalized = true;
  }
  return mu;
}

double top_mass_fraction(const MomentumMeasure& mu, std::int64_t j) {
  if (j < 1) throw ParameterError("need j >= 1");
  if (!mu.normalized) throw ParameterError("top_mass_fraction expects a normalized measure");
  std::vector<double> weights(mu.atoms.size());
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) weights[i] = mu.atoms[i].weight;
  const auto take = std::min<std::int64_t>(j, static_cast<std::int64_t>(weights.size()));
  std::partial_sort(weights.begin(), weights.begin() + take, weights.end(),
                    std::greater<double>());
  double acc = 0.0;
  for (std::int64_t i = 0; i < take; ++i) acc += weights[static_cast<std::size_t>(i)];
  return std::min(acc, 1.0);
}

void write_measure_csv(const MomentumMeasure& mu, std::ostream& os) {
  csv::Writer w(os);
  w.header({"theta", "phi", "weight"});
  for (const auto& a : mu.atoms) {
    const double theta = std::acos(std::clamp(a.direction.z, -1.0, 1.0));
    double phi = std::atan2(a.direction.y, a.direction.x);
    if (phi < 0.0) phi += 2.0 * pi;
    w.field(theta).field(phi).field(a.weight);
    w.end_row();
  }
}

Symbol symbol_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("symbol JSON parse failure: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("symbol JSON must be a list of terms");
  Symbol sym;
  for (const auto& item : doc) {
    SymbolTerm t;
    try {
      const auto& z = item.at("zeta");
      t.zeta = {z.at(0).get<std::int64_t>(), z.at(1).get<std::int64_t>(),
                z.at(2).get<std::int64_t>()};
      t.l = item.at("l").get<int>();
      t.m = item.at("m").get<int>();
      t.amp = {item.value("re", 0.0), item.value("im", 0.0)};
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad symbol term: ") + e.what());
    }
    sym.add(t);
  }
  return sym;
}

}  // namespace scatter::quantize
