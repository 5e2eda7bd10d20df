#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>

namespace scatter {

inline constexpr double pi = std::numbers::pi;
// L^2(T^3, dx) with plain Lebesgue measure; the cell [0,2pi)^3 has volume 8 pi^3.
inline constexpr double torus_volume = 8.0 * pi * pi * pi;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }

struct Int3 {
  std::int64_t x = 0, y = 0, z = 0;

  friend Int3 operator+(const Int3& a, const Int3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Int3 operator-(const Int3& a) { return {-a.x, -a.y, -a.z}; }
  friend bool operator==(const Int3& a, const Int3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline Vec3 operator+(const Int3& xi, const Vec3& k) {
  return {static_cast<double>(xi.x) + k.x, static_cast<double>(xi.y) + k.y, static_cast<double>(xi.z) + k.z};
}

inline double dot(const Int3& a, const Vec3& b) {
  return static_cast<double>(a.x) * b.x + static_cast<double>(a.y) * b.y + static_cast<double>(a.z) * b.z;
}

inline std::int64_t dot(const Int3& a, const Int3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline std::int64_t norm_sq(const Int3& a) { return dot(a, a); }

// Canonical energy expression; every call site must go through this so that
// identical (xi, k) give bit-identical energies.
inline double mode_energy(const Int3& xi, const Vec3& k) {
  const double dx = static_cast<double>(xi.x) + k.x;
  const double dy = static_cast<double>(xi.y) + k.y;
  const double dz = static_cast<double>(xi.z) + k.z;
  return dx * dx + dy * dy + dz * dz;
}

struct Int3Hash {
  std::size_t operator()(const Int3& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t c : {static_cast<std::uint64_t>(v.x), static_cast<std::uint64_t>(v.y),
                            static_cast<std::uint64_t>(v.z)}) {
      h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace scatter
