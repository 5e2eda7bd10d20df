#include "scatter/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "scatter/errors.hpp"
#include "scatter/parallel.hpp"

namespace scatter::heatmap {

namespace {

// viridis anchors, sampled uniformly; linear interpolation in between.
constexpr int anchor_count = 16;
constexpr unsigned char anchors[anchor_count][3] = {
    {68, 1, 84},   {72, 26, 108},  {71, 47, 125},  {65, 68, 135},
    {57, 86, 140}, {49, 104, 142}, {42, 120, 142}, {35, 136, 142},
    {31, 152, 139}, {34, 168, 132}, {53, 183, 121}, {84, 197, 104},
    {122, 209, 81}, {165, 219, 54}, {210, 226, 27}, {253, 231, 37}};

void apply_colormap(double v, Colormap map, unsigned char* out) {
  v = std::clamp(v, 0.0, 1.0);
  if (map == Colormap::gray) {
    const auto g = static_cast<unsigned char>(std::lround(v * 255.0));
    out[0] = out[1] = out[2] = g;
    return;
  }
  const double pos = v * (anchor_count - 1);
  const int i = std::min(anchor_count - 2, static_cast<int>(pos));
  const double f = pos - i;
  for (int c = 0; c < 3; ++c) {
    const double mixed = (1.0 - f) * anchors[i][c] + f * anchors[i + 1][c];
    out[c] = static_cast<unsigned char>(std::lround(mixed));
  }
}

}  // namespace

Colormap colormap_from_name(const std::string& name) {
  if (name == "viridis") return Colormap::viridis;
  if (name == "gray" || name == "grey") return Colormap::gray;
  throw ConfigError("unknown colormap '" + name + "' (expected viridis|gray)");
}

Image render_measure(const quantize::MomentumMeasure& mu, const RenderOptions& opts) {
  if (opts.width <= 0 || opts.height <= 0) throw ConfigError("image size must be positive");
  if (!(opts.bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  const int w = opts.width, h = opts.height;
  std::vector<double> intensity(static_cast<std::size_t>(w) * h, 0.0);

  const double inv2s2 = 1.0 / (2.0 * opts.bandwidth * opts.bandwidth);
  const double reach = 6.0 * opts.bandwidth;  // kernel support cut at 6 sigma
  const double dtheta = pi / h;

  // Row-parallel splat: each row scans the atoms whose theta band covers it.
  struct AtomAngles {
    double theta, phi, weight;
    Vec3 dir;
  };
  std::vector<AtomAngles> atoms;
  atoms.reserve(mu.atoms.size());
  for (const auto& a : mu.atoms) {
    if (a.weight <= 0.0) continue;
    AtomAngles aa;
    aa.theta = std::acos(std::clamp(a.direction.z, -1.0, 1.0));
    aa.phi = std::atan2(a.direction.y, a.direction.x);
    if (aa.phi < 0.0) aa.phi += 2.0 * pi;
    aa.weight = a.weight;
    aa.dir = a.direction;
    atoms.push_back(aa);
  }

  parallel_for(
      h,
      [&](std::int64_t row) {
        const double theta = (static_cast<double>(row) + 0.5) * dtheta;
        const double st = std::sin(theta), ct = std::cos(theta);
        double* line = intensity.data() + static_cast<std::size_t>(row) * w;
        for (const auto& a : atoms) {
          if (std::abs(theta - a.theta) > reach) continue;
          for (int col = 0; col < w; ++col) {
            const double phi = (col + 0.5) * 2.0 * pi / w;
            const double dotv =
                st * std::cos(phi) * a.dir.x + st * std::sin(phi) * a.dir.y + ct * a.dir.z;
            const double d = std::acos(std::clamp(dotv, -1.0, 1.0));
            if (d > reach) continue;
            line[col] += a.weight * std::exp(-d * d * inv2s2);
          }
        }
      },
      opts.threads);

  double peak = 0.0;
  for (double v : intensity) peak = std::max(peak, v);
  Image img;
  img.width = w;
  img.height = h;
  img.rgb.resize(intensity.size() * 3);
  const double scale = peak > 0.0 ? 1.0 / peak : 0.0;
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    apply_colormap(intensity[i] * scale, opts.colormap, &img.rgb[3 * i]);
  }
  return img;
}

void write_ppm(const Image& img, std::ostream& os) {
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()),
           static_cast<std::streamsize>(img.rgb.size()));
}

}  // namespace scatter::heatmap
