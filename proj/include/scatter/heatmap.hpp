#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "scatter/quantize.hpp"

namespace scatter::heatmap {

enum class Colormap { viridis, gray };

struct RenderOptions {
  int width = 720;   // phi in [0, 2pi)
  int height = 360;  // theta in [0, pi]
  double bandwidth = 0.05;  // spherical Gaussian kernel, radians
  Colormap colormap = Colormap::viridis;
  int threads = 0;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgb;  // row-major, 3 bytes per pixel
};

/// Equirectangular density image: theta from 0 (top) to pi, phi from 0 to
/// 2pi; atoms smoothed with exp(-d^2 / (2 bw^2)) in great-circle distance,
/// intensity scaled to the maximum.
Image render_measure(const quantize::MomentumMeasure& mu, const RenderOptions& opts = {});

/// Binary PPM (P6); pixel data only, no comments, byte-stable across runs.
void write_ppm(const Image& img, std::ostream& os);

Colormap colormap_from_name(const std::string& name);

}  // namespace scatter::heatmap
