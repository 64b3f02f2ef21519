#pragma once

#include <vector>

#include "sovc/data/frames.hpp"

namespace sovc::model {

/// Real-valued RGB image in [0, 1], row-major, channel-last.
struct RealImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0.0) {}

  double& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

RealImage to_real(const data::Image& img);  // divides by 255

/// Bilinear resampling, half-pixel centres (align_corners = false); source
/// coordinates below zero clamp to zero, as in PyTorch's interpolate.
RealImage resize_bilinear(const RealImage& img, int out_h, int out_w);

/// Mean of each channel over a 4x4 grid of cells; index (gy * 4 + gx) * 3 + c.
/// Cell bounds are floor(i * side / 4); requires both sides >= 4.
std::vector<double> grid_pool_4x4(const RealImage& img);

}  // namespace sovc::model
