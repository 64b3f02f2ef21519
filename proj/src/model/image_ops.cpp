#include "sovc/model/image_ops.hpp"

#include <algorithm>
#include <cmath>

#include "sovc/common/error.hpp"

namespace sovc::model {

RealImage to_real(const data::Image& img) {
  RealImage out(img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) out.data[i] = img.pixels[i] / 255.0;
  return out;
}

namespace {

struct Tap {
  int i0, i1;
  double w1;
};

Tap source_tap(int dst, int in, int out) {
  double scale = static_cast<double>(in) / out;
  double src = std::max(0.0, (dst + 0.5) * scale - 0.5);
  int i0 = std::min(static_cast<int>(src), in - 1);
  int i1 = std::min(i0 + 1, in - 1);
  return {i0, i1, src - i0};
}

}  // namespace

RealImage resize_bilinear(const RealImage& img, int out_h, int out_w) {
  if (img.height <= 0 || img.width <= 0 || out_h <= 0 || out_w <= 0)
    throw ContractError("resize_bilinear: empty image or target");
  if (out_h == img.height && out_w == img.width) return img;
  RealImage out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    auto ty = source_tap(y, img.height, out_h);
    for (int x = 0; x < out_w; ++x) {
      auto tx = source_tap(x, img.width, out_w);
      for (int c = 0; c < 3; ++c) {
        double top = (1 - tx.w1) * img.at(ty.i0, tx.i0, c) + tx.w1 * img.at(ty.i0, tx.i1, c);
        double bot = (1 - tx.w1) * img.at(ty.i1, tx.i0, c) + tx.w1 * img.at(ty.i1, tx.i1, c);
        out.at(y, x, c) = (1 - ty.w1) * top + ty.w1 * bot;
      }
    }
  }
  return out;
}

std::vector<double> grid_pool_4x4(const RealImage& img) {
  if (img.height < 4 || img.width < 4) throw ContractError("grid_pool_4x4: image smaller than 4x4");
  std::vector<double> out(48, 0.0);
  for (int gy = 0; gy < 4; ++gy)
    for (int gx = 0; gx < 4; ++gx) {
      int y0 = gy * img.height / 4, y1 = (gy + 1) * img.height / 4;
      int x0 = gx * img.width / 4, x1 = (gx + 1) * img.width / 4;
      double n = static_cast<double>((y1 - y0) * (x1 - x0));
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x) s += img.at(y, x, c);
        out[static_cast<std::size_t>((gy * 4 + gx) * 3 + c)] = s / n;
      }
    }
  return out;
}

}  // namespace sovc::model
