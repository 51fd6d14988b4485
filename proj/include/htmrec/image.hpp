#pragma once

#include <cstdint>
#include <vector>

#include "htmrec/errors.hpp"

namespace htmrec {

// Raw 8-bit RGB raster, row-major, three channels per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width * height * 3
};

// Normalized grayscale raster; every intensity lies in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // size = width * height

  double at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// BT.601 luma (0.299 R + 0.587 G + 0.114 B), scaled to [0, 1].
GrayImage to_grayscale(const RgbImage& img);

// Population standard deviation of the (2*radius+1)^2 neighborhood around
// each pixel, replicate padding at the borders. The result is divided by
// 0.5 (the supremum of the std of values in [0, 1]) and clamped to [0, 1].
GrayImage stddev_filter(const GrayImage& img, int radius);

// Largest centered crop whose sides are multiples of `multiple`.
// Throws DimensionError when the image is smaller than one multiple.
GrayImage center_crop_to_multiple(const GrayImage& img, int multiple);

}  // namespace htmrec
