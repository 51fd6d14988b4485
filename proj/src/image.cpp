#include "htmrec/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace htmrec {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out{img.width, img.height, {}};
  out.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const std::uint8_t r = img.pixels[3 * i];
    const std::uint8_t g = img.pixels[3 * i + 1];
    const std::uint8_t b = img.pixels[3 * i + 2];
    out.pixels[i] = clamp01((0.299 * r + 0.587 * g + 0.114 * b) / 255.0);
  }
  return out;
}

GrayImage stddev_filter(const GrayImage& img, int radius) {
  if (radius < 1) {
    throw ConfigError("stddev_filter: radius must be >= 1, got " + std::to_string(radius));
  }
  const int w = img.width;
  const int h = img.height;
  GrayImage out{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)};
  const double count = static_cast<double>(2 * radius + 1) * (2 * radius + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int py = std::clamp(y + dy, 0, h - 1);  // replicate padding
        for (int dx = -radius; dx <= radius; ++dx) {
          const int px = std::clamp(x + dx, 0, w - 1);
          const double v = img.at(px, py);
          sum += v;
          sum_sq += v * v;
        }
      }
      const double mean = sum / count;
      const double variance = std::max(0.0, sum_sq / count - mean * mean);
      out.at(x, y) = clamp01(std::sqrt(variance) / 0.5);
    }
  }
  return out;
}

GrayImage center_crop_to_multiple(const GrayImage& img, int multiple) {
  const int new_w = (img.width / multiple) * multiple;
  const int new_h = (img.height / multiple) * multiple;
  if (new_w < 1 || new_h < 1) {
    throw DimensionError("center_crop_to_multiple: image " + std::to_string(img.width) +
                         "x" + std::to_string(img.height) +
                         " is smaller than one multiple of " + std::to_string(multiple));
  }
  const int off_x = (img.width - new_w) / 2;
  const int off_y = (img.height - new_h) / 2;
  GrayImage out{new_w, new_h, {}};
  out.pixels.reserve(static_cast<std::size_t>(new_w) * new_h);
  for (int y = 0; y < new_h; ++y)
    for (int x = 0; x < new_w; ++x) out.pixels.push_back(img.at(x + off_x, y + off_y));
  return out;
}

}  // namespace htmrec
