#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "htmrec/errors.hpp"

namespace htmrec {

// Dense 2-D binary grid, row-major, packed 64 bits per word. Bit i of the
// row-major sequence lives in words()[i / 64] at position i % 64 (LSB
// first). Padding bits of the last word are kept zero so popcounts over
// whole words are exact.
class BitGrid {
 public:
  BitGrid() = default;
  BitGrid(int width, int height)
      : width_(width), height_(height), words_(word_count(width, height), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t bit_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool get(int x, int y) const { return get_linear(index(x, y)); }
  void set(int x, int y, bool v) { set_linear(index(x, y), v); }

  bool get_linear(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set_linear(std::size_t i, bool v) {
    const std::uint64_t mask = std::uint64_t(1) << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const BitGrid&) const = default;

 private:
  static std::size_t word_count(int width, int height) {
    if (width < 1 || height < 1) {
      throw DimensionError("BitGrid: dimensions must be positive, got " +
                           std::to_string(width) + "x" + std::to_string(height));
    }
    return (static_cast<std::size_t>(width) * height + 63) / 64;
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> words_;
};

// Number of positions where the two grids differ.
inline std::size_t hamming_distance(const BitGrid& a, const BitGrid& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(
        "hamming_distance: grids are " + std::to_string(a.width()) + "x" +
        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
        std::to_string(b.height()));
  }
  std::size_t n = 0;
  auto wa = a.words(), wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) n += std::popcount(wa[i] ^ wb[i]);
  return n;
}

}  // namespace htmrec
