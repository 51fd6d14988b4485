#pragma once

#include <filesystem>

#include "htmrec/bitgrid.hpp"
#include "htmrec/image.hpp"

namespace htmrec {

// Binary PGM ("P5") and PPM ("P6") with maxval 255 are the only accepted
// image inputs; anything else is a ParseError naming the file. P6 files
// are converted to grayscale on load.
GrayImage load_image(const std::filesystem::path& path);

RgbImage load_ppm(const std::filesystem::path& path);
GrayImage load_pgm(const std::filesystem::path& path);

// Quantizes intensities to 8 bits (round half up) and writes a P5 file.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// Writes a P4 bitmap; set bits come out black.
void save_pbm(const BitGrid& grid, const std::filesystem::path& path);

}  // namespace htmrec
