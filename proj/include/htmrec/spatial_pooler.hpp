#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "htmrec/bitgrid.hpp"
#include "htmrec/image.hpp"

namespace htmrec {

// Spatial pooler parameters. Columns are n*n pixel receptive fields;
// inhibition runs over m*m blocks of columns; a synapse is connected when
// its random analog weight is >= gamma.
struct SpConfig {
  int n = 2;
  int m = 2;
  double gamma = 0.5;
  std::uint64_t seed = 0;
};

// n x n binary connectivity flags of one column.
using SynapseMatrix = BitGrid;

// One bit per column, set for the winners of block inhibition.
using FeatureMap = BitGrid;

// Per-column overlap values; cols_w = image width / n, cols_h = height / n.
struct OverlapGrid {
  int cols_w = 0;
  int cols_h = 0;
  std::vector<double> values;

  double at(int cx, int cy) const {
    return values[static_cast<std::size_t>(cy) * cols_w + cx];
  }
};

// Connectivity of one column. Weights are drawn uniformly from [0, 1) on
// the stream derived from (cfg.seed, column_index), in row-major order
// over the n x n matrix; bit = 1 iff weight >= gamma. Columns are indexed
// row-major over the column grid: column_index = cy * cols_w + cx.
SynapseMatrix init_synapses(const SpConfig& cfg, int column_index);

// Synapse matrices for every column of a cols_w x cols_h grid, in column
// index order.
std::vector<SynapseMatrix> init_all_synapses(const SpConfig& cfg, int cols_w,
                                             int cols_h);

// Splits the image into disjoint n x n blocks (row-major) and sums
// connectivity bit * pixel intensity over each block.
// Throws DimensionError unless both image sides are divisible by n.
OverlapGrid compute_overlap(const GrayImage& img, const SpConfig& cfg,
                            std::span<const SynapseMatrix> synapses);

// Block-wise winner-take-all: within each m x m block of columns every
// column whose overlap equals the block maximum emits 1, the rest 0.
// Throws DimensionError unless both column grid sides are divisible by m.
FeatureMap inhibit(const OverlapGrid& grid, int m);

// Full pipeline: init_all_synapses + compute_overlap + inhibit. Pure
// function of (img, cfg).
FeatureMap extract(const GrayImage& img, const SpConfig& cfg);

// Raw feature map file: 16-byte header (magic "SPFM", version, cols_w,
// cols_h as little-endian u32) followed by the row-major bit sequence
// packed 8 per byte, most significant bit first, no row padding.
void save_spfm(const FeatureMap& fm, const std::filesystem::path& path);
FeatureMap load_spfm(const std::filesystem::path& path);

inline constexpr std::uint32_t kSpfmVersion = 1;

}  // namespace htmrec
