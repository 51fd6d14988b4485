#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "htmrec/bitgrid.hpp"
#include "htmrec/spatial_pooler.hpp"

namespace htmrec {

// Class-map learning parameters: delta is the per-update weight step,
// sigma the binarization threshold, init the starting cell weight.
struct TmConfig {
  double delta = 0.01;
  double sigma = 0.5;
  double init = 0.5;
};

// Analog accumulator grid for one class. Cell weights live in [0, 1];
// dimensions match the feature maps the map absorbs.
struct ClassMap {
  int class_id = 0;
  int cols_w = 0;
  int cols_h = 0;
  std::vector<double> weights;
  int train_count = 0;

  double at(int x, int y) const {
    return weights[static_cast<std::size_t>(y) * cols_w + x];
  }
};

struct BinaryClassMap {
  int class_id = 0;
  BitGrid bits;
};

// All cells set to cfg.init, train_count zero.
ClassMap new_class_map(int class_id, int cols_w, int cols_h, const TmConfig& cfg);

// One Hebbian step: cells under set feature bits gain delta, the rest
// lose delta; results clamp to [0, 1]. Throws DimensionError when the
// feature map does not match the class map.
void train_update(ClassMap& map, const FeatureMap& fm, const TmConfig& cfg);

// bit = 1 iff weight >= sigma.
BinaryClassMap binarize(const ClassMap& map, const TmConfig& cfg);

// Folds train_update over the collection, starting from new_class_map.
// Throws EmptyClassError on an empty collection.
ClassMap train_class(std::span<const FeatureMap> images, int class_id,
                     const TmConfig& cfg);

// Class-map file: 24-byte header (magic "HTMC", version, class_id, cols_w,
// cols_h, train_count as little-endian u32) followed by cols_w*cols_h
// weights as little-endian IEEE-754 doubles.
void save_class_map(const ClassMap& map, const std::filesystem::path& path);
ClassMap load_class_map(const std::filesystem::path& path);

inline constexpr std::uint32_t kClassMapVersion = 1;

}  // namespace htmrec
