#include "htmrec/temporal_memory.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "htmrec/binary_io.hpp"

namespace htmrec {

namespace {

void validate(const TmConfig& cfg) {
  if (!(cfg.delta > 0.0) || cfg.delta > 1.0) {
    throw ConfigError("tm.delta must lie in (0, 1], got " + std::to_string(cfg.delta));
  }
  if (cfg.sigma < 0.0 || cfg.sigma > 1.0) {
    throw ConfigError("tm.sigma must lie in [0, 1], got " + std::to_string(cfg.sigma));
  }
  if (cfg.init < 0.0 || cfg.init > 1.0) {
    throw ConfigError("tm.init must lie in [0, 1], got " + std::to_string(cfg.init));
  }
}

}  // namespace

ClassMap new_class_map(int class_id, int cols_w, int cols_h, const TmConfig& cfg) {
  validate(cfg);
  if (cols_w < 1 || cols_h < 1) {
    throw DimensionError("new_class_map: dimensions must be positive, got " +
                         std::to_string(cols_w) + "x" + std::to_string(cols_h));
  }
  return ClassMap{class_id, cols_w, cols_h,
                  std::vector<double>(static_cast<std::size_t>(cols_w) * cols_h, cfg.init),
                  0};
}

void train_update(ClassMap& map, const FeatureMap& fm, const TmConfig& cfg) {
  validate(cfg);
  if (fm.width() != map.cols_w || fm.height() != map.cols_h) {
    throw DimensionError("train_update: feature map " + std::to_string(fm.width()) +
                         "x" + std::to_string(fm.height()) + " does not match class map " +
                         std::to_string(map.cols_w) + "x" + std::to_string(map.cols_h));
  }
  for (std::size_t i = 0; i < map.weights.size(); ++i) {
    const double step = fm.get_linear(i) ? cfg.delta : -cfg.delta;
    map.weights[i] = std::clamp(map.weights[i] + step, 0.0, 1.0);
  }
  ++map.train_count;
}

BinaryClassMap binarize(const ClassMap& map, const TmConfig& cfg) {
  validate(cfg);
  BinaryClassMap bin{map.class_id, BitGrid(map.cols_w, map.cols_h)};
  for (std::size_t i = 0; i < map.weights.size(); ++i) {
    bin.bits.set_linear(i, map.weights[i] >= cfg.sigma);
  }
  return bin;
}

ClassMap train_class(std::span<const FeatureMap> images, int class_id,
                     const TmConfig& cfg) {
  if (images.empty()) {
    throw EmptyClassError("train_class: class " + std::to_string(class_id) +
                          " has no training images");
  }
  ClassMap map = new_class_map(class_id, images.front().width(),
                               images.front().height(), cfg);
  for (const FeatureMap& fm : images) train_update(map, fm, cfg);
  return map;
}

void save_class_map(const ClassMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write("HTMC", 4);
  write_u32_le(out, kClassMapVersion);
  write_u32_le(out, static_cast<std::uint32_t>(map.class_id));
  write_u32_le(out, static_cast<std::uint32_t>(map.cols_w));
  write_u32_le(out, static_cast<std::uint32_t>(map.cols_h));
  write_u32_le(out, static_cast<std::uint32_t>(map.train_count));
  for (double w : map.weights) write_f64_le(out, w);
  if (!out) throw IoError(path.string() + ": write failed");
}

ClassMap load_class_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "HTMC") {
    throw ParseError(path.string() + ": not a class map file");
  }
  const std::uint32_t version = read_u32_le(in);
  if (version != kClassMapVersion) {
    throw ParseError(path.string() + ": unsupported class map version " +
                     std::to_string(version));
  }
  ClassMap map;
  map.class_id = static_cast<int>(read_u32_le(in));
  map.cols_w = static_cast<int>(read_u32_le(in));
  map.cols_h = static_cast<int>(read_u32_le(in));
  map.train_count = static_cast<int>(read_u32_le(in));
  if (!in || map.cols_w < 1 || map.cols_h < 1) {
    throw ParseError(path.string() + ": bad class map header");
  }
  map.weights.resize(static_cast<std::size_t>(map.cols_w) * map.cols_h);
  for (double& w : map.weights) w = read_f64_le(in);
  if (!in) throw ParseError(path.string() + ": truncated class map payload");
  return map;
}

}  // namespace htmrec
