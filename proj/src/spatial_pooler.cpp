#include "htmrec/spatial_pooler.hpp"

#include <fstream>
#include <limits>
#include <string>

#include "htmrec/binary_io.hpp"
#include "htmrec/rng.hpp"

namespace htmrec {

namespace {

void validate(const SpConfig& cfg) {
  if (cfg.n < 1) throw ConfigError("sp.n must be >= 1, got " + std::to_string(cfg.n));
  if (cfg.m < 1) throw ConfigError("sp.m must be >= 1, got " + std::to_string(cfg.m));
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) {
    throw ConfigError("sp.gamma must lie in [0, 1], got " + std::to_string(cfg.gamma));
  }
}

}  // namespace

SynapseMatrix init_synapses(const SpConfig& cfg, int column_index) {
  validate(cfg);
  std::mt19937_64 engine = make_engine(cfg.seed, static_cast<std::uint64_t>(column_index));
  SynapseMatrix bits(cfg.n, cfg.n);
  for (int y = 0; y < cfg.n; ++y) {
    for (int x = 0; x < cfg.n; ++x) {
      const double weight = unit_real(engine);
      bits.set(x, y, weight >= cfg.gamma);
    }
  }
  return bits;
}

std::vector<SynapseMatrix> init_all_synapses(const SpConfig& cfg, int cols_w,
                                             int cols_h) {
  std::vector<SynapseMatrix> synapses;
  synapses.reserve(static_cast<std::size_t>(cols_w) * cols_h);
  for (int col = 0; col < cols_w * cols_h; ++col)
    synapses.push_back(init_synapses(cfg, col));
  return synapses;
}

OverlapGrid compute_overlap(const GrayImage& img, const SpConfig& cfg,
                            std::span<const SynapseMatrix> synapses) {
  validate(cfg);
  if (img.width % cfg.n != 0 || img.height % cfg.n != 0) {
    throw DimensionError("compute_overlap: image " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + " is not divisible by n=" +
                         std::to_string(cfg.n));
  }
  const int cols_w = img.width / cfg.n;
  const int cols_h = img.height / cfg.n;
  if (synapses.size() != static_cast<std::size_t>(cols_w) * cols_h) {
    throw DimensionError("compute_overlap: expected " +
                         std::to_string(cols_w * cols_h) + " synapse matrices, got " +
                         std::to_string(synapses.size()));
  }
  OverlapGrid grid{cols_w, cols_h, {}};
  grid.values.resize(synapses.size());
  for (int cy = 0; cy < cols_h; ++cy) {
    for (int cx = 0; cx < cols_w; ++cx) {
      const std::size_t col = static_cast<std::size_t>(cy) * cols_w + cx;
      const SynapseMatrix& bits = synapses[col];
      double sum = 0.0;
      for (int j = 0; j < cfg.n; ++j) {
        for (int i = 0; i < cfg.n; ++i) {
          if (bits.get(i, j)) sum += img.at(cx * cfg.n + i, cy * cfg.n + j);
        }
      }
      grid.values[col] = sum;
    }
  }
  return grid;
}

FeatureMap inhibit(const OverlapGrid& grid, int m) {
  if (m < 1) throw ConfigError("inhibit: m must be >= 1, got " + std::to_string(m));
  if (grid.cols_w % m != 0 || grid.cols_h % m != 0) {
    throw DimensionError("inhibit: column grid " + std::to_string(grid.cols_w) + "x" +
                         std::to_string(grid.cols_h) + " is not divisible by m=" +
                         std::to_string(m));
  }
  FeatureMap fm(grid.cols_w, grid.cols_h);
  for (int by = 0; by < grid.cols_h / m; ++by) {
    for (int bx = 0; bx < grid.cols_w / m; ++bx) {
      double theta = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          theta = std::max(theta, grid.at(bx * m + i, by * m + j));
      // Every column tied at the block maximum wins.
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          fm.set(bx * m + i, by * m + j, grid.at(bx * m + i, by * m + j) >= theta);
    }
  }
  return fm;
}

FeatureMap extract(const GrayImage& img, const SpConfig& cfg) {
  validate(cfg);
  if (img.width % cfg.n != 0 || img.height % cfg.n != 0) {
    throw DimensionError("extract: image " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + " is not divisible by n=" +
                         std::to_string(cfg.n));
  }
  const int cols_w = img.width / cfg.n;
  const int cols_h = img.height / cfg.n;
  if (cols_w % cfg.m != 0 || cols_h % cfg.m != 0) {
    throw DimensionError("extract: column grid " + std::to_string(cols_w) + "x" +
                         std::to_string(cols_h) + " is not divisible by m=" +
                         std::to_string(cfg.m));
  }
  return inhibit(compute_overlap(img, cfg, init_all_synapses(cfg, cols_w, cols_h)),
                 cfg.m);
}

void save_spfm(const FeatureMap& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write("SPFM", 4);
  write_u32_le(out, kSpfmVersion);
  write_u32_le(out, static_cast<std::uint32_t>(fm.width()));
  write_u32_le(out, static_cast<std::uint32_t>(fm.height()));
  std::uint8_t byte = 0;
  int filled = 0;
  for (std::size_t i = 0; i < fm.bit_count(); ++i) {
    byte = static_cast<std::uint8_t>((byte << 1) | (fm.get_linear(i) ? 1 : 0));
    if (++filled == 8) {
      out.put(static_cast<char>(byte));
      byte = 0;
      filled = 0;
    }
  }
  if (filled > 0) out.put(static_cast<char>(byte << (8 - filled)));
  if (!out) throw IoError(path.string() + ": write failed");
}

FeatureMap load_spfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "SPFM") {
    throw ParseError(path.string() + ": not an SPFM file");
  }
  const std::uint32_t version = read_u32_le(in);
  if (version != kSpfmVersion) {
    throw ParseError(path.string() + ": unsupported SPFM version " +
                     std::to_string(version));
  }
  const std::uint32_t cols_w = read_u32_le(in);
  const std::uint32_t cols_h = read_u32_le(in);
  if (!in || cols_w == 0 || cols_h == 0) {
    throw ParseError(path.string() + ": bad SPFM header");
  }
  FeatureMap fm(static_cast<int>(cols_w), static_cast<int>(cols_h));
  const std::size_t nbytes = (fm.bit_count() + 7) / 8;
  std::vector<unsigned char> payload(nbytes);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(nbytes));
  if (static_cast<std::size_t>(in.gcount()) != nbytes) {
    throw ParseError(path.string() + ": truncated SPFM payload");
  }
  for (std::size_t i = 0; i < fm.bit_count(); ++i) {
    const bool bit = (payload[i / 8] >> (7 - i % 8)) & 1;
    fm.set_linear(i, bit);
  }
  return fm;
}

}  // namespace htmrec
