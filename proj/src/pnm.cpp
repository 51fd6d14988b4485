#include "htmrec/pnm.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace htmrec {

namespace {

// Consumes PNM header whitespace, treating '#' comments as whitespace.
void skip_header_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == std::char_traits<char>::eof()) return;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::filesystem::path& path,
                    const char* what) {
  skip_header_space(in);
  int value = 0;
  if (!(in >> value)) {
    throw ParseError(path.string() + ": missing or malformed " + std::string(what));
  }
  return value;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
};

PnmHeader read_header(std::istream& in, const std::filesystem::path& path,
                      const char* expected_magic) {
  PnmHeader hdr;
  in >> hdr.magic;
  if (hdr.magic != expected_magic) {
    throw ParseError(path.string() + ": expected magic \"" +
                     std::string(expected_magic) + "\", found \"" + hdr.magic + "\"");
  }
  hdr.width = read_header_int(in, path, "width");
  hdr.height = read_header_int(in, path, "height");
  if (hdr.width < 1 || hdr.height < 1) {
    throw ParseError(path.string() + ": non-positive dimensions");
  }
  const int maxval = read_header_int(in, path, "maxval");
  if (maxval != 255) {
    throw ParseError(path.string() + ": maxval must be 255, found " +
                     std::to_string(maxval));
  }
  in.get();  // the single whitespace byte separating header and raster
  return hdr;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  return in;
}

void read_raster(std::istream& in, const std::filesystem::path& path,
                 std::vector<std::uint8_t>& bytes) {
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw ParseError(path.string() + ": truncated raster, expected " +
                     std::to_string(bytes.size()) + " bytes, got " +
                     std::to_string(in.gcount()));
  }
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const PnmHeader hdr = read_header(in, path, "P5");
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(hdr.width) * hdr.height);
  read_raster(in, path, bytes);
  GrayImage img{hdr.width, hdr.height, {}};
  img.pixels.reserve(bytes.size());
  for (std::uint8_t b : bytes) img.pixels.push_back(b / 255.0);
  return img;
}

RgbImage load_ppm(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const PnmHeader hdr = read_header(in, path, "P6");
  RgbImage img{hdr.width, hdr.height, {}};
  img.pixels.resize(static_cast<std::size_t>(hdr.width) * hdr.height * 3);
  read_raster(in, path, img.pixels);
  return img;
}

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string magic;
  in >> magic;
  in.close();
  if (magic == "P5") return load_pgm(path);
  if (magic == "P6") return to_grayscale(load_ppm(path));
  throw ParseError(path.string() + ": unsupported magic \"" + magic +
                   "\", only binary PGM (P5) and PPM (P6) are accepted");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double v : img.pixels) {
    const int q = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    out.put(static_cast<char>(q));
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

void save_pbm(const BitGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << "P4\n" << grid.width() << " " << grid.height() << "\n";
  // P4 packs each row separately, most significant bit first.
  for (int y = 0; y < grid.height(); ++y) {
    std::uint8_t byte = 0;
    int filled = 0;
    for (int x = 0; x < grid.width(); ++x) {
      byte = static_cast<std::uint8_t>((byte << 1) | (grid.get(x, y) ? 1 : 0));
      if (++filled == 8) {
        out.put(static_cast<char>(byte));
        byte = 0;
        filled = 0;
      }
    }
    if (filled > 0) out.put(static_cast<char>(byte << (8 - filled)));
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace htmrec
