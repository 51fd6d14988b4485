#include "htmrec/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "htmrec/image.hpp"
#include "htmrec/pnm.hpp"
#include "htmrec/rng.hpp"

namespace htmrec {

namespace {

int parse_int(const std::string& field, const std::filesystem::path& path, int line,
              const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(path.string() + ", line " + std::to_string(line) + ": " +
                     std::string(what) + " is not an integer: \"" + field + "\"");
  }
  return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void validate_manifest(const CorpusManifest& manifest, const std::filesystem::path& path,
                       const std::vector<int>& line_numbers) {
  std::set<std::string> paths;
  std::set<std::tuple<int, int, int>> slots;
  std::set<int> ids;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    const std::string where = path.string() + ", line " + std::to_string(line_numbers[i]);
    if (e.session != 1 && e.session != 2) {
      throw ValidationError(where + ": session must be 1 or 2, got " +
                            std::to_string(e.session));
    }
    if (e.class_id < 0) {
      throw ValidationError(where + ": negative class id " + std::to_string(e.class_id));
    }
    if (e.index < 0) {
      throw ValidationError(where + ": negative index " + std::to_string(e.index));
    }
    if (!paths.insert(e.path).second) {
      throw ValidationError(where + ": duplicate path \"" + e.path + "\"");
    }
    if (!slots.insert({e.class_id, e.session, e.index}).second) {
      throw ValidationError(where + ": duplicate (class, session, index) slot");
    }
    ids.insert(e.class_id);
  }
  if (!ids.empty()) {
    const int max_id = *ids.rbegin();
    if (*ids.begin() != 0 || static_cast<std::size_t>(max_id) + 1 != ids.size()) {
      throw ValidationError(path.string() + ": class ids must be dense from 0, found " +
                            std::to_string(ids.size()) + " ids up to " +
                            std::to_string(max_id));
    }
  }
}

}  // namespace

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");

  CorpusManifest manifest;
  manifest.root = path.parent_path();
  std::vector<int> line_numbers;
  std::map<int, std::string> first_label;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 5) {
      throw ParseError(path.string() + ", line " + std::to_string(line_no) +
                       ": expected 5 tab-separated fields, got " +
                       std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.class_id = parse_int(fields[0], path, line_no, "class_id");
    entry.label = fields[1];
    entry.session = parse_int(fields[2], path, line_no, "session");
    entry.index = parse_int(fields[3], path, line_no, "index");
    entry.path = fields[4];
    if (entry.path.empty()) {
      throw ParseError(path.string() + ", line " + std::to_string(line_no) +
                       ": empty path");
    }
    first_label.try_emplace(entry.class_id, entry.label);
    manifest.entries.push_back(std::move(entry));
    line_numbers.push_back(line_no);
  }

  validate_manifest(manifest, path, line_numbers);
  for (const auto& [id, label] : first_label) manifest.classes.push_back({id, label});
  return manifest;
}

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  for (const ManifestEntry& e : manifest.entries) {
    out << e.class_id << '\t' << e.label << '\t' << e.session << '\t' << e.index
        << '\t' << e.path << '\n';
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

TrainTestSplit split(const CorpusManifest& manifest, const SplitSpec& spec) {
  if (spec.train_per_class < 1 || spec.test_per_class < 1) {
    throw ConfigError("split: per-class counts must be >= 1");
  }
  for (int session : {spec.train_session, spec.test_session}) {
    if (session != 1 && session != 2) {
      throw ConfigError("split: sessions must be 1 or 2, got " + std::to_string(session));
    }
  }

  TrainTestSplit out;
  for (const ManifestClass& cls : manifest.classes) {
    auto pick = [&](int session, int count, std::vector<ManifestEntry>& sink) {
      std::vector<ManifestEntry> pool;
      for (const ManifestEntry& e : manifest.entries) {
        if (e.class_id == cls.class_id && e.session == session) pool.push_back(e);
      }
      std::sort(pool.begin(), pool.end(),
                [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.index < b.index;
                });
      if (pool.size() < static_cast<std::size_t>(count)) {
        throw InsufficientImagesError(
            "split: class " + std::to_string(cls.class_id) + " (\"" + cls.label +
            "\") has " + std::to_string(pool.size()) + " images in session " +
            std::to_string(session) + ", need " + std::to_string(count));
      }
      sink.insert(sink.end(), pool.begin(), pool.begin() + count);
    };
    pick(spec.train_session, spec.train_per_class, out.train);
    pick(spec.test_session, spec.test_per_class, out.test);
  }
  return out;
}

CorpusManifest synth_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  if (spec.num_classes < 1 || spec.per_session < 1) {
    throw ConfigError("synth_corpus: class and per-session counts must be >= 1");
  }
  if (spec.width < 1 || spec.height < 1) {
    throw ConfigError("synth_corpus: dimensions must be positive");
  }
  if (spec.noise < 0.0 || spec.noise > 1.0) {
    throw ConfigError("synth_corpus: noise must lie in [0, 1], got " +
                      std::to_string(spec.noise));
  }
  std::filesystem::create_directories(out_dir);

  CorpusManifest manifest;
  manifest.root = out_dir;
  const std::size_t npixels = static_cast<std::size_t>(spec.width) * spec.height;

  for (int c = 0; c < spec.num_classes; ++c) {
    const std::uint64_t class_seed = derive_stream(spec.seed, static_cast<std::uint64_t>(c));
    char label[24];
    std::snprintf(label, sizeof(label), "class_%03d", c);
    manifest.classes.push_back({c, label});

    std::vector<std::uint8_t> base(npixels);
    std::mt19937_64 base_rng = make_engine(class_seed, 0);
    for (auto& px : base) px = uniform_byte(base_rng);

    for (int session = 1; session <= 2; ++session) {
      for (int index = 0; index < spec.per_session; ++index) {
        const std::uint64_t image_stream =
            1 + static_cast<std::uint64_t>(session - 1) * spec.per_session + index;
        std::mt19937_64 rng = make_engine(class_seed, image_stream);

        GrayImage img{spec.width, spec.height, {}};
        img.pixels.reserve(npixels);
        for (std::size_t i = 0; i < npixels; ++i) {
          std::uint8_t px = base[i];
          if (unit_real(rng) < spec.noise) px = uniform_byte(rng);
          img.pixels.push_back(px / 255.0);
        }

        char name[32];
        std::snprintf(name, sizeof(name), "c%03d_s%d_i%02d.pgm", c, session, index);
        save_pgm(img, out_dir / name);
        manifest.entries.push_back({c, label, session, index, name});
      }
    }
  }

  save_manifest(manifest, out_dir / "manifest.tsv");
  return manifest;
}

}  // namespace htmrec
