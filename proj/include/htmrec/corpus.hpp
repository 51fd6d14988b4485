#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "htmrec/errors.hpp"

namespace htmrec {

struct ManifestClass {
  int class_id = 0;
  std::string label;

  bool operator==(const ManifestClass&) const = default;
};

// One corpus image. `label` is a free-form tag: the class name for plain
// corpora, or a category such as "emotions" / "scarf" when per-image
// accuracy breakdowns are wanted.
struct ManifestEntry {
  int class_id = 0;
  std::string label;
  int session = 1;
  int index = 0;
  std::string path;  // relative paths resolve against the manifest's directory

  bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
  std::vector<ManifestClass> classes;  // ordered by class id; ids dense from 0
  std::vector<ManifestEntry> entries;  // file order
  std::filesystem::path root;          // not serialized

  std::filesystem::path resolve(const ManifestEntry& entry) const {
    std::filesystem::path p(entry.path);
    return p.is_absolute() ? p : root / p;
  }
};

// Session-based split: first `train_per_class` entries by index-in-session
// from `train_session`, likewise for testing.
struct SplitSpec {
  int train_per_class = 13;
  int test_per_class = 13;
  int train_session = 1;
  int test_session = 2;
};

struct TrainTestSplit {
  std::vector<ManifestEntry> train;  // ordered by (class_id, index)
  std::vector<ManifestEntry> test;
};

// Manifest files are UTF-8 text, one record per line with tab-separated
// fields `class_id label session index path`; lines starting with '#' and
// blank lines are ignored. Throws ParseError for malformed lines and
// ValidationError for semantic violations, both naming file and line.
CorpusManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

TrainTestSplit split(const CorpusManifest& manifest, const SplitSpec& spec);

// Synthetic corpus: one random base pattern per class; every image is the
// base with each pixel independently replaced by a uniform random value
// with probability `noise`. Bit-identical for equal seeds.
struct SynthSpec {
  int num_classes = 10;
  int per_session = 13;
  int width = 32;
  int height = 32;
  double noise = 0.3;
  std::uint64_t seed = 0;
};

// Writes one PGM per (class, session, index) plus manifest.tsv into
// out_dir and returns the loaded-equivalent manifest.
CorpusManifest synth_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace htmrec
