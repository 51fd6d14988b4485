#include "htmrec/experiment.hpp"

#include <chrono>
#include <ostream>
#include <utility>

#include "htmrec/config.hpp"
#include "htmrec/image.hpp"
#include "htmrec/parallel.hpp"
#include "htmrec/pnm.hpp"

namespace htmrec {

std::string to_string(Architecture arch) {
  return arch == Architecture::kSpOnly ? "sp_only" : "sp_tm";
}

Architecture architecture_from_string(const std::string& name) {
  if (name == "sp_only") return Architecture::kSpOnly;
  if (name == "sp_tm") return Architecture::kSpTm;
  throw ConfigError("architecture must be \"sp_only\" or \"sp_tm\", got \"" + name + "\"");
}

namespace {

GrayImage preprocess(GrayImage img, const ExperimentConfig& cfg) {
  if (cfg.center_crop) img = center_crop_to_multiple(img, cfg.sp.n * cfg.sp.m);
  return stddev_filter(img, cfg.filter_radius);
}

FeatureMap feature_of_entry(const CorpusManifest& manifest, const ManifestEntry& entry,
                            const ExperimentConfig& cfg) {
  const std::filesystem::path path = manifest.resolve(entry);
  GrayImage img = load_image(path);
  try {
    return extract(preprocess(std::move(img), cfg), cfg.sp);
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

std::vector<std::vector<ManifestEntry>> group_by_class(const CorpusManifest& manifest,
                                                       const std::vector<ManifestEntry>& entries) {
  std::vector<std::vector<ManifestEntry>> grouped(manifest.classes.size());
  for (const ManifestEntry& e : entries) grouped[e.class_id].push_back(e);
  return grouped;
}

}  // namespace

std::vector<ClassMap> train_class_maps(const ExperimentConfig& cfg,
                                       const CorpusManifest& manifest,
                                       const RunOptions& options) {
  const TrainTestSplit s = split(manifest, cfg.split);
  const auto grouped = group_by_class(manifest, s.train);
  std::vector<ClassMap> maps(grouped.size());
  parallel_for(grouped.size(), options.workers, [&](std::size_t ci) {
    ClassMap cm;
    bool first = true;
    for (const ManifestEntry& e : grouped[ci]) {
      FeatureMap fm = feature_of_entry(manifest, e, cfg);
      if (first) {
        cm = new_class_map(static_cast<int>(ci), fm.width(), fm.height(), cfg.tm);
        first = false;
      }
      try {
        train_update(cm, fm, cfg.tm);
      } catch (const DimensionError& err) {
        throw DimensionError(manifest.resolve(e).string() + ": " + err.what());
      }
    }
    maps[ci] = std::move(cm);
  });
  return maps;
}

std::vector<BinaryClassMap> build_templates(const ExperimentConfig& cfg,
                                            const CorpusManifest& manifest,
                                            const RunOptions& options) {
  const TrainTestSplit s = split(manifest, cfg.split);
  const auto grouped = group_by_class(manifest, s.train);
  std::vector<BinaryClassMap> maps(grouped.size());
  parallel_for(grouped.size(), options.workers, [&](std::size_t ci) {
    // Training images are averaged in raw grayscale space, then the
    // average goes through the normal preprocessing and extraction.
    GrayImage sum;
    bool first = true;
    for (const ManifestEntry& e : grouped[ci]) {
      const std::filesystem::path path = manifest.resolve(e);
      GrayImage img = load_image(path);
      if (first) {
        sum = std::move(img);
        first = false;
      } else {
        if (img.width != sum.width || img.height != sum.height) {
          throw DimensionError(path.string() + ": image is " + std::to_string(img.width) +
                               "x" + std::to_string(img.height) +
                               " but class " + std::to_string(ci) + " started at " +
                               std::to_string(sum.width) + "x" + std::to_string(sum.height));
        }
        for (std::size_t i = 0; i < sum.pixels.size(); ++i) sum.pixels[i] += img.pixels[i];
      }
    }
    const double count = static_cast<double>(grouped[ci].size());
    for (double& v : sum.pixels) v /= count;
    try {
      maps[ci] = {static_cast<int>(ci), extract(preprocess(std::move(sum), cfg), cfg.sp)};
    } catch (const DimensionError& e) {
      throw DimensionError(manifest.resolve(grouped[ci].front()).string() + ": " + e.what());
    }
  });
  return maps;
}

RunResult evaluate(const ExperimentConfig& cfg, const CorpusManifest& manifest,
                   std::span<const BinaryClassMap> maps, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.config = cfg;

  const TrainTestSplit s = split(manifest, cfg.split);
  result.records.resize(s.test.size());
  parallel_for(s.test.size(), options.workers, [&](std::size_t i) {
    const ManifestEntry& e = s.test[i];
    FeatureMap fm = feature_of_entry(manifest, e, cfg);
    try {
      auto [predicted, scores] = classify(fm, maps);
      const bool tie = count_at_minimum(scores) > 1;
      result.records[i] = TestRecord{e.class_id,          predicted, e.label,
                                     std::move(scores),   predicted == e.class_id,
                                     tie};
    } catch (const DimensionError& err) {
      throw DimensionError(manifest.resolve(e).string() + ": " + err.what());
    }
  });

  for (const TestRecord& rec : result.records) {
    GroupStat& by_class = result.per_class[rec.true_class];
    ++by_class.total;
    GroupStat& by_category = result.per_category[rec.category];
    ++by_category.total;
    ++result.tested;
    if (rec.correct) {
      ++by_class.correct;
      ++by_category.correct;
      ++result.correct;
    }
    if (rec.tie) ++result.tie_count;
  }
  result.total_accuracy =
      result.tested == 0 ? 0.0 : static_cast<double>(result.correct) / result.tested;
  result.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run(const ExperimentConfig& cfg, const CorpusManifest& manifest,
              const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<BinaryClassMap> maps;
  if (cfg.architecture == Architecture::kSpTm) {
    std::vector<ClassMap> analog = train_class_maps(cfg, manifest, options);
    maps.reserve(analog.size());
    for (const ClassMap& cm : analog) maps.push_back(binarize(cm, cfg.tm));
  } else {
    maps = build_templates(cfg, manifest, options);
  }
  RunResult result = evaluate(cfg, manifest, maps, options);
  result.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<RunResult> delta_sweep(const ExperimentConfig& base,
                                   std::span<const double> deltas,
                                   std::span<const int> train_sizes,
                                   const CorpusManifest& manifest,
                                   const RunOptions& options) {
  std::vector<RunResult> results;
  results.reserve(deltas.size() * train_sizes.size());
  for (double delta : deltas) {
    for (int z : train_sizes) {
      ExperimentConfig cfg = base;  // shared SP seed: only TM inputs vary
      cfg.tm.delta = delta;
      cfg.split.train_per_class = z;
      results.push_back(run(cfg, manifest, options));
    }
  }
  return results;
}

CompareResult compare_architectures(const ExperimentConfig& cfg,
                                    const CorpusManifest& manifest,
                                    const RunOptions& options) {
  ExperimentConfig sp_only = cfg;
  sp_only.architecture = Architecture::kSpOnly;
  ExperimentConfig sp_tm = cfg;
  sp_tm.architecture = Architecture::kSpTm;
  return {run(sp_only, manifest, options), run(sp_tm, manifest, options)};
}

namespace {

// Shortest round-trip decimal form, so 0.01 prints as "0.01".
std::string csv_number(double v) { return nlohmann::json(v).dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "delta,train_size,architecture,class_id,category,correct,total,accuracy\n";
  for (const RunResult& r : runs) {
    std::map<std::pair<int, std::string>, GroupStat> cells;
    for (const TestRecord& rec : r.records) {
      GroupStat& cell = cells[{rec.true_class, rec.category}];
      ++cell.total;
      if (rec.correct) ++cell.correct;
    }
    for (const auto& [key, stat] : cells) {
      out << csv_number(r.config.tm.delta) << ',' << r.config.split.train_per_class
          << ',' << to_string(r.config.architecture) << ',' << key.first << ','
          << csv_field(key.second) << ',' << stat.correct << ',' << stat.total << ','
          << csv_number(stat.accuracy()) << '\n';
    }
  }
}

nlohmann::json summary_json(std::span<const RunResult> runs) {
  nlohmann::json out;
  out["runs"] = nlohmann::json::array();
  for (const RunResult& r : runs) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& [id, stat] : r.per_class) {
      per_class.push_back({{"class_id", id},
                           {"correct", stat.correct},
                           {"total", stat.total},
                           {"accuracy", stat.accuracy()}});
    }
    nlohmann::json per_category = nlohmann::json::array();
    for (const auto& [label, stat] : r.per_category) {
      per_category.push_back({{"category", label},
                              {"correct", stat.correct},
                              {"total", stat.total},
                              {"accuracy", stat.accuracy()}});
    }
    out["runs"].push_back({{"architecture", to_string(r.config.architecture)},
                           {"config", to_json(r.config)},
                           {"total_correct", r.correct},
                           {"total_tested", r.tested},
                           {"total_accuracy", r.total_accuracy},
                           {"tie_count", r.tie_count},
                           {"per_class", std::move(per_class)},
                           {"per_category", std::move(per_category)}});
  }
  return out;
}

}  // namespace htmrec
