#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "htmrec/corpus.hpp"
#include "htmrec/matcher.hpp"
#include "htmrec/spatial_pooler.hpp"
#include "htmrec/temporal_memory.hpp"

namespace htmrec {

// SP_ONLY matches against the feature map of the pixel-averaged training
// images; SP_TM matches against binarized Hebbian class maps.
enum class Architecture { kSpOnly, kSpTm };

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& name);

// Everything that determines a run's results, in one auditable record.
struct ExperimentConfig {
  SpConfig sp;
  TmConfig tm;
  SplitSpec split;
  int filter_radius = 1;
  Architecture architecture = Architecture::kSpTm;
  bool center_crop = false;
};

struct TestRecord {
  int true_class = 0;
  int predicted_class = 0;
  std::string category;  // the test entry's manifest label
  ScoreVector scores;
  bool correct = false;
  bool tie = false;  // >= 2 classes shared the minimum score
};

struct GroupStat {
  int correct = 0;
  int total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct RunResult {
  ExperimentConfig config;
  std::vector<TestRecord> records;  // one per test image, split order
  std::map<int, GroupStat> per_class;
  std::map<std::string, GroupStat> per_category;
  int correct = 0;
  int tested = 0;
  double total_accuracy = 0.0;
  std::size_t tie_count = 0;
  double duration_seconds = 0.0;  // reported on stdout, never serialized
};

struct RunOptions {
  int workers = 0;  // 0 = available parallelism
};

// Builds the model named by cfg.architecture from the train split and
// evaluates the test split. Every failure names the offending file.
RunResult run(const ExperimentConfig& cfg, const CorpusManifest& manifest,
              const RunOptions& options = {});

// Trains one analog class map per class from the train split (SP_TM path).
std::vector<ClassMap> train_class_maps(const ExperimentConfig& cfg,
                                       const CorpusManifest& manifest,
                                       const RunOptions& options = {});

// Builds one averaged-image template per class (SP_ONLY path).
std::vector<BinaryClassMap> build_templates(const ExperimentConfig& cfg,
                                            const CorpusManifest& manifest,
                                            const RunOptions& options = {});

// Evaluates the test split against prebuilt binary maps.
RunResult evaluate(const ExperimentConfig& cfg, const CorpusManifest& manifest,
                   std::span<const BinaryClassMap> maps,
                   const RunOptions& options = {});

// Grid of runs over (delta, train size), row-major over deltas then sizes.
// All cells share the base SP seed so only TM parameters vary.
std::vector<RunResult> delta_sweep(const ExperimentConfig& base,
                                   std::span<const double> deltas,
                                   std::span<const int> train_sizes,
                                   const CorpusManifest& manifest,
                                   const RunOptions& options = {});

struct CompareResult {
  RunResult sp_only;
  RunResult sp_tm;
};

// Two runs sharing the SP seed, differing only in architecture.
CompareResult compare_architectures(const ExperimentConfig& cfg,
                                    const CorpusManifest& manifest,
                                    const RunOptions& options = {});

// CSV rows are per (class, category) cell of each run, under the header
// delta,train_size,architecture,class_id,category,correct,total,accuracy.
void write_results_csv(std::ostream& out, std::span<const RunResult> runs);

// Config snapshot, totals, and tie counts per run. Deliberately excludes
// wall-clock duration so reruns are byte-identical.
nlohmann::json summary_json(std::span<const RunResult> runs);

}  // namespace htmrec
