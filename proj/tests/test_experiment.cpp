#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "htmrec/config.hpp"
#include "htmrec/experiment.hpp"
#include "htmrec/pnm.hpp"
#include "htmrec/rng.hpp"

using namespace htmrec;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() /
             ("htmrec_exp_" + tag + "_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

GrayImage random_gray(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng = make_engine(seed, 0);
  GrayImage img{w, h, {}};
  // Quantized so a PGM round trip is exact.
  for (int i = 0; i < w * h; ++i) img.pixels.push_back(uniform_byte(rng) / 255.0);
  return img;
}

std::string csv_of(std::span<const RunResult> runs) {
  std::ostringstream ss;
  write_results_csv(ss, runs);
  return ss.str();
}

bool records_equal(const RunResult& a, const RunResult& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const TestRecord& x = a.records[i];
    const TestRecord& y = b.records[i];
    if (x.true_class != y.true_class || x.predicted_class != y.predicted_class ||
        x.category != y.category || x.scores != y.scores || x.correct != y.correct ||
        x.tie != y.tie)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("config defaults load, override, and reject unknown keys") {
  auto dir = temp_dir("config");
  auto path = dir / "cfg.json";
  std::ofstream(path) << R"({"sp": {"n": 4, "seed": 9}, "tm": {"delta": 0.05}})";

  nlohmann::json cfg = load_config_file(path);
  ExperimentConfig ec = experiment_config_from_json(cfg);
  CHECK(ec.sp.n == 4);
  CHECK(ec.sp.m == 2);  // default survives partial files
  CHECK(ec.sp.seed == 9);
  CHECK(ec.tm.delta == 0.05);
  CHECK(ec.architecture == Architecture::kSpTm);

  apply_override(cfg, "tm.delta=0.2");
  apply_override(cfg, "architecture=sp_only");
  apply_override(cfg, "center_crop=true");
  ec = experiment_config_from_json(cfg);
  CHECK(ec.tm.delta == 0.2);
  CHECK(ec.architecture == Architecture::kSpOnly);
  CHECK(ec.center_crop == true);

  CHECK_THROWS_AS(apply_override(cfg, "tm.detla=0.2"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "tm=0.2"), ConfigError);

  std::ofstream(path) << R"({"spp": {"n": 4}})";
  CHECK_THROWS_WITH_AS(load_config_file(path), doctest::Contains("spp"), ConfigError);

  std::ofstream(path) << R"({"tm": {"delta": 0.0}})";
  CHECK_THROWS_WITH_AS(experiment_config_from_json(load_config_file(path)),
                       doctest::Contains("delta"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("config range validation names the field") {
  nlohmann::json cfg = default_config_json();
  cfg["tm"]["delta"] = 0.0;
  CHECK_THROWS_WITH_AS(experiment_config_from_json(cfg), doctest::Contains("tm.delta"),
                       ConfigError);
  cfg = default_config_json();
  cfg["sp"]["gamma"] = 1.5;
  CHECK_THROWS_WITH_AS(experiment_config_from_json(cfg), doctest::Contains("sp.gamma"),
                       ConfigError);
  cfg = default_config_json();
  cfg["split"]["train_session"] = 3;
  CHECK_THROWS_AS(experiment_config_from_json(cfg), ConfigError);
  cfg = default_config_json();
  cfg["architecture"] = "both";
  CHECK_THROWS_AS(experiment_config_from_json(cfg), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  nlohmann::json a = default_config_json();
  nlohmann::json b = default_config_json();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  apply_override(b, "tm.delta=0.11");
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("experiment config JSON round trip") {
  ExperimentConfig ec;
  ec.sp = {4, 1, 0.25, 77};
  ec.tm = {0.02, 0.4, 0.6};
  ec.split = {5, 3, 2, 1};
  ec.filter_radius = 2;
  ec.architecture = Architecture::kSpOnly;
  ec.center_crop = true;
  ExperimentConfig back = experiment_config_from_json([&] {
    nlohmann::json j = default_config_json();
    nlohmann::json snapshot = to_json(ec);
    for (auto& [k, v] : snapshot.items()) j[k] = v;
    return j;
  }());
  CHECK(back.sp.n == 4);
  CHECK(back.sp.gamma == 0.25);
  CHECK(back.tm.sigma == 0.4);
  CHECK(back.split.train_session == 2);
  CHECK(back.architecture == Architecture::kSpOnly);
  CHECK(back.center_crop == true);
}

TEST_CASE("run: a class tested on its own training image is always correct") {
  auto dir = temp_dir("selfmatch");
  GrayImage img = random_gray(8, 8, 5);
  save_pgm(img, dir / "only.pgm");

  CorpusManifest manifest;
  manifest.root = dir;
  manifest.classes = {{0, "solo"}};
  manifest.entries = {{0, "solo", 1, 0, "only.pgm"}, {0, "solo", 2, 0, "only.pgm"}};

  ExperimentConfig cfg;
  cfg.split = {1, 1, 1, 2};
  for (Architecture arch : {Architecture::kSpTm, Architecture::kSpOnly}) {
    cfg.architecture = arch;
    RunResult r = run(cfg, manifest);
    CHECK(r.tested == 1);
    CHECK(r.total_accuracy == 1.0);
    CHECK(r.records[0].scores[0].score == 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("run is deterministic and worker-count independent") {
  auto dir = temp_dir("determinism");
  CorpusManifest manifest = synth_corpus({4, 3, 16, 16, 0.3, 11}, dir);

  ExperimentConfig cfg;
  cfg.split = {3, 3, 1, 2};
  RunResult a = run(cfg, manifest, {1});
  RunResult b = run(cfg, manifest, {1});
  RunResult c = run(cfg, manifest, {4});
  CHECK(records_equal(a, b));
  CHECK(records_equal(a, c));
  CHECK(a.total_accuracy == c.total_accuracy);

  const RunResult runs_a[] = {a};
  const RunResult runs_c[] = {c};
  CHECK(csv_of(runs_a) == csv_of(runs_c));
  CHECK(summary_json(runs_a).dump(2) == summary_json(runs_c).dump(2));
  fs::remove_all(dir);
}

TEST_CASE("per-category and per-class stats aggregate exactly to the total") {
  auto dir = temp_dir("aggregate");
  CorpusManifest manifest = synth_corpus({5, 4, 16, 16, 0.6, 3}, dir);
  ExperimentConfig cfg;
  cfg.split = {4, 4, 1, 2};
  RunResult r = run(cfg, manifest);
  int class_correct = 0, class_total = 0, cat_correct = 0, cat_total = 0;
  for (const auto& [id, stat] : r.per_class) {
    class_correct += stat.correct;
    class_total += stat.total;
  }
  for (const auto& [label, stat] : r.per_category) {
    cat_correct += stat.correct;
    cat_total += stat.total;
  }
  CHECK(class_correct == r.correct);
  CHECK(class_total == r.tested);
  CHECK(cat_correct == r.correct);
  CHECK(cat_total == r.tested);
  CHECK(r.tested == 20);
  CHECK(r.total_accuracy == doctest::Approx(static_cast<double>(r.correct) / 20));
  fs::remove_all(dir);
}

TEST_CASE("compare: with one training image both architectures coincide") {
  auto dir = temp_dir("one_image");
  CorpusManifest manifest = synth_corpus({4, 2, 16, 16, 0.4, 21}, dir);
  ExperimentConfig cfg;
  cfg.split = {1, 2, 1, 2};
  CompareResult pair = compare_architectures(cfg, manifest);
  CHECK(pair.sp_only.total_accuracy == pair.sp_tm.total_accuracy);
  REQUIRE(pair.sp_only.records.size() == pair.sp_tm.records.size());
  for (std::size_t i = 0; i < pair.sp_only.records.size(); ++i) {
    CHECK(pair.sp_only.records[i].predicted_class ==
          pair.sp_tm.records[i].predicted_class);
    CHECK(pair.sp_only.records[i].scores == pair.sp_tm.records[i].scores);
  }
  fs::remove_all(dir);
}

TEST_CASE("delta_sweep produces one run per grid cell with a shared SP seed") {
  auto dir = temp_dir("sweep");
  CorpusManifest manifest = synth_corpus({3, 3, 16, 16, 0.3, 31}, dir);
  ExperimentConfig base;
  base.sp.seed = 123;
  base.split = {3, 3, 1, 2};

  const double deltas[] = {0.01};
  const int sizes[] = {1};
  std::vector<RunResult> tiny = delta_sweep(base, deltas, sizes, manifest);
  CHECK(tiny.size() == 1);
  CHECK(tiny[0].config.tm.delta == 0.01);
  CHECK(tiny[0].config.split.train_per_class == 1);

  const double deltas2[] = {0.01, 0.5};
  const int sizes2[] = {1, 3};
  std::vector<RunResult> grid = delta_sweep(base, deltas2, sizes2, manifest);
  REQUIRE(grid.size() == 4);
  for (const RunResult& r : grid) CHECK(r.config.sp.seed == 123);
  CHECK(grid[0].config.tm.delta == 0.01);
  CHECK(grid[1].config.split.train_per_class == 3);
  CHECK(grid[3].config.tm.delta == 0.5);
  fs::remove_all(dir);
}

TEST_CASE("run errors name the offending file") {
  auto dir = temp_dir("errors");
  // 6x5 image is not divisible by n*m = 4.
  save_pgm(random_gray(6, 5, 1), dir / "odd.pgm");
  CorpusManifest manifest;
  manifest.root = dir;
  manifest.classes = {{0, "x"}};
  manifest.entries = {{0, "x", 1, 0, "odd.pgm"}, {0, "x", 2, 0, "odd.pgm"}};

  ExperimentConfig cfg;
  cfg.split = {1, 1, 1, 2};
  CHECK_THROWS_WITH_AS(run(cfg, manifest), doctest::Contains("odd.pgm"), DimensionError);

  // Center cropping makes the same corpus usable.
  cfg.center_crop = true;
  RunResult r = run(cfg, manifest);
  CHECK(r.total_accuracy == 1.0);

  // Missing file.
  manifest.entries[0].path = "missing.pgm";
  cfg.center_crop = false;
  CHECK_THROWS_WITH_AS(run(cfg, manifest), doctest::Contains("missing.pgm"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("CSV output shape and content") {
  auto dir = temp_dir("csv");
  CorpusManifest manifest = synth_corpus({2, 2, 16, 16, 0.0, 1}, dir);
  ExperimentConfig cfg;
  cfg.split = {2, 2, 1, 2};
  RunResult r = run(cfg, manifest);
  const RunResult runs[] = {r};
  std::string csv = csv_of(runs);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "delta,train_size,architecture,class_id,category,correct,total,accuracy");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find("sp_tm") != std::string::npos);
    CHECK(line.substr(0, 5) == "0.01,");
  }
  CHECK(rows == 2);  // one (class, category) cell per class at noise 0
  CHECK(csv.find("class_000") != std::string::npos);
  CHECK(csv.find(",2,2,1") != std::string::npos);  // noiseless corpus is perfect
  fs::remove_all(dir);
}

TEST_CASE("summary JSON carries config snapshot, totals, and tie counts") {
  auto dir = temp_dir("summary");
  CorpusManifest manifest = synth_corpus({2, 2, 16, 16, 0.2, 9}, dir);
  ExperimentConfig cfg;
  cfg.split = {2, 2, 1, 2};
  RunResult r = run(cfg, manifest);
  const RunResult runs[] = {r};
  nlohmann::json summary = summary_json(runs);
  REQUIRE(summary["runs"].size() == 1);
  const nlohmann::json& jr = summary["runs"][0];
  CHECK(jr["architecture"] == "sp_tm");
  CHECK(jr["config"]["sp"]["n"] == 2);
  CHECK(jr["total_tested"] == 4);
  CHECK(jr.contains("tie_count"));
  CHECK(!jr.contains("duration"));
  CHECK(jr["per_class"].size() == 2);
  CHECK(jr["per_category"].size() == 2);
  fs::remove_all(dir);
}
