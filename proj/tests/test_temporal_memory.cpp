#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "htmrec/rng.hpp"
#include "htmrec/temporal_memory.hpp"

using namespace htmrec;

namespace {

FeatureMap fm_from_bits(int w, int h, const std::vector<int>& bits) {
  FeatureMap fm(w, h);
  for (std::size_t i = 0; i < bits.size(); ++i) fm.set_linear(i, bits[i] == 1);
  return fm;
}

FeatureMap constant_fm(int w, int h, bool v) {
  FeatureMap fm(w, h);
  for (std::size_t i = 0; i < fm.bit_count(); ++i) fm.set_linear(i, v);
  return fm;
}

}  // namespace

TEST_CASE("new_class_map fills every cell with the initial weight") {
  TmConfig cfg{0.01, 0.5, 0.5};
  ClassMap map = new_class_map(3, 2, 2, cfg);
  CHECK(map.class_id == 3);
  CHECK(map.train_count == 0);
  REQUIRE(map.weights.size() == 4);
  for (double w : map.weights) CHECK(w == 0.5);

  TmConfig zero_init{0.01, 0.5, 0.0};
  for (double w : new_class_map(0, 2, 2, zero_init).weights) CHECK(w == 0.0);
}

TEST_CASE("new_class_map at the published grid scale") {
  // 160x120 columns hold 19200 cells.
  ClassMap map = new_class_map(0, 160, 120, TmConfig{});
  CHECK(map.weights.size() == 19200);
}

TEST_CASE("train_update moves cells by +/- delta and clamps") {
  TmConfig cfg{0.01, 0.5, 0.5};
  ClassMap map = new_class_map(0, 2, 1, cfg);
  train_update(map, fm_from_bits(2, 1, {1, 0}), cfg);
  CHECK(map.weights[0] == doctest::Approx(0.51).epsilon(1e-12));
  CHECK(map.weights[1] == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(map.train_count == 1);

  TmConfig at_floor{0.01, 0.5, 0.0};
  ClassMap floor_map = new_class_map(0, 1, 1, at_floor);
  train_update(floor_map, fm_from_bits(1, 1, {0}), at_floor);
  CHECK(floor_map.weights[0] == 0.0);
}

TEST_CASE("train_update: thirteen consecutive active updates") {
  TmConfig cfg{0.01, 0.5, 0.5};
  ClassMap map = new_class_map(0, 1, 1, cfg);
  FeatureMap on = constant_fm(1, 1, true);
  for (int i = 0; i < 13; ++i) train_update(map, on, cfg);
  CHECK(map.weights[0] == doctest::Approx(0.63).epsilon(1e-12));
  CHECK(map.train_count == 13);
}

TEST_CASE("train_update rejects mismatched dimensions") {
  TmConfig cfg;
  ClassMap map = new_class_map(0, 2, 2, cfg);
  FeatureMap fm(3, 2);
  CHECK_THROWS_AS(train_update(map, fm, cfg), DimensionError);
}

TEST_CASE("binarize thresholds at sigma with >=") {
  TmConfig cfg{0.01, 0.5, 0.5};
  ClassMap map = new_class_map(7, 2, 1, cfg);
  map.weights = {0.63, 0.37};
  BinaryClassMap bin = binarize(map, cfg);
  CHECK(bin.class_id == 7);
  CHECK(bin.bits.get(0, 0) == true);
  CHECK(bin.bits.get(1, 0) == false);

  map.weights = {0.5, 0.5};
  BinaryClassMap equal = binarize(map, cfg);
  CHECK(equal.bits.popcount() == 2);  // exactly sigma stays on

  // Degenerate untrained map at init 0.5 binarizes to all ones.
  ClassMap untrained = new_class_map(0, 3, 3, cfg);
  CHECK(binarize(untrained, cfg).bits.popcount() == 9);
}

TEST_CASE("binarize is monotone in the weights") {
  TmConfig cfg{0.01, 0.4, 0.5};
  ClassMap map = new_class_map(0, 4, 4, cfg);
  std::mt19937_64 rng = make_engine(3, 3);
  for (double& w : map.weights) w = unit_real(rng);
  BinaryClassMap before = binarize(map, cfg);
  for (double& w : map.weights) w = std::min(1.0, w + 0.05);
  BinaryClassMap after = binarize(map, cfg);
  for (std::size_t i = 0; i < map.weights.size(); ++i) {
    if (before.bits.get_linear(i)) CHECK(after.bits.get_linear(i));
  }
}

TEST_CASE("train_class folds in order and rejects empty input") {
  TmConfig cfg{0.1, 0.5, 0.5};
  std::vector<FeatureMap> ones{constant_fm(2, 2, true)};
  ClassMap map = train_class(ones, 4, cfg);
  CHECK(map.class_id == 4);
  CHECK(map.train_count == 1);
  for (double w : map.weights) CHECK(w == doctest::Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(train_class(std::vector<FeatureMap>{}, 0, cfg), EmptyClassError);
}

TEST_CASE("closed form: weight = init + (ones - zeros) * delta away from bounds") {
  std::mt19937_64 rng = make_engine(13, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int z = 1 + static_cast<int>(rng() % 20);
    const double init = 0.3 + 0.4 * unit_real(rng);
    // Keep z * delta strictly inside min(init, 1 - init) so no clamp hits.
    const double bound = std::min(init, 1.0 - init);
    const double delta = bound / z * (0.1 + 0.8 * unit_real(rng));
    TmConfig cfg{delta, 0.5, init};

    std::vector<FeatureMap> seq;
    int ones = 0;
    for (int i = 0; i < z; ++i) {
      const bool bit = (rng() & 1) != 0;
      ones += bit ? 1 : 0;
      seq.push_back(constant_fm(1, 1, bit));
    }
    ClassMap map = train_class(seq, 0, cfg);
    const double expected = init + (2 * ones - z) * delta;
    CHECK(map.weights[0] == doctest::Approx(expected).epsilon(1e-12));

    // Order independence away from the bounds.
    std::shuffle(seq.begin(), seq.end(), rng);
    ClassMap shuffled = train_class(seq, 0, cfg);
    CHECK(shuffled.weights[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("thirteen-image envelope at delta 0.01") {
  TmConfig cfg{0.01, 0.5, 0.5};
  std::mt19937_64 rng = make_engine(17, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FeatureMap> seq;
    for (int i = 0; i < 13; ++i) seq.push_back(constant_fm(2, 2, (rng() & 1) != 0));
    ClassMap map = train_class(seq, 0, cfg);
    for (double w : map.weights) {
      CHECK(w >= 0.37 - 1e-12);
      CHECK(w <= 0.63 + 1e-12);
    }
  }
}

TEST_CASE("weights stay clamped to [0,1] under any update stream") {
  std::mt19937_64 rng = make_engine(19, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const double delta = 0.05 + 0.9 * unit_real(rng);
    TmConfig cfg{delta, 0.5, unit_real(rng)};
    ClassMap map = new_class_map(0, 2, 2, cfg);
    for (int step = 0; step < 40; ++step) {
      FeatureMap fm(2, 2);
      for (std::size_t i = 0; i < 4; ++i) fm.set_linear(i, (rng() & 1) != 0);
      train_update(map, fm, cfg);
      for (double w : map.weights) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
      }
    }
  }
}

TEST_CASE("class map file format: golden header and round trip") {
  TmConfig cfg{0.25, 0.5, 0.5};
  ClassMap map = new_class_map(9, 2, 1, cfg);
  train_update(map, fm_from_bits(2, 1, {1, 0}), cfg);

  auto dir = std::filesystem::temp_directory_path() /
             ("htmrec_tm_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto path = dir / "class.htmc";
  save_class_map(map, path);

  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 24 + 2 * 8);
  const std::vector<unsigned char> header = {'H', 'T', 'M', 'C', 1, 0, 0, 0,
                                             9, 0, 0, 0, 2, 0, 0, 0,
                                             1, 0, 0, 0, 1, 0, 0, 0};
  CHECK(std::vector<unsigned char>(bytes.begin(), bytes.begin() + 24) == header);

  ClassMap back = load_class_map(path);
  CHECK(back.class_id == map.class_id);
  CHECK(back.cols_w == map.cols_w);
  CHECK(back.cols_h == map.cols_h);
  CHECK(back.train_count == map.train_count);
  CHECK(back.weights == map.weights);

  auto bad = dir / "bad.htmc";
  std::ofstream(bad, std::ios::binary) << "WHAT";
  CHECK_THROWS_WITH_AS(load_class_map(bad), doctest::Contains("bad.htmc"), ParseError);
  std::filesystem::remove_all(dir);
}
