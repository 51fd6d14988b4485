// Command-line front end for the recognition pipeline: corpus synthesis,
// feature extraction, training, testing, delta sweeps, and architecture
// comparisons. Exit codes: 0 success, 1 usage error, 2 data/config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htmrec/config.hpp"
#include "htmrec/corpus.hpp"
#include "htmrec/experiment.hpp"
#include "htmrec/pnm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json build_config(const std::string& config_path,
                  const std::vector<std::string>& overrides, bool center_crop) {
  json cfg = config_path.empty() ? htmrec::default_config_json()
                                 : htmrec::load_config_file(config_path);
  for (const std::string& kv : overrides) htmrec::apply_override(cfg, kv);
  if (center_crop) cfg["center_crop"] = true;
  return cfg;
}

fs::path manifest_path(const std::string& flag, const json& cfg) {
  if (!flag.empty()) return flag;
  const std::string from_cfg = cfg.value("manifest", std::string{});
  if (!from_cfg.empty()) return from_cfg;
  throw htmrec::ConfigError(
      "no manifest given: pass --manifest or set \"manifest\" in the config file");
}

void write_outputs(const fs::path& out_dir, const std::string& stem,
                   std::span<const htmrec::RunResult> runs) {
  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / (stem + ".csv"), std::ios::binary);
    if (!csv) throw htmrec::IoError((out_dir / (stem + ".csv")).string() +
                                    ": cannot open for writing");
    htmrec::write_results_csv(csv, runs);
  }
  std::ofstream js(out_dir / (stem + ".json"), std::ios::binary);
  if (!js) throw htmrec::IoError((out_dir / (stem + ".json")).string() +
                                 ": cannot open for writing");
  js << htmrec::summary_json(runs).dump(2) << "\n";
}

std::string percent(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

void print_run_line(const htmrec::RunResult& r) {
  std::cout << to_string(r.config.architecture) << ": accuracy " << percent(r.total_accuracy)
            << " (" << r.correct << "/" << r.tested << ", " << r.tie_count << " ties, "
            << r.duration_seconds << " s)\n";
}

void print_compare_table(const htmrec::CompareResult& pair) {
  std::vector<std::string> categories;
  for (const auto& [label, stat] : pair.sp_tm.per_category) categories.push_back(label);

  std::cout << "\narchitecture";
  for (const std::string& c : categories) std::cout << "\t" << c;
  std::cout << "\ttotal\n";
  for (const htmrec::RunResult* r : {&pair.sp_only, &pair.sp_tm}) {
    std::cout << to_string(r->config.architecture);
    for (const std::string& c : categories) {
      const auto it = r->per_category.find(c);
      std::cout << "\t" << (it == r->per_category.end() ? "-" : percent(it->second.accuracy()));
    }
    std::cout << "\t" << percent(r->total_accuracy) << "\n";
  }
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string manifest;
  std::string out;
  int workers = 0;
  bool center_crop = false;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_manifest = true) {
  sub->add_option("--config", args.config_path, "JSON config file (defaults apply when absent)");
  sub->add_option("--set", args.overrides,
                  "config override as dotted key=value, e.g. tm.delta=0.05")
      ->take_all();
  if (with_manifest) {
    sub->add_option("--manifest", args.manifest, "corpus manifest (tsv)");
  }
  sub->add_option("--workers", args.workers, "worker threads (0 = all cores)");
  sub->add_flag("--center-crop", args.center_crop,
                "crop inputs to the largest size divisible by n*m instead of failing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"htm-recog: sparse feature extraction, Hebbian class-map learning, "
               "and XOR template matching over PGM/PPM corpora"};
  app.require_subcommand(1);

  // synth
  htmrec::SynthSpec synth_spec;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
  synth->add_option("--classes", synth_spec.num_classes, "number of classes")
      ->default_val(10);
  synth->add_option("--per-session", synth_spec.per_session, "images per class per session")
      ->default_val(13);
  synth->add_option("--width", synth_spec.width, "image width")->default_val(32);
  synth->add_option("--height", synth_spec.height, "image height")->default_val(32);
  synth->add_option("--noise", synth_spec.noise,
                    "per-pixel probability of replacement by a random value")
      ->default_val(0.3);
  synth->add_option("--seed", synth_spec.seed, "corpus seed")->default_val(0);
  synth->add_option("--out", synth_out, "output directory")->required();

  // extract
  CommonArgs extract_args;
  std::string extract_image, extract_raw;
  CLI::App* extract = app.add_subcommand(
      "extract", "run preprocessing and the spatial pooler on one image");
  extract->add_option("--image", extract_image, "input PGM/PPM")->required();
  extract->add_option("--out", extract_args.out, "output PBM path")->required();
  extract->add_option("--raw", extract_raw, "also write the raw bit dump (SPFM) here");
  add_common(extract, extract_args, /*with_manifest=*/false);

  // train
  CommonArgs train_args;
  CLI::App* train = app.add_subcommand("train", "build per-class models from the train split");
  train->add_option("--out", train_args.out, "model output directory")->required();
  add_common(train, train_args);

  // test
  CommonArgs test_args;
  std::string model_dir;
  CLI::App* test = app.add_subcommand("test", "evaluate a trained model on the test split");
  test->add_option("--model", model_dir, "model directory written by train")->required();
  test->add_option("--out", test_args.out, "results output directory")->required();
  add_common(test, test_args);

  // sweep
  CommonArgs sweep_args;
  std::vector<double> sweep_deltas;
  std::vector<int> sweep_sizes;
  CLI::App* sweep = app.add_subcommand("sweep", "grid of runs over delta and train size");
  sweep->add_option("--deltas", sweep_deltas, "comma-separated delta values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--train-sizes", sweep_sizes, "comma-separated train set sizes")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_args.out, "results output directory")->required();
  add_common(sweep, sweep_args);

  // compare
  CommonArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "paired sp_only vs sp_tm runs with a shared SP seed");
  compare->add_option("--out", compare_args.out, "results output directory")->required();
  add_common(compare, compare_args);

  try {
    app.parse(argc, argv);

    if (*synth) {
      htmrec::CorpusManifest manifest = htmrec::synth_corpus(synth_spec, synth_out);
      std::cout << "wrote " << manifest.entries.size() << " images and manifest.tsv to "
                << synth_out << "\n";
      return 0;
    }

    if (*extract) {
      const json cfg_json = build_config(extract_args.config_path, extract_args.overrides,
                                         extract_args.center_crop);
      const htmrec::ExperimentConfig cfg = htmrec::experiment_config_from_json(cfg_json);
      htmrec::GrayImage img = htmrec::load_image(extract_image);
      if (cfg.center_crop)
        img = htmrec::center_crop_to_multiple(img, cfg.sp.n * cfg.sp.m);
      try {
        htmrec::FeatureMap fm =
            htmrec::extract(htmrec::stddev_filter(img, cfg.filter_radius), cfg.sp);
        htmrec::save_pbm(fm, extract_args.out);
        if (!extract_raw.empty()) htmrec::save_spfm(fm, extract_raw);
        std::cout << "feature map " << fm.width() << "x" << fm.height() << ", "
                  << fm.popcount() << " active of " << fm.bit_count() << " bits -> "
                  << extract_args.out << "\n";
      } catch (const htmrec::DimensionError& e) {
        throw htmrec::DimensionError(extract_image + ": " + e.what());
      }
      return 0;
    }

    if (*train) {
      const json cfg_json =
          build_config(train_args.config_path, train_args.overrides, train_args.center_crop);
      const htmrec::ExperimentConfig cfg = htmrec::experiment_config_from_json(cfg_json);
      const htmrec::CorpusManifest manifest =
          htmrec::load_manifest(manifest_path(train_args.manifest, cfg_json));
      fs::create_directories(train_args.out);
      char name[32];
      if (cfg.architecture == htmrec::Architecture::kSpTm) {
        std::vector<htmrec::ClassMap> maps =
            htmrec::train_class_maps(cfg, manifest, {train_args.workers});
        for (const htmrec::ClassMap& cm : maps) {
          std::snprintf(name, sizeof(name), "class_%04d.htmc", cm.class_id);
          htmrec::save_class_map(cm, fs::path(train_args.out) / name);
        }
        std::cout << "trained " << maps.size() << " class maps ("
                  << (maps.empty() ? 0 : maps.front().train_count)
                  << " images each) -> " << train_args.out << "\n";
      } else {
        std::vector<htmrec::BinaryClassMap> templates =
            htmrec::build_templates(cfg, manifest, {train_args.workers});
        for (const htmrec::BinaryClassMap& bm : templates) {
          std::snprintf(name, sizeof(name), "class_%04d.spfm", bm.class_id);
          htmrec::save_spfm(bm.bits, fs::path(train_args.out) / name);
        }
        std::cout << "built " << templates.size() << " averaged templates -> "
                  << train_args.out << "\n";
      }
      return 0;
    }

    if (*test) {
      const json cfg_json =
          build_config(test_args.config_path, test_args.overrides, test_args.center_crop);
      const htmrec::ExperimentConfig cfg = htmrec::experiment_config_from_json(cfg_json);
      const htmrec::CorpusManifest manifest =
          htmrec::load_manifest(manifest_path(test_args.manifest, cfg_json));

      if (!fs::is_directory(model_dir)) {
        throw htmrec::IoError(model_dir + ": not a directory");
      }
      std::vector<fs::path> files;
      const std::string ext =
          cfg.architecture == htmrec::Architecture::kSpTm ? ".htmc" : ".spfm";
      for (const auto& e : fs::directory_iterator(model_dir)) {
        if (e.path().extension() == ext) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        throw htmrec::EmptyModelError(model_dir + ": no " + ext + " class maps found");
      }
      std::vector<htmrec::BinaryClassMap> maps;
      maps.reserve(files.size());
      for (const fs::path& f : files) {
        if (cfg.architecture == htmrec::Architecture::kSpTm) {
          maps.push_back(htmrec::binarize(htmrec::load_class_map(f), cfg.tm));
        } else {
          // Template class id comes from the class_NNNN file name.
          const std::string stem = f.stem().string();
          int id = 0;
          try {
            id = std::stoi(stem.substr(stem.find_last_of('_') + 1));
          } catch (const std::exception&) {
            throw htmrec::ParseError(f.string() +
                                     ": template file name must end in _<class_id>");
          }
          maps.push_back({id, htmrec::load_spfm(f)});
        }
      }

      htmrec::RunResult result = htmrec::evaluate(cfg, manifest, maps, {test_args.workers});
      print_run_line(result);
      const htmrec::RunResult runs[] = {result};
      write_outputs(test_args.out, "test_" + htmrec::config_hash(cfg_json), runs);
      return 0;
    }

    if (*sweep) {
      const json cfg_json =
          build_config(sweep_args.config_path, sweep_args.overrides, sweep_args.center_crop);
      const htmrec::ExperimentConfig base = htmrec::experiment_config_from_json(cfg_json);
      const htmrec::CorpusManifest manifest =
          htmrec::load_manifest(manifest_path(sweep_args.manifest, cfg_json));
      std::vector<htmrec::RunResult> results =
          htmrec::delta_sweep(base, sweep_deltas, sweep_sizes, manifest, {sweep_args.workers});

      std::cout << "delta";
      for (int z : sweep_sizes) std::cout << "\tz=" << z;
      std::cout << "\n";
      std::size_t idx = 0;
      for (double d : sweep_deltas) {
        std::cout << d;
        for (std::size_t zi = 0; zi < sweep_sizes.size(); ++zi)
          std::cout << "\t" << percent(results[idx++].total_accuracy);
        std::cout << "\n";
      }

      json hashed = cfg_json;
      hashed["sweep"] = {{"deltas", sweep_deltas}, {"train_sizes", sweep_sizes}};
      write_outputs(sweep_args.out, "sweep_" + htmrec::config_hash(hashed), results);
      return 0;
    }

    if (*compare) {
      const json cfg_json = build_config(compare_args.config_path, compare_args.overrides,
                                         compare_args.center_crop);
      const htmrec::ExperimentConfig cfg = htmrec::experiment_config_from_json(cfg_json);
      const htmrec::CorpusManifest manifest =
          htmrec::load_manifest(manifest_path(compare_args.manifest, cfg_json));
      htmrec::CompareResult pair =
          htmrec::compare_architectures(cfg, manifest, {compare_args.workers});
      print_run_line(pair.sp_only);
      print_run_line(pair.sp_tm);
      print_compare_table(pair);
      const htmrec::RunResult runs[] = {pair.sp_only, pair.sp_tm};
      write_outputs(compare_args.out, "compare_" + htmrec::config_hash(cfg_json), runs);
      return 0;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const htmrec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
