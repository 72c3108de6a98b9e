// Command-line front end: generate synthetic arches, augment labeled meshes,
// train the segmentation network, run the four-phase pipeline, evaluate
// predictions, and benchmark per-phase timings across mesh sizes.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "dentseg/augmentor.hpp"
#include "dentseg/featurizer.hpp"
#include "dentseg/mesh_io.hpp"
#include "dentseg/metrics.hpp"
#include "dentseg/pipeline.hpp"
#include "dentseg/rng.hpp"
#include "dentseg/run_config.hpp"
#include "dentseg/segnet.hpp"
#include "dentseg/synth_data.hpp"

namespace fs = std::filesystem;
using namespace dentseg;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  RunConfig config;

  void resolve() {
    if (!config_path.empty()) config = load_run_config(config_path);
    for (const auto& assignment : overrides) apply_override(config, assignment);
  }
};

// --config, --set name=value, and one typed flag per config leaf
// (--rate, --refiner.lambda, ...). Typed flags are applied after --set.
void register_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration file");
  cmd->add_option("--set", args.overrides, "override a config leaf, name=value")
      ->delimiter(',');
  static RunConfig probe;  // names/kinds only
  for (const auto& field : config_fields(probe)) {
    cmd->add_option_function<std::string>(
        "--" + field.name,
        [&args, name = field.name](const std::string& value) {
          args.overrides.push_back(name + "=" + value);
        },
        "override config leaf " + field.name);
  }
}

std::string zero_padded(const char* prefix, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

TrainingSample make_sample(const TriangleMesh& mesh, const LabelField& labels,
                           const RunConfig& cfg) {
  const CellGeometry geom = compute_cell_geometry(mesh);
  const double diagonal = geom.bbox_diagonal();
  TrainingSample sample;
  sample.features = build_features(mesh, geom);
  auto [a_small, a_large] = build_adjacency(geom, cfg.radii.small_factor * diagonal,
                                            cfg.radii.large_factor * diagonal);
  sample.a_small = std::move(a_small);
  sample.a_large = std::move(a_large);
  sample.labels = labels;
  return sample;
}

PipelineConfig pipeline_config(const RunConfig& cfg) {
  PipelineConfig pc;
  pc.rate = cfg.rate;
  pc.small_radius_factor = cfg.radii.small_factor;
  pc.large_radius_factor = cfg.radii.large_factor;
  pc.refiner = cfg.refiner;
  pc.transfer = cfg.transfer;
  return pc;
}

std::vector<std::pair<fs::path, fs::path>> labeled_pairs(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error(dir.string() + ": not a directory");
  }
  std::vector<fs::path> meshes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".stl") meshes.push_back(entry.path());
  }
  std::sort(meshes.begin(), meshes.end());
  if (meshes.empty()) throw std::runtime_error(dir.string() + ": no .stl meshes found");
  std::vector<std::pair<fs::path, fs::path>> pairs;
  for (const auto& mesh_path : meshes) {
    fs::path sidecar = mesh_path.parent_path() /
                       (mesh_path.stem().string() + "_labels.json");
    if (!fs::exists(sidecar)) {
      throw std::runtime_error(mesh_path.string() + ": missing label sidecar " +
                               sidecar.string());
    }
    pairs.emplace_back(mesh_path, sidecar);
  }
  return pairs;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  CommonArgs common;
  int count = 1;
  int cells = 4000;
  int teeth = 14;
  std::string jaw = "maxilla";
  std::vector<int> missing;
};

int cmd_generate(GenerateArgs& a) {
  const RunConfig& cfg = a.common.config;
  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);
  for (int i = 0; i < a.count; ++i) {
    ArchSpec spec;
    spec.n_teeth = a.teeth;
    spec.target_cells = a.cells;
    spec.jaw = a.jaw == "mandible" ? Jaw::kMandible : Jaw::kMaxilla;
    spec.missing_teeth = std::set<int>(a.missing.begin(), a.missing.end());
    spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    const LabeledMesh arch = generate_arch(spec);
    const std::string stem = zero_padded("arch_", i);
    write_mesh(arch.mesh, out_dir / (stem + ".stl"));
    write_labels(arch.labels, out_dir / (stem + "_labels.json"));
    std::cout << stem << ": " << arch.mesh.cell_count() << " cells, "
              << arch.mesh.vertex_count() << " vertices\n";
  }
  return 0;
}

// ----------------------------------------------------------------- augment

struct AugmentArgs {
  CommonArgs common;
  std::string mesh_path;
  std::string labels_path;
};

int cmd_augment(AugmentArgs& a) {
  const RunConfig& cfg = a.common.config;
  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);

  std::vector<std::string> warnings;
  const TriangleMesh mesh = read_mesh(a.mesh_path, MeshFormat::kAuto, &warnings);
  print_warnings(warnings);
  const LabelField labels = read_labels(a.labels_path, mesh.cell_count());

  AugmentationSpec spec = cfg.augment;
  spec.seed = cfg.seed;
  const auto variants = augment(mesh, labels, spec);

  // draw log: JSON lines, one replayable record per variant
  const std::string base = fs::path(a.mesh_path).stem().string();
  std::FILE* log = std::fopen((out_dir / (base + "_draws.jsonl")).c_str(), "w");
  if (!log) throw std::runtime_error("cannot open draw log in " + out_dir.string());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const std::string stem = zero_padded((base + "_aug_").c_str(), static_cast<int>(i));
    write_mesh(variants[i].mesh, out_dir / (stem + ".stl"));
    write_labels(variants[i].labels, out_dir / (stem + "_labels.json"));
    const auto& d = variants[i].draw;
    std::fprintf(log,
                 "{\"variant\":%zu,\"rotation_deg\":[%.17g,%.17g,%.17g],"
                 "\"scale\":%.17g,\"translation\":[%.17g,%.17g,%.17g]}\n",
                 i, d.angles_deg[0], d.angles_deg[1], d.angles_deg[2], d.scale,
                 d.translation[0], d.translation[1], d.translation[2]);
  }
  std::fclose(log);
  std::cout << variants.size() << " variants of " << base << " written to "
            << out_dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  CommonArgs common;
  std::string data_dir;
};

int cmd_train(TrainArgs& a) {
  const RunConfig& cfg = a.common.config;
  const Regime regime = parse_regime(cfg.regime);
  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);

  Hyperparameters hp = cfg.hyperparameters;
  hp.seed = cfg.seed;
  if (!regime.with_aug && hp.batch_size != 2) {
    std::cerr << "note: " << cfg.regime << " uses batch size 2\n";
    hp.batch_size = 2;
  }

  std::vector<TrainingSample> dataset;
  int item_index = 0;
  for (const auto& [mesh_path, sidecar] : labeled_pairs(a.data_dir)) {
    std::vector<std::string> warnings;
    const TriangleMesh mesh = read_mesh(mesh_path, MeshFormat::kAuto, &warnings);
    print_warnings(warnings);
    const LabelField labels = read_labels(sidecar, mesh.cell_count());
    if (regime.with_aug) {
      AugmentationSpec spec = cfg.augment;
      spec.seed = derive_seed(cfg.seed, 0x417u + static_cast<std::uint64_t>(item_index));
      for (const auto& variant : augment(mesh, labels, spec)) {
        dataset.push_back(make_sample(variant.mesh, variant.labels, cfg));
      }
    } else {
      dataset.push_back(make_sample(mesh, labels, cfg));
    }
    ++item_index;
  }
  std::cout << "training on " << dataset.size() << " items (" << item_index
            << " input meshes, regime " << cfg.regime << ")\n";

  TrainInit init = TrainInit::fresh(cfg.widths);
  if (regime.continuous) {
    if (cfg.paths.checkpoint.empty()) {
      throw std::runtime_error("continuous regime needs paths.checkpoint");
    }
    init = TrainInit::from_checkpoint(cfg.paths.checkpoint);
  }
  TrainOptions options;
  options.checkpoint_dir = out_dir;

  const TrainResult result = train(dataset, hp, init, options);
  result.log.write_csv(out_dir / "training_log.csv");

  const EpochStats& last = result.log.epochs.back();
  std::printf("epoch %d: loss %.6f dsc %.4f sen %.4f ppv %.4f\n", last.epoch, last.loss,
              last.dsc, last.sen, last.ppv);
  std::cout << "checkpoint: " << (out_dir / "checkpoint_latest.ckpt").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
  CommonArgs common;
  std::string mesh_path;
};

int cmd_pipeline(PipelineArgs& a) {
  const RunConfig& cfg = a.common.config;
  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);
  if (cfg.paths.checkpoint.empty()) {
    throw std::runtime_error("set paths.checkpoint to a trained model");
  }

  std::vector<std::string> warnings;
  const TriangleMesh mesh = read_mesh(a.mesh_path, MeshFormat::kAuto, &warnings);
  const Checkpoint ckpt = load_checkpoint(cfg.paths.checkpoint);

  const PipelineResult result =
      run_pipeline(mesh, ckpt.params, pipeline_config(cfg), &warnings);
  print_warnings(warnings);

  const std::string stem = fs::path(a.mesh_path).stem().string();
  write_labels(result.labels, out_dir / (stem + "_labels.json"));

  std::FILE* csv = std::fopen((out_dir / (stem + "_timings.csv")).c_str(), "w");
  if (!csv) throw std::runtime_error("cannot open timings file in " + out_dir.string());
  std::fputs("phase,bucket,mean_seconds,repetitions\n", csv);
  const int bucket = mesh.cell_count();
  std::fprintf(csv, "compress,%d,%.9g,1\n", bucket, result.timings.compress);
  std::fprintf(csv, "predict,%d,%.9g,1\n", bucket, result.timings.predict);
  std::fprintf(csv, "postprocess,%d,%.9g,1\n", bucket, result.timings.postprocess);
  std::fprintf(csv, "decompress,%d,%.9g,1\n", bucket, result.timings.decompress);
  std::fclose(csv);

  std::printf("%s: %d cells -> %d (rate %.4f), phases %.3f/%.3f/%.3f/%.3f s\n",
              stem.c_str(), result.decimation.input_cells, result.decimation.output_cells,
              result.decimation.achieved_rate, result.timings.compress,
              result.timings.predict, result.timings.postprocess,
              result.timings.decompress);
  std::cout << "labels: " << (out_dir / (stem + "_labels.json")).string() << "\n";
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  CommonArgs common;
  std::vector<std::string> pred;
  std::vector<std::string> truth;
  std::string map_mode = "micro";
};

int cmd_eval(EvalArgs& a) {
  const RunConfig& cfg = a.common.config;
  if (a.pred.empty() || a.pred.size() != a.truth.size()) {
    throw std::runtime_error("need matching --pred/--truth sidecar lists");
  }
  const ApMode mode = a.map_mode == "macro" ? ApMode::kMacro : ApMode::kMicro;

  std::vector<ConfusionCounts> per_example;
  ConfusionCounts pooled;
  for (std::size_t i = 0; i < a.pred.size(); ++i) {
    const LabelField pred = read_labels(a.pred[i], kAnyCellCount);
    const LabelField truth = read_labels(a.truth[i], static_cast<int>(pred.size()));
    per_example.push_back(confusion(pred, truth));
    for (int t = 0; t < kNumClasses; ++t) {
      for (int p = 0; p < kNumClasses; ++p) {
        pooled.matrix[t][p] += per_example.back().matrix[t][p];
      }
    }
    pooled.total += per_example.back().total;
  }

  std::printf("%-8s %10s %10s %10s\n", "class", "dsc", "sen", "ppv");
  for (int c = 0; c < kNumClasses; ++c) {
    if (!pooled.class_in_truth(c)) continue;
    const ClassMetric d = dsc(pooled, c), s = sen(pooled, c), p = ppv(pooled, c);
    std::printf("%-8d %10.4f %10.4f %10.4f%s\n", c, d.value, s.value, p.value,
                (d.flagged || s.flagged || p.flagged) ? "  (flagged)" : "");
  }
  std::printf("%-8s %10.4f %10.4f %10.4f\n", "macro", macro_dsc(pooled),
              macro_sen(pooled), macro_ppv(pooled));
  std::printf("map (%s): %.4f\n", a.map_mode.c_str(),
              mean_average_precision(per_example, mode));

  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);
  write_metrics_csv(per_example, out_dir / "metrics.csv", mode);
  write_metrics_json(per_example, out_dir / "metrics.json", mode);
  return 0;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  CommonArgs common;
  std::vector<int> buckets = {10000, 20000, 30000, 40000, 50000, 60000, 70000};
  int reps = 3;
};

int cmd_bench(BenchArgs& a) {
  const RunConfig& cfg = a.common.config;
  if (a.reps < 1) throw std::runtime_error("repetitions must be >= 1");
  const fs::path out_dir = cfg.paths.output_dir;
  fs::create_directories(out_dir);

  const ModelParameters params = ModelParameters::init(cfg.widths, cfg.seed);
  const PipelineConfig pc = pipeline_config(cfg);

  std::FILE* csv = std::fopen((out_dir / "timings.csv").c_str(), "w");
  if (!csv) throw std::runtime_error("cannot open timings file in " + out_dir.string());
  std::fputs("phase,bucket,mean_seconds,repetitions\n", csv);

  std::printf("%8s %12s %12s %12s %12s\n", "bucket", "compress", "predict",
              "postprocess", "decompress");
  for (int bucket : a.buckets) {
    ArchSpec spec;
    spec.target_cells = bucket;
    spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(bucket));
    const LabeledMesh arch = generate_arch(spec);

    PhaseTimings mean;
    for (int rep = 0; rep < a.reps; ++rep) {
      const PipelineResult result = run_pipeline(arch.mesh, params, pc);
      mean.compress += result.timings.compress;
      mean.predict += result.timings.predict;
      mean.postprocess += result.timings.postprocess;
      mean.decompress += result.timings.decompress;
    }
    const double inv = 1.0 / a.reps;
    mean.compress *= inv;
    mean.predict *= inv;
    mean.postprocess *= inv;
    mean.decompress *= inv;

    std::fprintf(csv, "compress,%d,%.9g,%d\n", bucket, mean.compress, a.reps);
    std::fprintf(csv, "predict,%d,%.9g,%d\n", bucket, mean.predict, a.reps);
    std::fprintf(csv, "postprocess,%d,%.9g,%d\n", bucket, mean.postprocess, a.reps);
    std::fprintf(csv, "decompress,%d,%.9g,%d\n", bucket, mean.decompress, a.reps);
    std::fflush(csv);
    std::printf("%8d %12.4f %12.4f %12.4f %12.4f\n", bucket, mean.compress,
                mean.predict, mean.postprocess, mean.decompress);
  }
  std::fclose(csv);
  std::cout << "timings: " << (out_dir / "timings.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dental mesh segmentation toolkit"};
  app.require_subcommand(1);

  GenerateArgs generate_args;
  CLI::App* generate = app.add_subcommand("generate", "create labeled synthetic arches");
  register_common(generate, generate_args.common);
  generate->add_option("--count", generate_args.count, "number of arches");
  generate->add_option("--cells", generate_args.cells, "target cell count per arch");
  generate->add_option("--teeth", generate_args.teeth, "teeth slots (1-14)");
  generate->add_option("--jaw", generate_args.jaw)
      ->check(CLI::IsMember({"maxilla", "mandible"}));
  generate->add_option("--missing", generate_args.missing, "missing tooth slots")
      ->delimiter(',');

  AugmentArgs augment_args;
  CLI::App* augment = app.add_subcommand("augment", "write transformed variants");
  register_common(augment, augment_args.common);
  augment->add_option("--mesh", augment_args.mesh_path)->required();
  augment->add_option("--labels", augment_args.labels_path)->required();

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train the segmentation network");
  register_common(train, train_args.common);
  train->add_option("--data", train_args.data_dir, "directory of .stl + _labels.json")
      ->required();

  PipelineArgs pipeline_args;
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "segment a mesh with a trained model");
  register_common(pipeline, pipeline_args.common);
  pipeline->add_option("--mesh", pipeline_args.mesh_path)->required();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score predictions against truth");
  register_common(eval, eval_args.common);
  eval->add_option("--pred", eval_args.pred, "predicted label sidecars")->delimiter(',');
  eval->add_option("--truth", eval_args.truth, "ground-truth sidecars")->delimiter(',');
  eval->add_option("--map-mode", eval_args.map_mode)
      ->check(CLI::IsMember({"micro", "macro"}));

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "per-phase timings across mesh sizes");
  register_common(bench, bench_args.common);
  bench->add_option("--buckets", bench_args.buckets, "mesh sizes to time")
      ->delimiter(',');
  bench->add_option("--reps", bench_args.reps, "repetitions per bucket");

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (chosen == generate) {
      generate_args.common.resolve();
      return cmd_generate(generate_args);
    }
    if (chosen == augment) {
      augment_args.common.resolve();
      return cmd_augment(augment_args);
    }
    if (chosen == train) {
      train_args.common.resolve();
      return cmd_train(train_args);
    }
    if (chosen == pipeline) {
      pipeline_args.common.resolve();
      return cmd_pipeline(pipeline_args);
    }
    if (chosen == eval) {
      eval_args.common.resolve();
      return cmd_eval(eval_args);
    }
    if (chosen == bench) {
      bench_args.common.resolve();
      return cmd_bench(bench_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << name << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}
