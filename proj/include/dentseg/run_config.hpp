// One serializable source of truth for CLI runs: a JSON document mirroring
// RunConfig, every leaf addressable (and overridable) by its dotted name,
// e.g. "refiner.lambda" or "augment.rotation_deg.lo".
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dentseg/augmentor.hpp"
#include "dentseg/refiner.hpp"
#include "dentseg/segnet.hpp"
#include "dentseg/upsampler.hpp"

namespace dentseg {

// The four learning patterns: fresh vs checkpoint-resumed initialization,
// crossed with augmented vs raw training data.
struct Regime {
  bool continuous = false;
  bool with_aug = true;
};

bool is_valid_regime(const std::string& name);
Regime parse_regime(const std::string& name);
const std::vector<std::string>& regime_names();

struct RunConfig {
  struct Paths {
    std::string checkpoint;        // model checkpoint to load or resume from
    std::string output_dir = "out";
  } paths;

  double rate = 0.10;

  struct Radii {
    double small_factor = kDefaultSmallRadiusFactor;
    double large_factor = kDefaultLargeRadiusFactor;
  } radii;

  RefinerConfig refiner;
  TransferSpec transfer;
  Hyperparameters hyperparameters;
  NetworkWidths widths;
  AugmentationSpec augment;
  std::string regime = "isolated_with_aug";
  std::uint64_t seed = 0;
};

// Leaf registry shared by the JSON codec, the override parser, and the CLI
// flag generator.
struct ConfigField {
  std::string name;  // dotted path
  enum class Kind { kDouble, kInt, kUint64, kString } kind;
  void* target;
};

std::vector<ConfigField> config_fields(RunConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& config, const std::filesystem::path& path);

// assignment has the form "dotted.name=value"
void apply_override(RunConfig& config, const std::string& assignment);

}  // namespace dentseg
