// End-to-end segmentation of a full-resolution mesh: decimate (compress),
// featurize + network forward (predict), graph-cut refine (postprocess), and
// KNN label transfer back to the original mesh (decompress). Each phase is
// timed around the in-memory call, and stage failures are rethrown with the
// phase name prefixed.
#pragma once

#include <string>
#include <vector>

#include "dentseg/decimator.hpp"
#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"
#include "dentseg/refiner.hpp"
#include "dentseg/segnet.hpp"
#include "dentseg/upsampler.hpp"

namespace dentseg {

struct PipelineConfig {
  double rate = 0.10;
  double small_radius_factor = kDefaultSmallRadiusFactor;
  double large_radius_factor = kDefaultLargeRadiusFactor;
  RefinerConfig refiner;
  TransferSpec transfer;
};

struct PhaseTimings {
  double compress = 0;    // seconds
  double predict = 0;
  double postprocess = 0;
  double decompress = 0;
};

struct PipelineResult {
  LabelField labels;         // on the input (full-resolution) mesh
  LabelField coarse_labels;  // refined labels on the decimated mesh
  DecimationReport decimation;
  PhaseTimings timings;
};

PipelineResult run_pipeline(const TriangleMesh& mesh, const ModelParameters& params,
                            const PipelineConfig& config,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace dentseg
