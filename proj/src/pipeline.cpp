#include "dentseg/pipeline.hpp"

#include <chrono>
#include <stdexcept>
#include <utility>

#include "dentseg/featurizer.hpp"

namespace dentseg {

namespace {

class StageTimer {
 public:
  explicit StageTimer(double& out)
      : out_(out), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    out_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
               .count();
  }

 private:
  double& out_;
  std::chrono::steady_clock::time_point start_;
};

[[noreturn]] void rethrow_tagged(const char* stage) {
  try {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const TriangleMesh& mesh, const ModelParameters& params,
                            const PipelineConfig& config,
                            std::vector<std::string>* warnings) {
  PipelineResult result;

  DecimationResult dec;
  try {
    StageTimer timer(result.timings.compress);
    dec = decimate(mesh, config.rate, warnings);
  } catch (...) {
    rethrow_tagged("compress");
  }
  result.decimation = dec.report;

  CellGeometry coarse_geom;
  ProbabilityField prob;
  try {
    StageTimer timer(result.timings.predict);
    coarse_geom = compute_cell_geometry(dec.mesh);
    const CellFeatures features = build_features(dec.mesh, coarse_geom);
    const double diagonal = coarse_geom.bbox_diagonal();
    const auto [a_small, a_large] =
        build_adjacency(coarse_geom, config.small_radius_factor * diagonal,
                        config.large_radius_factor * diagonal);
    prob = forward(params, features, a_small, a_large);
  } catch (...) {
    rethrow_tagged("predict");
  }

  try {
    StageTimer timer(result.timings.postprocess);
    result.coarse_labels = refine(prob, dec.mesh, coarse_geom, config.refiner);
  } catch (...) {
    rethrow_tagged("postprocess");
  }

  try {
    StageTimer timer(result.timings.decompress);
    if (dec.mesh.cell_count() == mesh.cell_count()) {
      // nothing was decimated, so the coarse labels already live on the
      // input mesh
      result.labels = result.coarse_labels;
    } else {
      const CellGeometry fine_geom = compute_cell_geometry(mesh);
      result.labels =
          knn_transfer(coarse_geom, result.coarse_labels, fine_geom, config.transfer);
    }
  } catch (...) {
    rethrow_tagged("decompress");
  }
  return result;
}

}  // namespace dentseg
