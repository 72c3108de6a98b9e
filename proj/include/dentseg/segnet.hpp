// Graph-constrained multi-scale segmentation network.
//
// Per-cell encoder MLP, two context modules that mix each cell with its
// adjacency neighborhood (small radius first, large radius second), a
// max-pooled holistic feature broadcast back to every cell, dense fusion of
// all stages, and a 15-class softmax classifier. Smoothing uses the
// row-normalized adjacency-plus-identity operator, so every stage is
// permutation-equivariant. Training is categorical cross-entropy under Adam;
// backward() is hand-derived reverse mode and is checked against central
// finite differences in the test suite.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dentseg/featurizer.hpp"
#include "dentseg/labels.hpp"

namespace dentseg {

struct NetworkWidths {
  int encoder = 64;
  int context1 = 128;
  int context2 = 128;
  int holistic = 256;
  int fusion = 256;

  bool operator==(const NetworkWidths&) const = default;
};

// Layer tensors, weight matrices stored out x in.
struct ModelParameters {
  NetworkWidths widths;
  Eigen::MatrixXd enc1_w, enc2_w, ctx1_w, ctx2_w, proj_w, fusion_w, cls_w;
  Eigen::VectorXd enc1_b, enc2_b, ctx1_b, ctx2_b, proj_b, fusion_b, cls_b;

  static ModelParameters init(const NetworkWidths& widths, std::uint64_t seed);

  // Fixed enumeration used by the optimizer and the checkpoint codec.
  struct TensorRef {
    const char* name;
    double* data;
    Eigen::Index rows, cols;
    Eigen::Index size() const { return rows * cols; }
  };
  std::vector<TensorRef> tensors();
  std::vector<TensorRef> tensors() const;
};

struct ProbabilityField {
  Eigen::MatrixXd matrix;  // N x 15, rows sum to 1

  int cell_count() const { return static_cast<int>(matrix.rows()); }
};

struct ForwardOptions {
  bool training = false;
  double dropout_rate = 0.5;
  std::uint64_t dropout_seed = 0;
};

ProbabilityField forward(const ModelParameters& params, const CellFeatures& features,
                         const SparseAdjacency& a_small, const SparseAdjacency& a_large,
                         const ForwardOptions& options = {});

// Mean over cells of -log(max(p[truth], 1e-12)).
double cce_loss(const ProbabilityField& pred, const LabelField& truth);

struct Gradients {
  std::vector<Eigen::MatrixXd> tensors;  // aligned with ModelParameters::tensors()
  double loss = 0;
};

Gradients backward(const ModelParameters& params, const CellFeatures& features,
                   const SparseAdjacency& a_small, const SparseAdjacency& a_large,
                   const LabelField& truth, const ForwardOptions& options = {});

struct Hyperparameters {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  int batch_size = 10;   // 2 is the no-augmentation fallback
  int epochs = 200;
  double dropout_rate = 0.5;
  std::uint64_t seed = 0;
};

struct AdamState {
  std::vector<Eigen::VectorXd> m, v;  // flat, aligned with tensors()
  std::int64_t step = 0;

  static AdamState zeros_like(const ModelParameters& params);
};

void adam_step(ModelParameters& params, AdamState& state, const Gradients& grads,
               const Hyperparameters& hp);

struct TrainingSample {
  CellFeatures features;
  SparseAdjacency a_small, a_large;
  LabelField labels;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0, dsc = 0, sen = 0, ppv = 0;
};

struct TrainingLog {
  std::vector<EpochStats> epochs;
  void write_csv(const std::filesystem::path& path) const;
};

struct Checkpoint {
  ModelParameters params;
  AdamState optimizer;
  std::uint64_t rng_state = 0;
  int epoch = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

struct TrainInit {
  // Fresh initialization at `widths`, or resume parameters, optimizer moments
  // and RNG stream from a checkpoint.
  static TrainInit fresh(const NetworkWidths& widths) { return {widths, {}}; }
  static TrainInit from_checkpoint(const std::filesystem::path& path) {
    return {{}, path};
  }

  NetworkWidths widths;
  std::optional<std::filesystem::path> checkpoint_path;
};

struct TrainOptions {
  // When set, a checkpoint is written here after every epoch.
  std::optional<std::filesystem::path> checkpoint_dir;
};

struct TrainResult {
  ModelParameters params;
  TrainingLog log;
  AdamState optimizer;
  std::uint64_t rng_state = 0;
};

TrainResult train(const std::vector<TrainingSample>& dataset, const Hyperparameters& hp,
                  const TrainInit& init, const TrainOptions& options = {});

}  // namespace dentseg
