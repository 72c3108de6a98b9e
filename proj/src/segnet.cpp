#include "dentseg/segnet.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "dentseg/metrics.hpp"
#include "dentseg/rng.hpp"

namespace dentseg {

namespace {

constexpr double kProbFloor = 1e-12;

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  MatrixXd w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = rng.uniform(-limit, limit);
  }
  return w;
}

// y_i = (x_i + sum_{j in nbr(i)} x_j) / (1 + deg_i), the row-normalized
// adjacency-plus-identity smoothing.
MatrixXd smooth_rows(const MatrixXd& x, const SparseAdjacency& adj) {
  MatrixXd out(x.rows(), x.cols());
  for (int i = 0; i < adj.n; ++i) {
    Eigen::RowVectorXd acc = x.row(i);
    for (int j : adj.neighbors[i]) acc += x.row(j);
    out.row(i) = acc / static_cast<double>(1 + adj.degree(i));
  }
  return out;
}

// Transpose of smooth_rows for backprop; relies on adjacency symmetry.
MatrixXd smooth_rows_transpose(const MatrixXd& g, const SparseAdjacency& adj) {
  MatrixXd scaled(g.rows(), g.cols());
  for (int i = 0; i < adj.n; ++i) {
    scaled.row(i) = g.row(i) / static_cast<double>(1 + adj.degree(i));
  }
  MatrixXd out = scaled;
  for (int i = 0; i < adj.n; ++i) {
    for (int j : adj.neighbors[i]) out.row(i) += scaled.row(j);
  }
  return out;
}

MatrixXd linear_relu(const MatrixXd& x, const MatrixXd& w, const VectorXd& b) {
  return ((x * w.transpose()).rowwise() + b.transpose()).cwiseMax(0.0);
}

struct ForwardTrace {
  MatrixXd enc1, enc2;        // post-ReLU encoder stages
  MatrixXd ctx1, ctx2;        // post-ReLU context stages
  MatrixXd cat_small, cat_large;  // [x, Ax] inputs to the context MLPs
  MatrixXd stage_cat;         // [enc2, ctx1, ctx2]
  MatrixXd proj;              // post-ReLU holistic projection
  std::vector<int> pool_argmax;   // winning cell per holistic column
  MatrixXd fused_in;          // [enc2, ctx1, ctx2, broadcast max]
  MatrixXd fused;             // post-ReLU fusion
  MatrixXd dropped;           // fusion after dropout (== fused in eval mode)
  MatrixXd mask;              // dropout mask (empty in eval mode)
  MatrixXd prob;              // softmax rows
};

void check_shapes(const ModelParameters& p, const CellFeatures& features,
                  const SparseAdjacency& a_small, const SparseAdjacency& a_large) {
  const int n = features.cell_count();
  if (features.matrix.cols() != kFeatureCount) {
    throw std::invalid_argument("encoder: expected " + std::to_string(kFeatureCount) +
                                " feature columns, got " +
                                std::to_string(features.matrix.cols()));
  }
  if (a_small.n != n) {
    throw std::invalid_argument("context-1: adjacency size " + std::to_string(a_small.n) +
                                " does not match cell count " + std::to_string(n));
  }
  if (a_large.n != n) {
    throw std::invalid_argument("context-2: adjacency size " + std::to_string(a_large.n) +
                                " does not match cell count " + std::to_string(n));
  }
  if (p.enc1_w.cols() != kFeatureCount) {
    throw std::invalid_argument("encoder: weights expect " +
                                std::to_string(p.enc1_w.cols()) + " inputs");
  }
}

ForwardTrace run_forward(const ModelParameters& p, const CellFeatures& features,
                         const SparseAdjacency& a_small, const SparseAdjacency& a_large,
                         const ForwardOptions& opt) {
  check_shapes(p, features, a_small, a_large);
  const int n = features.cell_count();

  ForwardTrace t;
  t.enc1 = linear_relu(features.matrix, p.enc1_w, p.enc1_b);
  t.enc2 = linear_relu(t.enc1, p.enc2_w, p.enc2_b);

  const MatrixXd smoothed_s = smooth_rows(t.enc2, a_small);
  t.cat_small.resize(n, t.enc2.cols() + smoothed_s.cols());
  t.cat_small << t.enc2, smoothed_s;
  t.ctx1 = linear_relu(t.cat_small, p.ctx1_w, p.ctx1_b);

  const MatrixXd smoothed_l = smooth_rows(t.ctx1, a_large);
  t.cat_large.resize(n, t.ctx1.cols() + smoothed_l.cols());
  t.cat_large << t.ctx1, smoothed_l;
  t.ctx2 = linear_relu(t.cat_large, p.ctx2_w, p.ctx2_b);

  t.stage_cat.resize(n, t.enc2.cols() + t.ctx1.cols() + t.ctx2.cols());
  t.stage_cat << t.enc2, t.ctx1, t.ctx2;
  t.proj = linear_relu(t.stage_cat, p.proj_w, p.proj_b);

  // translation-invariant holistic feature: column-wise max over cells,
  // first-row wins on ties so backprop routing is deterministic
  const int holistic = static_cast<int>(t.proj.cols());
  Eigen::RowVectorXd pooled(holistic);
  t.pool_argmax.assign(holistic, 0);
  for (int c = 0; c < holistic; ++c) {
    double best = t.proj(0, c);
    int best_row = 0;
    for (int r = 1; r < n; ++r) {
      if (t.proj(r, c) > best) {
        best = t.proj(r, c);
        best_row = r;
      }
    }
    pooled(c) = best;
    t.pool_argmax[c] = best_row;
  }

  t.fused_in.resize(n, t.stage_cat.cols() + holistic);
  t.fused_in << t.stage_cat, pooled.replicate(n, 1);
  t.fused = linear_relu(t.fused_in, p.fusion_w, p.fusion_b);

  if (opt.training && opt.dropout_rate > 0) {
    SplitMix64 rng(derive_seed(opt.dropout_seed, 0xd70));
    const double keep = 1.0 - opt.dropout_rate;
    t.mask.resize(t.fused.rows(), t.fused.cols());
    for (Eigen::Index r = 0; r < t.mask.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.mask.cols(); ++c) {
        t.mask(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
      }
    }
    t.dropped = t.fused.cwiseProduct(t.mask);
  } else {
    t.dropped = t.fused;
  }

  MatrixXd logits = (t.dropped * p.cls_w.transpose()).rowwise() + p.cls_b.transpose();
  t.prob.resize(n, kNumClasses);
  for (int r = 0; r < n; ++r) {
    const double rmax = logits.row(r).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(r).array() - rmax).exp();
    t.prob.row(r) = e / e.sum();
  }
  return t;
}

}  // namespace

ModelParameters ModelParameters::init(const NetworkWidths& widths, std::uint64_t seed) {
  ModelParameters p;
  p.widths = widths;
  const int stage_cat = widths.encoder + widths.context1 + widths.context2;
  int idx = 0;
  auto make = [&](MatrixXd& w, VectorXd& b, int out, int in) {
    SplitMix64 rng(derive_seed(seed, 0x9100 + idx++));
    w = glorot(out, in, rng);
    b = VectorXd::Constant(out, 0.01);
  };
  make(p.enc1_w, p.enc1_b, widths.encoder, kFeatureCount);
  make(p.enc2_w, p.enc2_b, widths.encoder, widths.encoder);
  make(p.ctx1_w, p.ctx1_b, widths.context1, 2 * widths.encoder);
  make(p.ctx2_w, p.ctx2_b, widths.context2, 2 * widths.context1);
  make(p.proj_w, p.proj_b, widths.holistic, stage_cat);
  make(p.fusion_w, p.fusion_b, widths.fusion, stage_cat + widths.holistic);
  make(p.cls_w, p.cls_b, kNumClasses, widths.fusion);
  return p;
}

std::vector<ModelParameters::TensorRef> ModelParameters::tensors() {
  return {
      {"enc1_w", enc1_w.data(), enc1_w.rows(), enc1_w.cols()},
      {"enc1_b", enc1_b.data(), enc1_b.size(), 1},
      {"enc2_w", enc2_w.data(), enc2_w.rows(), enc2_w.cols()},
      {"enc2_b", enc2_b.data(), enc2_b.size(), 1},
      {"ctx1_w", ctx1_w.data(), ctx1_w.rows(), ctx1_w.cols()},
      {"ctx1_b", ctx1_b.data(), ctx1_b.size(), 1},
      {"ctx2_w", ctx2_w.data(), ctx2_w.rows(), ctx2_w.cols()},
      {"ctx2_b", ctx2_b.data(), ctx2_b.size(), 1},
      {"proj_w", proj_w.data(), proj_w.rows(), proj_w.cols()},
      {"proj_b", proj_b.data(), proj_b.size(), 1},
      {"fusion_w", fusion_w.data(), fusion_w.rows(), fusion_w.cols()},
      {"fusion_b", fusion_b.data(), fusion_b.size(), 1},
      {"cls_w", cls_w.data(), cls_w.rows(), cls_w.cols()},
      {"cls_b", cls_b.data(), cls_b.size(), 1},
  };
}

std::vector<ModelParameters::TensorRef> ModelParameters::tensors() const {
  return const_cast<ModelParameters*>(this)->tensors();
}

ProbabilityField forward(const ModelParameters& params, const CellFeatures& features,
                         const SparseAdjacency& a_small, const SparseAdjacency& a_large,
                         const ForwardOptions& options) {
  ForwardTrace t = run_forward(params, features, a_small, a_large, options);
  return {std::move(t.prob)};
}

double cce_loss(const ProbabilityField& pred, const LabelField& truth) {
  const int n = pred.cell_count();
  if (static_cast<int>(truth.size()) != n) {
    throw std::invalid_argument("loss: prediction has " + std::to_string(n) +
                                " cells, truth has " + std::to_string(truth.size()));
  }
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    sum -= std::log(std::max(pred.matrix(i, truth[i]), kProbFloor));
  }
  return sum / n;
}

Gradients backward(const ModelParameters& p, const CellFeatures& features,
                   const SparseAdjacency& a_small, const SparseAdjacency& a_large,
                   const LabelField& truth, const ForwardOptions& options) {
  const int n = features.cell_count();
  if (static_cast<int>(truth.size()) != n) {
    throw std::invalid_argument("backward: truth has " + std::to_string(truth.size()) +
                                " labels for " + std::to_string(n) + " cells");
  }
  ForwardTrace t = run_forward(p, features, a_small, a_large, options);

  Gradients g;
  g.loss = cce_loss({t.prob}, truth);

  // softmax + CCE: dZ = (prob - onehot)/N, zeroed where the floor clamps
  MatrixXd d_logits = t.prob;
  for (int i = 0; i < n; ++i) {
    if (t.prob(i, truth[i]) < kProbFloor) {
      d_logits.row(i).setZero();
      continue;
    }
    d_logits(i, truth[i]) -= 1.0;
  }
  d_logits /= static_cast<double>(n);

  MatrixXd cls_w_g = d_logits.transpose() * t.dropped;
  VectorXd cls_b_g = d_logits.colwise().sum();

  MatrixXd d_fused = d_logits * p.cls_w;
  if (t.mask.size() > 0) d_fused = d_fused.cwiseProduct(t.mask);
  d_fused = d_fused.cwiseProduct((t.fused.array() > 0).cast<double>().matrix());

  MatrixXd fusion_w_g = d_fused.transpose() * t.fused_in;
  VectorXd fusion_b_g = d_fused.colwise().sum();
  MatrixXd d_fused_in = d_fused * p.fusion_w;

  const int enc_w = p.widths.encoder, c1_w = p.widths.context1, c2_w = p.widths.context2;
  const int stage_cols = enc_w + c1_w + c2_w;
  const int hol_w = p.widths.holistic;

  MatrixXd d_stage = d_fused_in.leftCols(stage_cols);
  // broadcast max-pool: column gradients collapse onto the winning cells
  MatrixXd d_proj = MatrixXd::Zero(n, hol_w);
  for (int c = 0; c < hol_w; ++c) {
    d_proj(t.pool_argmax[c], c) = d_fused_in.col(stage_cols + c).sum();
  }
  d_proj = d_proj.cwiseProduct((t.proj.array() > 0).cast<double>().matrix());

  MatrixXd proj_w_g = d_proj.transpose() * t.stage_cat;
  VectorXd proj_b_g = d_proj.colwise().sum();
  d_stage += d_proj * p.proj_w;

  MatrixXd d_enc2 = d_stage.leftCols(enc_w);
  MatrixXd d_ctx1 = d_stage.middleCols(enc_w, c1_w);
  MatrixXd d_ctx2 = d_stage.rightCols(c2_w);

  d_ctx2 = d_ctx2.cwiseProduct((t.ctx2.array() > 0).cast<double>().matrix());
  MatrixXd ctx2_w_g = d_ctx2.transpose() * t.cat_large;
  VectorXd ctx2_b_g = d_ctx2.colwise().sum();
  MatrixXd d_cat_large = d_ctx2 * p.ctx2_w;
  d_ctx1 += d_cat_large.leftCols(c1_w);
  d_ctx1 += smooth_rows_transpose(d_cat_large.rightCols(c1_w), a_large);

  d_ctx1 = d_ctx1.cwiseProduct((t.ctx1.array() > 0).cast<double>().matrix());
  MatrixXd ctx1_w_g = d_ctx1.transpose() * t.cat_small;
  VectorXd ctx1_b_g = d_ctx1.colwise().sum();
  MatrixXd d_cat_small = d_ctx1 * p.ctx1_w;
  d_enc2 += d_cat_small.leftCols(enc_w);
  d_enc2 += smooth_rows_transpose(d_cat_small.rightCols(enc_w), a_small);

  d_enc2 = d_enc2.cwiseProduct((t.enc2.array() > 0).cast<double>().matrix());
  MatrixXd enc2_w_g = d_enc2.transpose() * t.enc1;
  VectorXd enc2_b_g = d_enc2.colwise().sum();
  MatrixXd d_enc1 = d_enc2 * p.enc2_w;

  d_enc1 = d_enc1.cwiseProduct((t.enc1.array() > 0).cast<double>().matrix());
  MatrixXd enc1_w_g = d_enc1.transpose() * features.matrix;
  VectorXd enc1_b_g = d_enc1.colwise().sum();

  g.tensors.reserve(14);
  g.tensors.push_back(std::move(enc1_w_g));
  g.tensors.push_back(enc1_b_g);
  g.tensors.push_back(std::move(enc2_w_g));
  g.tensors.push_back(enc2_b_g);
  g.tensors.push_back(std::move(ctx1_w_g));
  g.tensors.push_back(ctx1_b_g);
  g.tensors.push_back(std::move(ctx2_w_g));
  g.tensors.push_back(ctx2_b_g);
  g.tensors.push_back(std::move(proj_w_g));
  g.tensors.push_back(proj_b_g);
  g.tensors.push_back(std::move(fusion_w_g));
  g.tensors.push_back(fusion_b_g);
  g.tensors.push_back(std::move(cls_w_g));
  g.tensors.push_back(cls_b_g);
  return g;
}

AdamState AdamState::zeros_like(const ModelParameters& params) {
  AdamState state;
  for (const auto& t : params.tensors()) {
    state.m.push_back(VectorXd::Zero(t.size()));
    state.v.push_back(VectorXd::Zero(t.size()));
  }
  return state;
}

void adam_step(ModelParameters& params, AdamState& state, const Gradients& grads,
               const Hyperparameters& hp) {
  auto refs = params.tensors();
  if (grads.tensors.size() != refs.size()) {
    throw std::invalid_argument("gradient tensor count mismatch");
  }
  for (std::size_t t = 0; t < refs.size(); ++t) {
    if (grads.tensors[t].size() != refs[t].size()) {
      throw std::invalid_argument(std::string("gradient size mismatch for ") +
                                  refs[t].name);
    }
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < refs.size(); ++t) {
    Eigen::Map<VectorXd> theta(refs[t].data, refs[t].size());
    Eigen::Map<const VectorXd> grad(grads.tensors[t].data(), grads.tensors[t].size());
    VectorXd g = grad;
    if (hp.weight_decay != 0) g += hp.weight_decay * theta;
    state.m[t] = hp.beta1 * state.m[t] + (1.0 - hp.beta1) * g;
    state.v[t] = hp.beta2 * state.v[t] + (1.0 - hp.beta2) * g.cwiseProduct(g);
    const VectorXd m_hat = state.m[t] / bc1;
    const VectorXd v_hat = state.v[t] / bc2;
    theta -= hp.learning_rate *
             (m_hat.array() / (v_hat.array().sqrt() + hp.eps)).matrix();
  }
}

void TrainingLog::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "epoch,loss,dsc,sen,ppv\n";
  char buf[160];
  for (const auto& e : epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", e.epoch, e.loss,
                  e.dsc, e.sen, e.ppv);
    out << buf;
  }
}

namespace {

constexpr char kCheckpointMagic[8] = {'D', 'S', 'E', 'G', 'C', 'K', 'P', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const auto refs = ckpt.params.tensors();
  put<std::int32_t>(out, static_cast<std::int32_t>(refs.size()));
  for (int w : {ckpt.params.widths.encoder, ckpt.params.widths.context1,
                ckpt.params.widths.context2, ckpt.params.widths.holistic,
                ckpt.params.widths.fusion}) {
    put<std::int32_t>(out, w);
  }
  put<std::int32_t>(out, ckpt.epoch);
  put<std::int64_t>(out, ckpt.optimizer.step);
  put<std::uint64_t>(out, ckpt.rng_state);
  for (std::size_t t = 0; t < refs.size(); ++t) {
    put<std::int32_t>(out, static_cast<std::int32_t>(refs[t].rows));
    put<std::int32_t>(out, static_cast<std::int32_t>(refs[t].cols));
    // row-major float32 payload
    Eigen::Map<const MatrixXd> m(refs[t].data, refs[t].rows, refs[t].cols);
    for (Eigen::Index r = 0; r < refs[t].rows; ++r) {
      for (Eigen::Index c = 0; c < refs[t].cols; ++c) {
        put<float>(out, static_cast<float>(m(r, c)));
      }
    }
    for (Eigen::Index i = 0; i < refs[t].size(); ++i) {
      put<float>(out, static_cast<float>(ckpt.optimizer.m[t](i)));
    }
    for (Eigen::Index i = 0; i < refs[t].size(); ++i) {
      put<float>(out, static_cast<float>(ckpt.optimizer.v[t](i)));
    }
  }
  if (!out) throw std::runtime_error(path.string() + ": checkpoint write failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path.string() + ": not a checkpoint file");
  }
  const int n_tensors = get<std::int32_t>(in);
  NetworkWidths widths;
  widths.encoder = get<std::int32_t>(in);
  widths.context1 = get<std::int32_t>(in);
  widths.context2 = get<std::int32_t>(in);
  widths.holistic = get<std::int32_t>(in);
  widths.fusion = get<std::int32_t>(in);

  Checkpoint ckpt;
  ckpt.params = ModelParameters::init(widths, 0);
  ckpt.optimizer = AdamState::zeros_like(ckpt.params);
  ckpt.epoch = get<std::int32_t>(in);
  ckpt.optimizer.step = get<std::int64_t>(in);
  ckpt.rng_state = get<std::uint64_t>(in);

  auto refs = ckpt.params.tensors();
  if (n_tensors != static_cast<int>(refs.size())) {
    throw std::runtime_error(path.string() + ": unexpected tensor count");
  }
  for (std::size_t t = 0; t < refs.size(); ++t) {
    const int rows = get<std::int32_t>(in);
    const int cols = get<std::int32_t>(in);
    if (rows != refs[t].rows || cols != refs[t].cols) {
      throw std::runtime_error(path.string() + ": tensor shape mismatch for " +
                               refs[t].name);
    }
    Eigen::Map<MatrixXd> m(refs[t].data, refs[t].rows, refs[t].cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = get<float>(in);
    }
    for (Eigen::Index i = 0; i < refs[t].size(); ++i) {
      ckpt.optimizer.m[t](i) = get<float>(in);
    }
    for (Eigen::Index i = 0; i < refs[t].size(); ++i) {
      ckpt.optimizer.v[t](i) = get<float>(in);
    }
  }
  if (!in) throw std::runtime_error(path.string() + ": checkpoint truncated");
  return ckpt;
}

TrainResult train(const std::vector<TrainingSample>& dataset, const Hyperparameters& hp,
                  const TrainInit& init, const TrainOptions& options) {
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  if (hp.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (hp.epochs < 1) throw std::invalid_argument("epochs must be >= 1");

  TrainResult result;
  SplitMix64 rng(derive_seed(hp.seed, 0x7a41));
  if (init.checkpoint_path) {
    Checkpoint ckpt = load_checkpoint(*init.checkpoint_path);
    result.params = std::move(ckpt.params);
    result.optimizer = std::move(ckpt.optimizer);
    rng.set_state(ckpt.rng_state);  // continuous training resumes the stream
  } else {
    result.params = ModelParameters::init(init.widths, hp.seed);
    result.optimizer = AdamState::zeros_like(result.params);
  }

  std::vector<int> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    shuffle(order, rng);
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + hp.batch_size);
      Gradients batch;
      for (std::size_t s = start; s < end; ++s) {
        const TrainingSample& sample = dataset[order[s]];
        ForwardOptions opts{true, hp.dropout_rate, rng.next()};
        Gradients g = backward(result.params, sample.features, sample.a_small,
                               sample.a_large, sample.labels, opts);
        if (!std::isfinite(g.loss)) {
          throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch) +
                                   " batch " + std::to_string(batch_index));
        }
        if (batch.tensors.empty()) {
          batch = std::move(g);
        } else {
          for (std::size_t t = 0; t < batch.tensors.size(); ++t) {
            batch.tensors[t] += g.tensors[t];
          }
          batch.loss += g.loss;
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& t : batch.tensors) t *= inv;
      batch.loss *= inv;
      adam_step(result.params, result.optimizer, batch, hp);
    }

    // epoch metrics on the training set, dropout off
    EpochStats stats;
    stats.epoch = epoch;
    for (const TrainingSample& sample : dataset) {
      const ProbabilityField prob =
          forward(result.params, sample.features, sample.a_small, sample.a_large);
      stats.loss += cce_loss(prob, sample.labels);
      LabelField pred(prob.cell_count());
      for (int i = 0; i < prob.cell_count(); ++i) {
        int best = 0;
        for (int c = 1; c < kNumClasses; ++c) {
          if (prob.matrix(i, c) > prob.matrix(i, best)) best = c;
        }
        pred[i] = best;
      }
      const ConfusionCounts counts = confusion(pred, sample.labels);
      stats.dsc += macro_dsc(counts);
      stats.sen += macro_sen(counts);
      stats.ppv += macro_ppv(counts);
    }
    const double inv = 1.0 / static_cast<double>(dataset.size());
    stats.loss *= inv;
    stats.dsc *= inv;
    stats.sen *= inv;
    stats.ppv *= inv;
    result.log.epochs.push_back(stats);

    if (options.checkpoint_dir) {
      Checkpoint ckpt{result.params, result.optimizer, rng.state(), epoch};
      save_checkpoint(ckpt, *options.checkpoint_dir / "checkpoint_latest.ckpt");
    }
  }
  result.rng_state = rng.state();
  return result;
}

}  // namespace dentseg
