// Evaluation measures for 15-class per-cell segmentation: the contingency
// matrix, one-vs-rest DSC/SEN/PPV with macro averages over classes present
// in the truth, and per-example average precision aggregated into MAP.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dentseg/labels.hpp"

namespace dentseg {

struct ConfusionCounts {
  // matrix(t, p): cells with truth t predicted p
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> matrix{};
  std::int64_t total = 0;

  std::int64_t tp(int c) const { return matrix[c][c]; }
  std::int64_t fp(int c) const;
  std::int64_t fn(int c) const;
  std::int64_t tn(int c) const { return total - tp(c) - fp(c) - fn(c); }
  bool class_in_truth(int c) const { return tp(c) + fn(c) > 0; }
};

ConfusionCounts confusion(const LabelField& pred, const LabelField& truth);

// A per-class metric value; `flagged` marks a zero that stands in for an
// undefined ratio (zero denominator for a class present in truth).
struct ClassMetric {
  double value = 0;
  bool flagged = false;
};

ClassMetric dsc(const ConfusionCounts& counts, int c);  // 2TP/(2TP+FP+FN)
ClassMetric sen(const ConfusionCounts& counts, int c);  // TP/(TP+FN)
ClassMetric ppv(const ConfusionCounts& counts, int c);  // TP/(TP+FP)

// Unweighted mean over classes with TP+FN > 0.
double macro_dsc(const ConfusionCounts& counts);
double macro_sen(const ConfusionCounts& counts);
double macro_ppv(const ConfusionCounts& counts);

// Per-example average precision, micro over classes: sum TP / (sum TP + sum
// FP). For exhaustive per-cell labeling this equals per-example cell accuracy.
double micro_average_precision(const ConfusionCounts& counts);
// Macro alternative: mean one-vs-rest precision over classes present in truth.
double macro_average_precision(const ConfusionCounts& counts);

enum class ApMode { kMicro, kMacro };

// MAP = mean over examples of the per-example AP.
double mean_average_precision(const std::vector<ConfusionCounts>& per_example,
                              ApMode mode = ApMode::kMicro);

// Per-class rows, a macro row and the corpus MAP, as CSV and JSON.
void write_metrics_csv(const std::vector<ConfusionCounts>& per_example,
                       const std::filesystem::path& path, ApMode mode = ApMode::kMicro);
void write_metrics_json(const std::vector<ConfusionCounts>& per_example,
                        const std::filesystem::path& path, ApMode mode = ApMode::kMicro);

}  // namespace dentseg
