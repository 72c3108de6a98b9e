#include "dentseg/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace dentseg {

std::int64_t ConfusionCounts::fp(int c) const {
  std::int64_t sum = 0;
  for (int t = 0; t < kNumClasses; ++t) {
    if (t != c) sum += matrix[t][c];
  }
  return sum;
}

std::int64_t ConfusionCounts::fn(int c) const {
  std::int64_t sum = 0;
  for (int p = 0; p < kNumClasses; ++p) {
    if (p != c) sum += matrix[c][p];
  }
  return sum;
}

ConfusionCounts confusion(const LabelField& pred, const LabelField& truth) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("prediction has " + std::to_string(pred.size()) +
                                " cells, truth has " + std::to_string(truth.size()));
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || pred[i] >= kNumClasses || truth[i] < 0 || truth[i] >= kNumClasses) {
      throw std::invalid_argument("label outside [0,14] at cell " + std::to_string(i));
    }
    counts.matrix[truth[i]][pred[i]]++;
  }
  counts.total = static_cast<std::int64_t>(pred.size());
  return counts;
}

namespace {

ClassMetric ratio(std::int64_t num, std::int64_t den, bool present) {
  if (den == 0) return {0.0, present};  // undefined: report 0, flag if it matters
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

template <typename PerClass>
double macro_over_truth(const ConfusionCounts& counts, PerClass metric) {
  double sum = 0;
  int n = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (!counts.class_in_truth(c)) continue;
    sum += metric(counts, c).value;
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

ClassMetric dsc(const ConfusionCounts& counts, int c) {
  const std::int64_t tp = counts.tp(c);
  return ratio(2 * tp, 2 * tp + counts.fp(c) + counts.fn(c), counts.class_in_truth(c));
}

ClassMetric sen(const ConfusionCounts& counts, int c) {
  return ratio(counts.tp(c), counts.tp(c) + counts.fn(c), counts.class_in_truth(c));
}

ClassMetric ppv(const ConfusionCounts& counts, int c) {
  return ratio(counts.tp(c), counts.tp(c) + counts.fp(c), counts.class_in_truth(c));
}

double macro_dsc(const ConfusionCounts& counts) { return macro_over_truth(counts, dsc); }
double macro_sen(const ConfusionCounts& counts) { return macro_over_truth(counts, sen); }
double macro_ppv(const ConfusionCounts& counts) { return macro_over_truth(counts, ppv); }

double micro_average_precision(const ConfusionCounts& counts) {
  std::int64_t tp = 0, fp = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    tp += counts.tp(c);
    fp += counts.fp(c);
  }
  return tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
}

double macro_average_precision(const ConfusionCounts& counts) {
  return macro_ppv(counts);
}

double mean_average_precision(const std::vector<ConfusionCounts>& per_example,
                              ApMode mode) {
  if (per_example.empty()) {
    throw std::invalid_argument("MAP over an empty example list");
  }
  double sum = 0;
  for (const auto& counts : per_example) {
    sum += mode == ApMode::kMicro ? micro_average_precision(counts)
                                  : macro_average_precision(counts);
  }
  return sum / static_cast<double>(per_example.size());
}

namespace {

ConfusionCounts pooled(const std::vector<ConfusionCounts>& per_example) {
  ConfusionCounts pool;
  for (const auto& counts : per_example) {
    for (int t = 0; t < kNumClasses; ++t) {
      for (int p = 0; p < kNumClasses; ++p) pool.matrix[t][p] += counts.matrix[t][p];
    }
    pool.total += counts.total;
  }
  return pool;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_metrics_csv(const std::vector<ConfusionCounts>& per_example,
                       const std::filesystem::path& path, ApMode mode) {
  const ConfusionCounts pool = pooled(per_example);
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "class,dsc,sen,ppv,support,flagged\n";
  for (int c = 0; c < kNumClasses; ++c) {
    const auto d = dsc(pool, c), s = sen(pool, c), p = ppv(pool, c);
    out << c << ',' << fmt(d.value) << ',' << fmt(s.value) << ',' << fmt(p.value) << ','
        << pool.tp(c) + pool.fn(c) << ',' << (d.flagged || s.flagged || p.flagged ? 1 : 0)
        << '\n';
  }
  out << "macro," << fmt(macro_dsc(pool)) << ',' << fmt(macro_sen(pool)) << ','
      << fmt(macro_ppv(pool)) << ",,\n";
  out << "map," << fmt(mean_average_precision(per_example, mode)) << ",,,,\n";
}

void write_metrics_json(const std::vector<ConfusionCounts>& per_example,
                        const std::filesystem::path& path, ApMode mode) {
  const ConfusionCounts pool = pooled(per_example);
  nlohmann::json doc;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto d = dsc(pool, c), s = sen(pool, c), p = ppv(pool, c);
    doc["per_class"].push_back({{"class", c},
                                {"dsc", d.value},
                                {"sen", s.value},
                                {"ppv", p.value},
                                {"support", pool.tp(c) + pool.fn(c)},
                                {"flagged", d.flagged || s.flagged || p.flagged}});
  }
  doc["macro"] = {{"dsc", macro_dsc(pool)}, {"sen", macro_sen(pool)}, {"ppv", macro_ppv(pool)}};
  doc["map"] = mean_average_precision(per_example, mode);
  doc["examples"] = per_example.size();
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace dentseg
