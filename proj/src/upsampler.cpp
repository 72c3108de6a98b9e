#include "dentseg/upsampler.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "dentseg/spatial.hpp"

namespace dentseg {

LabelField knn_transfer(const CellGeometry& coarse_geom, const LabelField& coarse_labels,
                        const CellGeometry& fine_geom, const TransferSpec& spec) {
  const int n_coarse = static_cast<int>(coarse_geom.centroids.size());
  const int n_fine = static_cast<int>(fine_geom.centroids.size());
  if (static_cast<int>(coarse_labels.size()) != n_coarse) {
    throw std::invalid_argument("knn_transfer: " + std::to_string(coarse_labels.size()) +
                                " labels for " + std::to_string(n_coarse) +
                                " coarse cells");
  }
  if (spec.k < 1) throw std::invalid_argument("knn_transfer: k must be >= 1");
  if (spec.cell_ceiling < 1) {
    throw std::invalid_argument("knn_transfer: cell ceiling must be >= 1");
  }
  if (spec.k > n_coarse) {
    throw std::invalid_argument("knn_transfer: k=" + std::to_string(spec.k) +
                                " exceeds coarse cell count " + std::to_string(n_coarse));
  }
  if (n_fine > spec.cell_ceiling) {
    throw std::invalid_argument(
        "knn_transfer: fine mesh has " + std::to_string(n_fine) +
        " cells, above the ceiling of " + std::to_string(spec.cell_ceiling) +
        "; decimate the target mesh first");
  }

  for (int i = 0; i < n_coarse; ++i) {
    if (coarse_labels[i] < 0 || coarse_labels[i] >= kNumClasses) {
      throw std::invalid_argument("knn_transfer: label out of range at cell " +
                                  std::to_string(i));
    }
  }

  KdTree3 tree(coarse_geom.centroids);
  LabelField out(n_fine);
  for (int f = 0; f < n_fine; ++f) {
    const auto nearest = tree.nearest(fine_geom.centroids[f], spec.k);

    std::array<int, kNumClasses> votes{};
    for (const auto& [d2, idx] : nearest) votes[coarse_labels[idx]] += 1;
    int top = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (votes[c] > votes[top]) top = c;
    }
    // vote tie: the tied class owning the nearest neighbor wins; `nearest` is
    // sorted by (distance, index), so the first hit settles it
    int label = top;
    for (const auto& [d2, idx] : nearest) {
      if (votes[coarse_labels[idx]] == votes[top]) {
        label = coarse_labels[idx];
        break;
      }
    }
    out[f] = label;
  }
  return out;
}

}  // namespace dentseg
