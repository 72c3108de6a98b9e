// Label decompression: transfer labels from a decimated mesh back to the
// full-resolution mesh by k-nearest-neighbor vote over cell barycenters.
#pragma once

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"

namespace dentseg {

struct TransferSpec {
  int k = 3;
  int cell_ceiling = 100000;
};

// Majority vote over the k nearest coarse barycenters; vote ties go to the
// tied class with the single nearest member. Distance ties inside the k-set
// break toward the lower cell index.
LabelField knn_transfer(const CellGeometry& coarse_geom, const LabelField& coarse_labels,
                        const CellGeometry& fine_geom, const TransferSpec& spec = {});

}  // namespace dentseg
