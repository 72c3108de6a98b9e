// Per-cell class assignment: class 0 is the gingiva, 1..14 are teeth.
#pragma once

#include <vector>

namespace dentseg {

constexpr int kNumClasses = 15;
constexpr int kGingivaClass = 0;
constexpr int kWisdomClass = kNumClasses - 1;

using LabelField = std::vector<int>;

// Ingestion rule: any raw class above 14 folds into the wisdom-tooth class.
inline int clip_label(int raw) { return raw > kWisdomClass ? kWisdomClass : raw; }

}  // namespace dentseg
