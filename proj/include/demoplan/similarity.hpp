#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "demoplan/demo.hpp"
#include "demoplan/se3.hpp"
#include "demoplan/task.hpp"

namespace demoplan {

struct SimilarityConfig {
  double delta_alpha{0.5};              // rotation-closeness tolerance
  double delta_beta{-0.9};              // translation-direction threshold
  double zero_translation_epsilon{1e-6};  // meters
};

/// Order-preserving assignment of task deltas to demo deltas; demo indices
/// are strictly increasing, one pair per task delta.
struct Allocation {
  std::vector<std::pair<int, int>> pairs;  // (task delta j, demo delta l)
};

/// Rotation closeness: quaternion distance of the rotation parts, [0, sqrt 2].
double alpha(const Deltad& d1, const Deltad& d2);

/// Cosine of the angle between translation directions. Two standing-still
/// translations agree (+1); one moving against one standing still cannot (-1).
double beta(const Deltad& d1, const Deltad& d2, const SimilarityConfig& cfg);

/// Greedy earliest strictly-increasing allocation under the alpha/beta
/// thresholds. The demonstration's first delta is the alignment and scale
/// anchor for mapping, so it must match the first task delta: the whole
/// demonstration maps onto the whole segment.
std::optional<Allocation> is_semantically_similar(const TaskFeature& tf, const DemoFeature& hd,
                                                  const SimilarityConfig& cfg);

}  // namespace demoplan
