#pragma once

#include <string>
#include <vector>

#include "demoplan/demo.hpp"
#include "demoplan/json_io.hpp"
#include "demoplan/se3.hpp"
#include "demoplan/similarity.hpp"
#include "demoplan/task.hpp"

namespace demoplan {

/// Quaternion rotating `from` onto `to` about their mutual normal. An
/// antiparallel pair rotates pi about the part of world z orthogonal to
/// `from` (world x when `from` is within 1e-9 of +-z).
Quatd alignment_quat(const Vec3d& from, const Vec3d& to);

/// A demonstration feature retargeted onto a task segment: rotations are
/// copied verbatim, translations rigidly rotated and uniformly scaled so the
/// segment's endpoints are met.
struct MappedFeature {
  std::vector<Deltad> deltas;  // last entry stays the identity terminal
  std::string demo;
  TaskSegment segment;
};

MappedFeature map_feature(const DemoFeature& hd, const TaskFeature& tf, const Allocation& alloc,
                          double zero_translation_epsilon = 1e-6);

/// Absolute waypoints from a goal configuration and a mapped feature. The
/// final waypoint is the goal itself; the first lands on the segment's start
/// position.
std::vector<Posed> reconstruct_plan(const Posed& goal, const MappedFeature& mf);

struct SegmentProvenance {
  TaskSegment segment;
  std::string demo;
  Allocation allocation;
};

struct MotionPlan {
  std::string task;
  std::vector<Posed> waypoints;
  std::vector<SegmentProvenance> provenance;
};

Json plan_to_json(const MotionPlan& plan);
MotionPlan plan_from_json(const Json& j);

struct CoverageReport {
  bool plannable{false};
  /// Empty exactly when the whole task can be covered; otherwise the minimal
  /// blocking segments (no match, and every sub-split also blocked).
  std::vector<TaskSegment> uncovered;
  bool empty() const { return uncovered.empty(); }
};

CoverageReport coverage_check(const Task& task, const Library& lib, const SimilarityConfig& cfg);

}  // namespace demoplan
