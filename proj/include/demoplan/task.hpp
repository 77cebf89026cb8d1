#pragma once

#include <string>
#include <vector>

#include "demoplan/json_io.hpp"
#include "demoplan/se3.hpp"

namespace demoplan {

/// A pinned angle has lo == hi == nominal; free angles default to
/// [-2*pi, 2*pi] with nominal 0.
struct AngleSpec {
  double lo{0};
  double hi{0};
  double nominal{0};
  bool pinned() const { return lo == hi; }
};

struct CriticalConfiguration {
  Vec3d position{Vec3d::Zero()};
  AngleSpec roll;
  AngleSpec pitch;
  AngleSpec yaw;

  EulerAnglesd nominal() const { return {roll.nominal, pitch.nominal, yaw.nominal}; }
};

class Task {
 public:
  Task(std::string name, std::vector<CriticalConfiguration> constraints);

  const std::string& name() const { return name_; }
  const std::vector<CriticalConfiguration>& constraints() const { return constraints_; }
  int size() const { return static_cast<int>(constraints_.size()); }

  Json to_json() const;

 private:
  std::string name_;
  std::vector<CriticalConfiguration> constraints_;
};

/// Half-open index pair into a task: configurations start..end inclusive,
/// start < end. Serialized 1-based to match the con_i naming.
struct TaskSegment {
  int start{0};
  int end{0};
  bool operator==(const TaskSegment&) const = default;
};

struct TaskFeature {
  std::vector<Deltad> deltas;
};

Task parse_task(const Json& document);
Task parse_task_text(const std::string& text);
Task load_task(const std::string& path);

Posed config_to_pose(const CriticalConfiguration& c);

/// Deltas of each segment configuration relative to the segment's final one;
/// (end - start) entries.
TaskFeature segment_feature(const Task& task, const TaskSegment& s);

}  // namespace demoplan
