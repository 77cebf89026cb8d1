#pragma once

#include <functional>
#include <string>
#include <vector>

#include "demoplan/json_io.hpp"
#include "demoplan/robot.hpp"
#include "demoplan/se3.hpp"

namespace demoplan {

/// Recorded end-effector configurations. Consecutive rotations stay below the
/// ~10 degree step bound; ingestion resamples where a recording is coarser.
struct Demonstration {
  std::string name;
  std::vector<Posed> poses;
};

/// Deltas of every configuration against the final one, plus one terminal
/// identity delta so allocations may land on the demonstration's endpoint.
struct DemoFeature {
  std::string name;
  std::vector<Deltad> deltas;
};

class Library {
 public:
  int version() const { return version_; }
  const std::vector<DemoFeature>& features() const { return features_; }
  int size() const { return static_cast<int>(features_.size()); }
  const DemoFeature& at(int i) const { return features_.at(i); }

  /// Duplicate names are rejected; each add bumps the version.
  void add(DemoFeature feature);

  Json to_json() const;
  static Library from_json(const Json& j);

 private:
  int version_{0};
  std::vector<DemoFeature> features_;
};

using WarningSink = std::function<void(const std::string&)>;

Demonstration import_joint_demo(const RobotModel& m, const JointTrajectory& t,
                                const std::string& name);
Demonstration import_pose_demo(const Json& document, const std::string& name,
                               const WarningSink& warn = {});
/// Dispatches on the document's "joints" / "poses" field.
Demonstration import_demo_file(const Json& document, const RobotModel* m,
                               const std::string& name_override = "",
                               const WarningSink& warn = {});

DemoFeature extract_feature(const Demonstration& d);

void library_add(Library& lib, DemoFeature feature);
void save_library(const Library& lib, const std::string& path);
Library load_library(const std::string& path);

}  // namespace demoplan
