#include "demoplan/demo.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

namespace demoplan {

namespace {

// Linear joint interpolation until every FK step is below the rotation bound.
std::vector<JointVector> densify_joint_samples(const RobotModel& m,
                                               std::vector<JointVector> samples) {
  constexpr int kMaxRounds = 24;
  for (int round = 0; round < kMaxRounds; ++round) {
    bool split = false;
    std::vector<JointVector> next;
    next.reserve(samples.size());
    next.push_back(samples.front());
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const Posed a = forward_kinematics(m, samples[i]);
      const Posed b = forward_kinematics(m, samples[i + 1]);
      if (rotation_angle(a.real, b.real) >= kMaxStepAngle) {
        next.push_back(0.5 * (samples[i] + samples[i + 1]));
        split = true;
      }
      next.push_back(samples[i + 1]);
    }
    samples = std::move(next);
    if (!split) break;
  }
  return samples;
}

}  // namespace

Demonstration import_joint_demo(const RobotModel& m, const JointTrajectory& t,
                                const std::string& name) {
  if (t.samples.size() < 2) throw std::invalid_argument("joint demo needs at least two samples");
  for (const auto& q : t.samples) {
    if (q.size() != m.dof()) {
      throw std::invalid_argument("joint demo sample length does not match robot DOF");
    }
  }
  Demonstration d;
  d.name = name;
  for (const auto& q : densify_joint_samples(m, t.samples)) {
    d.poses.push_back(forward_kinematics(m, q));
  }
  return d;
}

Demonstration import_pose_demo(const Json& document, const std::string& name,
                               const WarningSink& warn) {
  if (!document.is_object() || !document.contains("poses") || !document["poses"].is_array()) {
    throw SchemaError("pose demo: expected {\"name\", \"poses\": [...]}");
  }
  std::vector<Posed> poses;
  for (const auto& entry : document["poses"]) {
    if (!entry.is_object() || !entry.contains("p") || !entry.contains("r")) {
      throw SchemaError("pose demo: each pose needs \"p\" and \"r\"");
    }
    const Vec3d p = vec3_from_json(entry["p"], "pose demo p");
    const Quatd r = quat_from_json(entry["r"], "pose demo r");
    const double n = quat_norm(r);
    if (!(n > 1e-9) || !std::isfinite(n)) {
      throw SchemaError("pose demo: degenerate rotation quaternion");
    }
    if (std::abs(n - 1.0) > 1e-6 && warn) {
      warn("pose demo \"" + name + "\": rotation normalized (|q| was " + std::to_string(n) + ")");
    }
    poses.push_back(pose_from(p, r));  // pose_from normalizes
  }
  if (poses.size() < 2) throw SchemaError("pose demo: need at least two poses");
  Demonstration d;
  d.name = name;
  d.poses = densify_poses(std::span<const Posed>(poses));
  return d;
}

Demonstration import_demo_file(const Json& document, const RobotModel* m,
                               const std::string& name_override, const WarningSink& warn) {
  const std::string name =
      name_override.empty() ? document.value("name", std::string("demo")) : name_override;
  if (document.contains("poses")) return import_pose_demo(document, name, warn);
  if (document.contains("joints")) {
    if (m == nullptr) throw SchemaError("joint demo requires a robot model");
    JointTrajectory t;
    t.dt = document.value("dt", 0.1);
    if (!document["joints"].is_array()) throw SchemaError("joint demo: \"joints\" must be an array");
    for (const auto& row : document["joints"]) {
      if (!row.is_array()) throw SchemaError("joint demo: each sample must be an array");
      JointVector q(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!row[i].is_number()) throw SchemaError("joint demo: non-numeric joint angle");
        q[i] = row[i].get<double>();
      }
      t.samples.push_back(q);
    }
    return import_joint_demo(*m, t, name);
  }
  throw SchemaError("demo file: expected a \"poses\" or \"joints\" field");
}

DemoFeature extract_feature(const Demonstration& d) {
  if (d.poses.size() < 2) throw std::invalid_argument("extract_feature: need at least two poses");
  DemoFeature f;
  f.name = d.name;
  f.deltas = deltas_to_goal(std::span<const Posed>(d.poses));
  f.deltas.push_back(Deltad{});  // terminal identity
  return f;
}

void Library::add(DemoFeature feature) {
  for (const auto& f : features_) {
    if (f.name == feature.name) {
      throw std::invalid_argument("library already contains a feature named \"" + feature.name +
                                  "\"");
    }
  }
  features_.push_back(std::move(feature));
  ++version_;
}

void library_add(Library& lib, DemoFeature feature) { lib.add(std::move(feature)); }

Json Library::to_json() const {
  Json features = Json::array();
  for (const auto& f : features_) {
    Json deltas = Json::array();
    for (const auto& d : f.deltas) {
      deltas.push_back({{"r", demoplan::to_json(d.rotation)}, {"t", demoplan::to_json(d.translation)}});
    }
    features.push_back({{"name", f.name}, {"deltas", deltas}});
  }
  return Json{{"version", version_}, {"features", features}};
}

Library Library::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("features") || !j["features"].is_array()) {
    throw SchemaError("library file: expected {\"version\", \"features\": [...]}");
  }
  Library lib;
  for (const auto& fj : j["features"]) {
    if (!fj.is_object() || !fj.contains("name") || !fj.contains("deltas")) {
      throw SchemaError("library feature: expected {\"name\", \"deltas\"}");
    }
    DemoFeature f;
    f.name = fj["name"].get<std::string>();
    for (const auto& dj : fj["deltas"]) {
      Deltad d;
      d.rotation = normalized(quat_from_json(dj.at("r"), "library delta r"));
      d.translation = vec3_from_json(dj.at("t"), "library delta t");
      f.deltas.push_back(d);
    }
    if (f.deltas.empty()) throw SchemaError("library feature: empty delta list");
    lib.add(std::move(f));
  }
  lib.version_ = j.value("version", lib.version_);
  return lib;
}

void save_library(const Library& lib, const std::string& path) {
  save_json_file(path, lib.to_json());
}

Library load_library(const std::string& path) { return Library::from_json(load_json_file(path)); }

}  // namespace demoplan
