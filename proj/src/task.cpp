#include "demoplan/task.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace demoplan {

namespace {

constexpr double kDistinctTol = 1e-6;  // positions (m) and rotation distance

AngleSpec parse_angle(const Json& euler, const char* key) {
  AngleSpec spec;
  if (!euler.contains(key) || euler[key].is_null()) {
    // unconstrained angle
    spec.lo = -2 * std::numbers::pi;
    spec.hi = 2 * std::numbers::pi;
    spec.nominal = 0;
    return spec;
  }
  const Json& v = euler[key];
  if (v.is_number()) {
    spec.lo = spec.hi = spec.nominal = v.get<double>();
    return spec;
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    spec.lo = v[0].get<double>();
    spec.hi = v[1].get<double>();
    if (spec.lo > spec.hi) throw SchemaError(std::string("task: inverted bounds for ") + key);
    spec.nominal = 0.5 * (spec.lo + spec.hi);
    return spec;
  }
  throw SchemaError(std::string("task: angle \"") + key + "\" must be a number or [lo, hi]");
}

Json angle_to_json(const AngleSpec& a) {
  if (a.pinned()) return a.nominal;
  return Json::array({a.lo, a.hi});
}

}  // namespace

Task::Task(std::string name, std::vector<CriticalConfiguration> constraints)
    : name_(std::move(name)), constraints_(std::move(constraints)) {
  if (constraints_.size() < 2) throw SchemaError("task: need at least two critical configurations");
  for (const auto& c : constraints_) {
    for (const AngleSpec* a : {&c.roll, &c.pitch, &c.yaw}) {
      if (a->lo > a->hi) throw SchemaError("task: inverted angle bounds");
      if (a->nominal < a->lo || a->nominal > a->hi) {
        throw SchemaError("task: nominal angle outside its bounds");
      }
    }
  }
  for (std::size_t i = 0; i + 1 < constraints_.size(); ++i) {
    const auto& a = constraints_[i];
    const auto& b = constraints_[i + 1];
    const double dp = (a.position - b.position).norm();
    const double dr = quat_distance(euler_to_quat(a.nominal()), euler_to_quat(b.nominal()));
    if (dp <= kDistinctTol && dr <= kDistinctTol) {
      throw SchemaError("task: consecutive critical configurations must be distinct");
    }
  }
}

Task parse_task(const Json& document) {
  if (!document.is_object() || !document.contains("constraints") ||
      !document["constraints"].is_array()) {
    throw SchemaError("task: expected {\"name\", \"constraints\": [...]}");
  }
  std::vector<CriticalConfiguration> configs;
  for (const auto& c : document["constraints"]) {
    CriticalConfiguration cc;
    if (!c.contains("p")) throw SchemaError("task constraint: missing \"p\"");
    cc.position = vec3_from_json(c["p"], "task constraint p");
    const Json euler = c.value("euler", Json::object());
    cc.roll = parse_angle(euler, "roll");
    cc.pitch = parse_angle(euler, "pitch");
    cc.yaw = parse_angle(euler, "yaw");
    if (c.contains("nominal")) {
      const Vec3d n = vec3_from_json(c["nominal"], "task constraint nominal");
      cc.roll.nominal = n.x();
      cc.pitch.nominal = n.y();
      cc.yaw.nominal = n.z();
    }
    configs.push_back(cc);
  }
  return Task(document.value("name", "task"), std::move(configs));
}

Task parse_task_text(const std::string& text) { return parse_task(parse_json(text, "task")); }

Task load_task(const std::string& path) { return parse_task(load_json_file(path)); }

Json Task::to_json() const {
  Json constraints = Json::array();
  for (const auto& c : constraints_) {
    Json euler{{"roll", angle_to_json(c.roll)},
               {"pitch", angle_to_json(c.pitch)},
               {"yaw", angle_to_json(c.yaw)}};
    Json entry{{"p", demoplan::to_json(c.position)}, {"euler", euler}};
    if (!c.roll.pinned() || !c.pitch.pinned() || !c.yaw.pinned()) {
      entry["nominal"] = Json::array({c.roll.nominal, c.pitch.nominal, c.yaw.nominal});
    }
    constraints.push_back(entry);
  }
  return Json{{"name", name_}, {"constraints", constraints}};
}

Posed config_to_pose(const CriticalConfiguration& c) {
  return pose_from(c.position, euler_to_quat(c.nominal()));
}

TaskFeature segment_feature(const Task& task, const TaskSegment& s) {
  if (s.start < 0 || s.end >= task.size() || s.start >= s.end) {
    throw std::invalid_argument("segment_feature: segment indices out of range");
  }
  std::vector<Posed> poses;
  poses.reserve(s.end - s.start + 1);
  for (int i = s.start; i <= s.end; ++i) {
    poses.push_back(config_to_pose(task.constraints()[i]));
  }
  return TaskFeature{deltas_to_goal(std::span<const Posed>(poses))};
}

}  // namespace demoplan
