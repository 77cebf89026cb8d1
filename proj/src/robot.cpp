#include "demoplan/robot.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace demoplan {

RobotModel::RobotModel(std::string name, std::vector<DHRow> rows, std::vector<JointLimit> limits)
    : name_(std::move(name)), rows_(std::move(rows)), limits_(std::move(limits)) {
  if (rows_.empty()) throw std::invalid_argument("robot model needs at least one joint");
  if (limits_.size() != rows_.size()) {
    throw std::invalid_argument("robot model: one limit pair per joint required");
  }
  for (const auto& l : limits_) {
    if (!(l.min < l.max)) throw std::invalid_argument("robot model: limit min must be < max");
  }
}

RobotModel RobotModel::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dh") || !j["dh"].is_array()) {
    throw SchemaError("robot file: expected {\"name\", \"dh\": [...], \"limits\": [...]}");
  }
  std::vector<DHRow> rows;
  for (const auto& r : j["dh"]) {
    rows.push_back(DHRow{require_number(r, "a", "robot dh row"),
                         require_number(r, "alpha", "robot dh row"),
                         require_number(r, "d", "robot dh row"),
                         require_number(r, "theta_offset", "robot dh row")});
  }
  std::vector<JointLimit> limits;
  if (j.contains("limits")) {
    for (const auto& l : j["limits"]) {
      limits.push_back(JointLimit{require_number(l, "min", "robot limit"),
                                  require_number(l, "max", "robot limit")});
    }
  }
  std::string name = j.value("name", "robot");
  try {
    return RobotModel(std::move(name), std::move(rows), std::move(limits));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("robot file: ") + e.what());
  }
}

Json RobotModel::to_json() const {
  Json dh = Json::array();
  for (const auto& r : rows_) {
    dh.push_back({{"a", r.a}, {"alpha", r.alpha}, {"d", r.d}, {"theta_offset", r.theta_offset}});
  }
  Json lim = Json::array();
  for (const auto& l : limits_) lim.push_back({{"min", l.min}, {"max", l.max}});
  return Json{{"name", name_}, {"dh", dh}, {"limits", lim}};
}

RobotModel load_robot(const std::string& path) { return RobotModel::from_json(load_json_file(path)); }

namespace {

Posed link_pose(const DHRow& row, double q) {
  const double theta = row.theta_offset + q;
  const Quatd r = Quatd(Eigen::AngleAxisd(theta, Vec3d::UnitZ())) *
                  Quatd(Eigen::AngleAxisd(row.alpha, Vec3d::UnitX()));
  const Vec3d p(row.a * std::cos(theta), row.a * std::sin(theta), row.d);
  return pose_from(p, r);
}

void check_dims(const RobotModel& m, const JointVector& q) {
  if (q.size() != m.dof()) {
    throw std::invalid_argument("joint vector length does not match robot DOF");
  }
}

}  // namespace

Posed forward_kinematics(const RobotModel& m, const JointVector& q) {
  check_dims(m, q);
  Posed t = pose_identity<double>();
  for (int i = 0; i < m.dof(); ++i) {
    t = pose_compose(t, link_pose(m.rows()[i], q[i]));
  }
  return t;
}

Eigen::Matrix<double, 6, Eigen::Dynamic> spatial_jacobian(const RobotModel& m,
                                                          const JointVector& q) {
  check_dims(m, q);
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, m.dof());
  Posed t = pose_identity<double>();
  for (int i = 0; i < m.dof(); ++i) {
    const Vec3d axis = rotate_vector(t.real, Vec3d(Vec3d::UnitZ()));
    const Vec3d origin = position(t);
    jac.col(i).head<3>() = axis;
    jac.col(i).tail<3>() = origin.cross(axis);
    t = pose_compose(t, link_pose(m.rows()[i], q[i]));
  }
  return jac;
}

LimitReport check_limits(const RobotModel& m, const JointTrajectory& t) {
  LimitReport report;
  for (std::size_t s = 0; s < t.samples.size(); ++s) {
    const JointVector& q = t.samples[s];
    check_dims(m, q);
    for (int i = 0; i < m.dof(); ++i) {
      const JointLimit& l = m.limits()[i];
      double excess = 0;
      if (q[i] < l.min) excess = l.min - q[i];
      if (q[i] > l.max) excess = q[i] - l.max;
      if (excess > 0) {
        report.violations.push_back({static_cast<int>(s), i, excess});
        report.worst_excess = std::max(report.worst_excess, excess);
      }
    }
  }
  return report;
}

Json LimitReport::to_json() const {
  Json v = Json::array();
  for (const auto& x : violations) {
    v.push_back({{"step", x.step}, {"joint", x.joint}, {"excess", x.excess}});
  }
  return Json{{"violations", v}, {"worst_excess", worst_excess}};
}

}  // namespace demoplan
