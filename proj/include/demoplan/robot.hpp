#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "demoplan/json_io.hpp"
#include "demoplan/se3.hpp"

namespace demoplan {

/// Classic (distal) Denavit-Hartenberg row: the link transform is
/// RotZ(theta_offset + q) * TransZ(d) * TransX(a) * RotX(alpha).
struct DHRow {
  double a{0};             // meters
  double alpha{0};         // radians
  double d{0};             // meters
  double theta_offset{0};  // radians
};

struct JointLimit {
  double min{0};
  double max{0};
};

class RobotModel {
 public:
  RobotModel(std::string name, std::vector<DHRow> rows, std::vector<JointLimit> limits);

  const std::string& name() const { return name_; }
  int dof() const { return static_cast<int>(rows_.size()); }
  const std::vector<DHRow>& rows() const { return rows_; }
  const std::vector<JointLimit>& limits() const { return limits_; }

  static RobotModel from_json(const Json& j);
  Json to_json() const;

 private:
  std::string name_;
  std::vector<DHRow> rows_;
  std::vector<JointLimit> limits_;
};

RobotModel load_robot(const std::string& path);

using JointVector = Eigen::VectorXd;

struct JointTrajectory {
  std::vector<JointVector> samples;
  double dt{0.1};  // seconds
};

/// End-effector pose in the base frame from chained DH transforms.
Posed forward_kinematics(const RobotModel& m, const JointVector& q);

/// 6 x dof spatial Jacobian; rows are angular (3) then linear (3). Column i is
/// the base-frame screw of joint i: [z_i; o_i x z_i].
Eigen::Matrix<double, 6, Eigen::Dynamic> spatial_jacobian(const RobotModel& m,
                                                          const JointVector& q);

struct LimitViolation {
  int step{0};
  int joint{0};
  double excess{0};  // radians beyond the violated bound
};

struct LimitReport {
  std::vector<LimitViolation> violations;
  double worst_excess{0};
  bool empty() const { return violations.empty(); }
  Json to_json() const;
};

/// Report-only limit bookkeeping; never aborts a trajectory.
LimitReport check_limits(const RobotModel& m, const JointTrajectory& t);

}  // namespace demoplan
