#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "demoplan/mapper.hpp"
#include "demoplan/robot.hpp"
#include "demoplan/se3.hpp"

namespace demoplan {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IKConfig {
  double dt{0.1};                        // seconds per output sample
  double damping{1e-6};                  // lambda; 0 recovers the bare pseudoinverse
  double position_tolerance{1e-6};       // meters
  double rotation_tolerance{1e-6};       // quaternion distance
  int max_substeps{200};                 // per waypoint
  double max_linear_step{0.05};          // meters per substep
  double max_angular_step{kMaxStepAngle};  // radians per substep
};

/// 3x4 map from a quaternion rate (w first) to spatial angular velocity:
/// omega = 2 J1 rdot, J1 = [-v | w I + skew(v)] for r = (w, v).
Eigen::Matrix<double, 3, 4> j1_matrix(const Quatd& r);

/// dof x 7 resolved-rate matrix B = Js^T (Js Js^T + lambda I)^-1 J2, taking
/// task rates [pdot; rdot] to joint rates. J2 matches the angular-first twist
/// ordering of the spatial Jacobian.
Eigen::MatrixXd b_matrix(const RobotModel& m, const JointVector& q, const Vec3d& p,
                         const Quatd& r, double damping);

/// One waypoint step: iterated damped resolved-rate increments, substepped to
/// the small-displacement regime, until the target is met within tolerance.
JointVector resolve_step(const RobotModel& m, const JointVector& q, const Posed& target,
                         const IKConfig& cfg);

/// Sequential resolve_step over a plan's waypoints; limit violations are
/// reported, never enforced.
std::pair<JointTrajectory, LimitReport> track_plan(const RobotModel& m, const JointVector& q0,
                                                   const MotionPlan& plan, const IKConfig& cfg);

/// resolve_step with a generous iteration budget, for reaching a distant
/// target (e.g. positioning the arm at a plan's first waypoint).
JointVector ik_seek(const RobotModel& m, const JointVector& q_guess, const Posed& target,
                    const IKConfig& cfg);

void save_trajectory_csv(const JointTrajectory& t, const std::string& path);

}  // namespace demoplan
