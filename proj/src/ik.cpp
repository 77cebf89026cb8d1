#include "demoplan/ik.hpp"

#include <cmath>
#include <fstream>

namespace demoplan {

namespace {

Eigen::Matrix3d skew(const Vec3d& v) {
  Eigen::Matrix3d s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

Eigen::Vector4d quat_wfirst(const Quatd& q) { return {q.w(), q.x(), q.y(), q.z()}; }

}  // namespace

Eigen::Matrix<double, 3, 4> j1_matrix(const Quatd& r) {
  Eigen::Matrix<double, 3, 4> j1;
  const Vec3d v = r.vec();
  j1.col(0) = -v;
  j1.block<3, 3>(0, 1) = r.w() * Eigen::Matrix3d::Identity() + skew(v);
  return j1;
}

Eigen::MatrixXd b_matrix(const RobotModel& m, const JointVector& q, const Vec3d& p,
                         const Quatd& r, double damping) {
  const auto js = spatial_jacobian(m, q);
  const Eigen::Matrix<double, 3, 4> two_j1 = 2.0 * j1_matrix(r);
  Eigen::Matrix<double, 6, 7> j2 = Eigen::Matrix<double, 6, 7>::Zero();
  j2.block<3, 4>(0, 3) = two_j1;                    // angular rows
  j2.block<3, 3>(3, 0) = Eigen::Matrix3d::Identity();  // linear rows
  j2.block<3, 4>(3, 3) = skew(p) * two_j1;
  const Eigen::Matrix<double, 6, 6> gram =
      js * js.transpose() + damping * Eigen::Matrix<double, 6, 6>::Identity();
  if (damping == 0.0) {
    const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(gram);
    if (!lu.isInvertible()) {
      throw SingularityError("b_matrix: spatial Jacobian is singular and damping is zero");
    }
    return lu.solve(js).transpose() * j2;
  }
  return gram.ldlt().solve(js).transpose() * j2;
}

namespace {

struct Residual {
  double pos;
  double rot;
  bool within(const IKConfig& cfg) const {
    return pos <= cfg.position_tolerance && rot <= cfg.rotation_tolerance;
  }
  double combined() const { return pos + 0.5 * rot; }
};

Residual measure(const Posed& current, const Posed& target) {
  return {(position(current) - position(target)).norm(),
          quat_distance(current.real, target.real)};
}

}  // namespace

JointVector resolve_step(const RobotModel& m, const JointVector& q, const Posed& target,
                         const IKConfig& cfg) {
  JointVector joints = q;
  const Vec3d target_p = position(target);
  double step_scale = 1.0;
  double damping = cfg.damping;  // raised while steps are being rejected
  Posed current = forward_kinematics(m, joints);
  Residual res = measure(current, target);
  for (int iter = 0; iter < cfg.max_substeps; ++iter) {
    if (res.within(cfg)) return joints;
    const Vec3d p = position(current);

    Quatd r_target = target.real;
    if (r_target.coeffs().dot(current.real.coeffs()) < 0) {
      r_target.coeffs() = -r_target.coeffs();  // hemisphere continuity
    }
    Eigen::Matrix<double, 7, 1> dgamma;
    dgamma.head<3>() = target_p - p;
    dgamma.tail<4>() = quat_wfirst(r_target) - quat_wfirst(current.real);

    // keep each increment inside the small-displacement regime
    double scale = step_scale;
    const double pos_err = dgamma.head<3>().norm();
    if (pos_err > cfg.max_linear_step) scale = std::min(scale, cfg.max_linear_step / pos_err);
    const double ang_err = rotation_angle(current.real, r_target);
    if (ang_err > cfg.max_angular_step) scale = std::min(scale, cfg.max_angular_step / ang_err);

    const Eigen::MatrixXd b = b_matrix(m, joints, p, current.real, damping);
    const JointVector candidate = joints + b * (scale * dgamma);
    const Posed fk = forward_kinematics(m, candidate);
    const Residual next = measure(fk, target);
    if (next.combined() < res.combined()) {
      joints = candidate;
      current = fk;
      res = next;
      step_scale = std::min(1.0, step_scale * 2.0);
      damping = std::max(cfg.damping, damping / 4.0);
    } else {
      step_scale *= 0.5;
      damping = std::min(1.0, std::max(damping * 10.0, 1e-5));
      if (step_scale < 1e-10) break;
    }
  }
  throw ConvergenceError("resolve_step: no convergence within the substep budget");
}

std::pair<JointTrajectory, LimitReport> track_plan(const RobotModel& m, const JointVector& q0,
                                                   const MotionPlan& plan, const IKConfig& cfg) {
  if (plan.waypoints.empty()) throw std::invalid_argument("track_plan: empty plan");
  const Posed start_fk = forward_kinematics(m, q0);
  const Posed& first = plan.waypoints.front();
  if ((position(start_fk) - position(first)).norm() > cfg.max_linear_step ||
      rotation_angle(start_fk.real, first.real) > cfg.max_angular_step) {
    throw std::invalid_argument("track_plan: initial joints do not match the plan start");
  }
  JointTrajectory traj;
  traj.dt = cfg.dt;
  traj.samples.push_back(q0);
  JointVector q = q0;
  for (const auto& wp : plan.waypoints) {
    q = resolve_step(m, q, wp, cfg);
    traj.samples.push_back(q);
  }
  return {traj, check_limits(m, traj)};
}

JointVector ik_seek(const RobotModel& m, const JointVector& q_guess, const Posed& target,
                    const IKConfig& cfg) {
  IKConfig wide = cfg;
  wide.max_substeps = std::max(cfg.max_substeps, 5000);
  // fixed restart pattern: a stalled descent usually means the wrong arm
  // fold, so retry from systematically perturbed postures
  static const double offsets[] = {0.0, 0.7, -0.7, 1.4, -1.4, 2.1, -2.1};
  for (const double o1 : offsets) {
    for (const double o2 : {0.0, 0.9, -0.9}) {
      JointVector start = q_guess;
      if (start.size() >= 2) {
        start[1] += o1;
        if (start.size() >= 3) start[2] += o2;
      } else {
        start[0] += o1;
      }
      try {
        return resolve_step(m, start, target, wide);
      } catch (const ConvergenceError&) {
        // next restart
      }
      if (start.size() < 3) break;
    }
    if (q_guess.size() < 2) break;
  }
  throw ConvergenceError("ik_seek: no convergence from any restart");
}

void save_trajectory_csv(const JointTrajectory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  const int dof = t.samples.empty() ? 0 : static_cast<int>(t.samples.front().size());
  out << "t";
  for (int i = 1; i <= dof; ++i) out << ",q" << i;
  out << "\n";
  for (std::size_t s = 0; s < t.samples.size(); ++s) {
    out << s * t.dt;
    for (int i = 0; i < dof; ++i) out << "," << t.samples[s][i];
    out << "\n";
  }
}

}  // namespace demoplan
