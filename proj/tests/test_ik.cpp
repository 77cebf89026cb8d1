#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "demoplan/ik.hpp"
#include "demoplan/synthetic.hpp"
#include "test_support.hpp"

using namespace demoplan;

namespace {
constexpr double pi = std::numbers::pi;

RobotModel six_r() {
  std::vector<DHRow> rows{{0, pi / 2, 0.1625, 0}, {-0.425, 0, 0, 0},   {-0.3922, 0, 0, 0},
                          {0, pi / 2, 0.1333, 0}, {0, -pi / 2, 0.0997, 0}, {0, 0, 0.0996, 0}};
  std::vector<JointLimit> lims(6, JointLimit{-2 * pi, 2 * pi});
  return RobotModel("6r", rows, lims);
}

RobotModel one_revolute(double lim = 2 * pi) {
  return RobotModel("1r", {DHRow{0.5, 0, 0, 0}}, {JointLimit{-lim, lim}});
}

JointVector home() {
  JointVector q(6);
  q << 0.4, -1.2, 1.4, -1.8, -1.4, 0.3;
  return q;
}
}  // namespace

TEST_CASE("j1_matrix maps quaternion rates to angular velocity") {
  Eigen::Vector4d rdot;
  rdot << 0, 0, 0, 0.5;
  const Vec3d omega = 2.0 * j1_matrix(Quatd::Identity()) * rdot;
  CHECK((omega - Vec3d(0, 0, 1)).norm() < 1e-12);

  std::mt19937_64 rng(103);
  for (int i = 0; i < 200; ++i) {
    const Quatd r = demoplan::test::random_unit_quat(rng);
    // tangency: the quaternion's own direction is in the null space
    const Eigen::Vector4d rv(r.w(), r.x(), r.y(), r.z());
    CHECK((j1_matrix(r) * rv).norm() < 1e-12);

    // finite differences of a rotating pose
    const Vec3d axis = demoplan::test::random_vec3(rng).normalized();
    const double rate = 0.8;
    const double h = 1e-6;
    const Quatd rp = Quatd(Eigen::AngleAxisd(rate * h, axis)) * r;
    const Quatd rm = Quatd(Eigen::AngleAxisd(-rate * h, axis)) * r;
    Eigen::Vector4d fd;
    fd << (rp.w() - rm.w()), (rp.x() - rm.x()), (rp.y() - rm.y()), (rp.z() - rm.z());
    fd /= 2 * h;
    const Vec3d omega_fd = 2.0 * j1_matrix(r) * fd;
    CHECK((omega_fd - rate * axis).norm() < 1e-5);
  }
}

TEST_CASE("b_matrix") {
  const RobotModel m = six_r();
  const JointVector q = home();
  const Posed fk = forward_kinematics(m, q);
  const Vec3d p = position(fk);

  // damped solution approaches the bare pseudoinverse for tiny damping
  const Eigen::MatrixXd b_tiny = b_matrix(m, q, p, fk.real, 1e-10);
  const auto js = spatial_jacobian(m, q);
  const Eigen::MatrixXd pinv =
      js.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::Matrix<double, 7, 1> rate;
  rate << 0.01, -0.02, 0.005, 0, 0.001, -0.001, 0.002;
  Eigen::Matrix<double, 6, 7> j2 = Eigen::Matrix<double, 6, 7>::Zero();
  {
    const Eigen::Matrix<double, 3, 4> two_j1 = 2.0 * j1_matrix(fk.real);
    j2.block<3, 4>(0, 3) = two_j1;
    j2.block<3, 3>(3, 0) = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d px;
    px << 0, -p.z(), p.y(), p.z(), 0, -p.x(), -p.y(), p.x(), 0;
    j2.block<3, 4>(3, 3) = px * two_j1;
  }
  CHECK((b_tiny * rate - pinv * (j2 * rate)).norm() < 1e-6);

  // zero rate gives zero joint motion; damping keeps everything finite
  CHECK((b_matrix(m, q, p, fk.real, 1e-6) * Eigen::Matrix<double, 7, 1>::Zero()).norm() == 0);
  CHECK(b_matrix(m, JointVector::Zero(6), position(forward_kinematics(m, JointVector::Zero(6))),
                 forward_kinematics(m, JointVector::Zero(6)).real, 1e-6)
            .allFinite());

  // undamped and away from singularities, the commanded twist is reproduced
  const Eigen::MatrixXd b0 = b_matrix(m, q, p, fk.real, 0.0);
  CHECK((js * (b0 * rate) - j2 * rate).norm() < 1e-6);

  // a 1R arm has a rank-1 Jacobian: undamped inversion must refuse
  const RobotModel r1 = one_revolute();
  JointVector q1(1);
  q1 << 0.2;
  const Posed fk1 = forward_kinematics(r1, q1);
  CHECK_THROWS_AS(b_matrix(r1, q1, position(fk1), fk1.real, 0.0), SingularityError);
}

TEST_CASE("resolve_step") {
  const RobotModel r1 = one_revolute();
  IKConfig cfg;

  JointVector q(1);
  q << 0.3;
  const Posed hold = forward_kinematics(r1, q);
  CHECK((resolve_step(r1, q, hold, cfg) - q).norm() == 0);

  const Posed target = forward_kinematics(r1, (JointVector(1) << 0.4).finished());
  const JointVector out = resolve_step(r1, q, target, cfg);
  CHECK(out[0] == doctest::Approx(0.4).epsilon(1e-6));

  const RobotModel m = six_r();
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  JointVector q6 = home();
  for (int trial = 0; trial < 25; ++trial) {
    JointVector dq(6);
    for (int i = 0; i < 6; ++i) dq[i] = u(rng);
    const Posed goal = forward_kinematics(m, q6 + dq);
    q6 = resolve_step(m, q6, goal, cfg);
    const Posed reached = forward_kinematics(m, q6);
    CHECK((position(reached) - position(goal)).norm() < 1e-3);
    CHECK(quat_distance(reached.real, goal.real) < 1e-3);
  }
}

TEST_CASE("track_plan") {
  const RobotModel m = six_r();
  IKConfig cfg;
  const JointVector q0 = home();
  const Posed start = forward_kinematics(m, q0);

  MotionPlan constant;
  constant.task = "hold";
  constant.waypoints.assign(4, start);
  const auto [traj, report] = track_plan(m, q0, constant, cfg);
  CHECK(traj.samples.size() == 5);
  for (const auto& q : traj.samples) CHECK((q - q0).norm() == 0);
  CHECK(report.empty());

  // a plan starting somewhere else entirely is rejected
  MotionPlan far;
  far.waypoints.assign(2, pose_from<double>(position(start) + Vec3d(0.4, 0, 0), start.real));
  CHECK_THROWS_AS(track_plan(m, q0, far, cfg), std::invalid_argument);

  // limit violations are reported, not enforced
  const RobotModel tight = one_revolute(0.05);
  JointVector z(1);
  z << 0.0;
  MotionPlan sweep;
  sweep.task = "sweep";
  std::vector<Posed> wps;
  for (int i = 0; i <= 6; ++i) {
    wps.push_back(forward_kinematics(tight, (JointVector(1) << 0.05 * i).finished()));
  }
  sweep.waypoints = wps;
  const auto [traj2, report2] = track_plan(tight, z, sweep, cfg);
  CHECK(!report2.empty());
  CHECK(report2.worst_excess == doctest::Approx(0.25).epsilon(1e-3));

  // hemisphere continuity along the output
  Posed prev = forward_kinematics(tight, traj2.samples.front());
  for (const auto& q : traj2.samples) {
    const Posed cur = forward_kinematics(tight, q);
    CHECK(prev.real.coeffs().dot(cur.real.coeffs()) >= 0);
    prev = cur;
  }
}

TEST_CASE("ik_seek reaches a distant pose") {
  const RobotModel m = six_r();
  IKConfig cfg;
  const JointVector q0 = home();
  const Posed goal = pose_from<double>({-0.5, 0, 0.3}, euler_to_quat<double>({0, -pi / 2, 0}));
  const JointVector q = ik_seek(m, q0, goal, cfg);
  const Posed fk = forward_kinematics(m, q);
  CHECK((position(fk) - position(goal)).norm() < 1e-5);
  CHECK(quat_distance(fk.real, goal.real) < 1e-5);
}
