#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "demoplan/demo.hpp"
#include "demoplan/synthetic.hpp"
#include "test_support.hpp"

using namespace demoplan;

namespace {
constexpr double pi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

RobotModel one_revolute() {
  return RobotModel("1r", {DHRow{0, 0, 0, 0}}, {JointLimit{-2 * pi, 2 * pi}});
}

double remaining_angle(const Deltad& d) { return rotation_angle(d.rotation, Quatd::Identity()); }
}  // namespace

TEST_CASE("import_joint_demo") {
  const RobotModel m = one_revolute();

  JointTrajectory constant;
  constant.samples.assign(3, (JointVector(1) << 0.4).finished());
  const Demonstration d = import_joint_demo(m, constant, "constant");
  for (const auto& p : d.poses) {
    CHECK(quat_distance(p.real, d.poses.front().real) == 0);
  }

  JointTrajectory sweep;
  for (int i = 0; i < 4; ++i) sweep.samples.push_back((JointVector(1) << i * pi / 6).finished());
  const Demonstration s = import_joint_demo(m, sweep, "sweep");
  // the recorded samples survive densification, in order
  std::size_t cursor = 0;
  for (int i = 0; i < 4; ++i) {
    const Quatd expect = axis_angle_quat<double>({0, 0, 1}, i * pi / 6);
    bool found = false;
    for (; cursor < s.poses.size(); ++cursor) {
      if (quat_distance(s.poses[cursor].real, expect) < 1e-9) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
  for (std::size_t i = 0; i + 1 < s.poses.size(); ++i) {
    CHECK(rotation_angle(s.poses[i].real, s.poses[i + 1].real) < kMaxStepAngle);
  }

  JointTrajectory wrong;
  wrong.samples.assign(2, JointVector::Zero(3));
  CHECK_THROWS_AS(import_joint_demo(m, wrong, "wrong"), std::invalid_argument);
  JointTrajectory tooshort;
  tooshort.samples.assign(1, JointVector::Zero(1));
  CHECK_THROWS_AS(import_joint_demo(m, tooshort, "short"), std::invalid_argument);
}

TEST_CASE("import_pose_demo") {
  const Json two_identities = Json{
      {"name", "idle"},
      {"poses", Json::array({Json{{"p", {0, 0, 0}}, {"r", {1, 0, 0, 0}}},
                             Json{{"p", {0.1, 0, 0}}, {"r", {1, 0, 0, 0}}}})}};
  const Demonstration d = import_pose_demo(two_identities, "idle");
  CHECK(d.poses.size() == 2);

  // a grossly non-unit rotation is normalized, with a warning
  std::vector<std::string> warnings;
  const Json scaled = Json{
      {"name", "scaled"},
      {"poses", Json::array({Json{{"p", {0, 0, 0}}, {"r", {2, 0, 0, 0}}},
                             Json{{"p", {0.1, 0, 0}}, {"r", {1, 0, 0, 0}}}})}};
  const Demonstration n =
      import_pose_demo(scaled, "scaled", [&](const std::string& w) { warnings.push_back(w); });
  CHECK(quat_distance(n.poses[0].real, Quatd::Identity()) == 0);
  CHECK(warnings.size() == 1);

  CHECK_THROWS_AS(import_pose_demo(Json{{"name", "x"}}, "x"), SchemaError);
  const Json degenerate = Json{
      {"name", "bad"},
      {"poses", Json::array({Json{{"p", {0, 0, 0}}, {"r", {0, 0, 0, 0}}},
                             Json{{"p", {0.1, 0, 0}}, {"r", {1, 0, 0, 0}}}})}};
  CHECK_THROWS_AS(import_pose_demo(degenerate, "bad"), SchemaError);

  // a coarse sweep is resampled below the step bound
  Json coarse = Json{{"name", "coarse"}, {"poses", Json::array()}};
  for (int i = 0; i < 4; ++i) {
    const Quatd r = axis_angle_quat<double>({0, 1, 0}, i * pi / 6);
    coarse["poses"].push_back(Json{{"p", {0.1 * i, 0, 0}}, {"r", {r.w(), r.x(), r.y(), r.z()}}});
  }
  const Demonstration c = import_pose_demo(coarse, "coarse");
  CHECK(c.poses.size() > 4);
  for (std::size_t i = 0; i + 1 < c.poses.size(); ++i) {
    CHECK(rotation_angle(c.poses[i].real, c.poses[i + 1].real) < kMaxStepAngle);
  }
}

TEST_CASE("extract_feature") {
  Demonstration still;
  still.name = "still";
  still.poses.assign(2, pose_from<double>({0.2, 0, 0}, Quatd::Identity()));
  const DemoFeature f = extract_feature(still);
  REQUIRE(f.deltas.size() == 2);  // one real delta plus the terminal identity
  for (const auto& d : f.deltas) {
    CHECK(quat_distance(d.rotation, Quatd::Identity()) == 0);
    CHECK(d.translation.norm() == 0);
  }

  Demonstration single;
  single.poses.assign(1, pose_identity<double>());
  CHECK_THROWS_AS(extract_feature(single), std::invalid_argument);
}

TEST_CASE("stock demonstrations reproduce the printed leading deltas") {
  const auto demos = builtin_demos();
  REQUIRE(demos.size() == 5);
  const struct {
    Quatd rotation;
    Vec3d direction;
  } expected[5] = {
      {Quatd(kInvSqrt2, 0, 0, -kInvSqrt2), {1, 0, 0}},
      {Quatd(kInvSqrt2, 0, 0, kInvSqrt2), {1, 0, 0}},
      {Quatd(kInvSqrt2, 0, kInvSqrt2, 0), {kInvSqrt2, 0, -kInvSqrt2}},
      {Quatd(kInvSqrt2, 0, -kInvSqrt2, 0), {-kInvSqrt2, 0, kInvSqrt2}},
      {Quatd::Identity(), {kInvSqrt2, 0, -kInvSqrt2}},
  };
  for (int i = 0; i < 5; ++i) {
    const DemoFeature f = extract_feature(demos[i]);
    CHECK(quat_distance(f.deltas[0].rotation, expected[i].rotation) < 1e-9);
    CHECK((f.deltas[0].translation.normalized() - expected[i].direction).norm() < 1e-9);
  }
  const DemoFeature sixth = extract_feature(rolling_demo());
  CHECK(quat_distance(sixth.deltas[0].rotation, Quatd(kInvSqrt2, kInvSqrt2, 0, 0)) < 1e-9);
}

TEST_CASE("single-axis sweeps have non-increasing remaining rotation") {
  for (const auto& demo : builtin_demos()) {
    const DemoFeature f = extract_feature(demo);
    for (std::size_t i = 0; i + 1 < f.deltas.size(); ++i) {
      CHECK(remaining_angle(f.deltas[i + 1]) <= remaining_angle(f.deltas[i]) + 1e-12);
    }
    CHECK(remaining_angle(f.deltas.back()) == 0);
  }
}

TEST_CASE("extracted deltas recompose onto the final configuration") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const Demonstration d = random_demo(rng, "rand", 5);
    const DemoFeature f = extract_feature(d);
    REQUIRE(f.deltas.size() == d.poses.size());
    for (std::size_t i = 0; i + 1 < d.poses.size(); ++i) {
      const Posed back = apply_delta(d.poses[i], f.deltas[i]);
      CHECK(quat_distance(back.real, d.poses.back().real) < 1e-9);
      CHECK((position(back) - position(d.poses.back())).norm() < 1e-9);
    }
  }
}

TEST_CASE("delta rotations ignore the global frame, displacements follow it") {
  std::mt19937_64 rng(71);
  const Demonstration d = random_demo(rng, "rand", 4);
  const Posed g = demoplan::test::random_pose(rng);
  Demonstration moved = d;
  for (auto& p : moved.poses) p = pose_compose(g, p);
  const DemoFeature f0 = extract_feature(d);
  const DemoFeature f1 = extract_feature(moved);
  for (std::size_t i = 0; i < f0.deltas.size(); ++i) {
    CHECK(quat_distance(f0.deltas[i].rotation, f1.deltas[i].rotation) < 1e-9);
    CHECK((rotate_vector(g.real, f0.deltas[i].translation) - f1.deltas[i].translation).norm() <
          1e-9);
  }
}

TEST_CASE("joint-space and pose-space ingestion agree on the same motion") {
  const RobotModel m("1r-a05", {DHRow{0.5, 0, 0, 0}}, {JointLimit{-2 * pi, 2 * pi}});
  JointTrajectory t;
  Json pose_doc = Json{{"name", "arc"}, {"poses", Json::array()}};
  for (int i = 0; i <= 12; ++i) {
    const double q = (pi / 2) * i / 12.0;  // 7.5 degree steps: no resampling
    t.samples.push_back((JointVector(1) << q).finished());
    const Posed fk = forward_kinematics(m, t.samples.back());
    pose_doc["poses"].push_back(
        Json{{"p", to_json(position(fk))}, {"r", to_json(fk.real)}});
  }
  const DemoFeature from_joints = extract_feature(import_joint_demo(m, t, "arc"));
  const DemoFeature from_poses = extract_feature(import_pose_demo(pose_doc, "arc"));
  REQUIRE(from_joints.deltas.size() == from_poses.deltas.size());
  for (std::size_t i = 0; i < from_joints.deltas.size(); ++i) {
    CHECK(quat_distance(from_joints.deltas[i].rotation, from_poses.deltas[i].rotation) < 1e-12);
    CHECK((from_joints.deltas[i].translation - from_poses.deltas[i].translation).norm() < 1e-12);
  }
}

TEST_CASE("library add, save, load") {
  Library lib = build_builtin_library();
  CHECK(lib.size() == 5);
  CHECK(lib.version() == 5);

  CHECK_THROWS_AS(lib.add(DemoFeature{"stacking", {Deltad{}}}), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "demoplan_lib_test.json";
  save_library(lib, path.string());
  const Library back = load_library(path.string());
  std::filesystem::remove(path);
  CHECK(back.version() == lib.version());
  REQUIRE(back.size() == lib.size());
  for (int i = 0; i < lib.size(); ++i) {
    CHECK(back.at(i).name == lib.at(i).name);
    REQUIRE(back.at(i).deltas.size() == lib.at(i).deltas.size());
    for (std::size_t k = 0; k < lib.at(i).deltas.size(); ++k) {
      CHECK(quat_distance(back.at(i).deltas[k].rotation, lib.at(i).deltas[k].rotation) < 1e-12);
      CHECK((back.at(i).deltas[k].translation - lib.at(i).deltas[k].translation).norm() < 1e-12);
    }
  }
}
