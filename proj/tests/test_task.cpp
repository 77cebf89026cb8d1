#include <doctest.h>

#include <numbers>
#include <random>

#include "demoplan/synthetic.hpp"
#include "demoplan/task.hpp"
#include "test_support.hpp"

using namespace demoplan;

namespace {
constexpr double pi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

const char* kYawLineDoc = R"({
  "name": "yaw-line",
  "constraints": [
    {"p": [-0.2, 0, 0.6], "euler": {"roll": 0, "pitch": 0, "yaw": 0}},
    {"p": [-0.3, 0, 0.6], "euler": {"roll": 0, "pitch": 0, "yaw": 0}},
    {"p": [-0.4, 0, 0.6], "euler": {"roll": 0, "pitch": 0, "yaw": 0}},
    {"p": [-0.5, 0, 0.6], "euler": {"roll": 0, "pitch": 0, "yaw": -1.5707963267948966}}
  ]
})";
}  // namespace

TEST_CASE("parse_task accepts the four-configuration line document") {
  const Task t = parse_task_text(kYawLineDoc);
  REQUIRE(t.size() == 4);
  CHECK(t.constraints()[3].yaw.nominal == doctest::Approx(-pi / 2));
  CHECK(t.constraints()[0].position.x() == doctest::Approx(-0.2));
}

TEST_CASE("parse_task rejects malformed documents") {
  CHECK_THROWS_AS(parse_task_text(R"({"name": "x", "constraints": []})"), SchemaError);
  CHECK_THROWS_AS(parse_task_text(R"({"name": "x"})"), SchemaError);
  CHECK_THROWS_AS(
      parse_task_text(
          R"({"constraints": [{"p": [0,0,0], "euler": {"roll": [1, -1], "pitch": 0, "yaw": 0}},
                              {"p": [1,0,0], "euler": {}}]})"),
      SchemaError);
  // only one configuration
  CHECK_THROWS_AS(parse_task_text(R"({"constraints": [{"p": [0,0,0], "euler": {}}]})"),
                  SchemaError);
  // consecutive duplicates
  CHECK_THROWS_AS(
      parse_task_text(
          R"({"constraints": [{"p": [0,0,0], "euler": {}}, {"p": [0,0,0], "euler": {}}]})"),
      SchemaError);
}

TEST_CASE("bounded and free angles pick midpoint nominals") {
  const Task t = parse_task_text(R"({
    "name": "bounded",
    "constraints": [
      {"p": [0, 0, 0], "euler": {"roll": 0, "pitch": 0, "yaw": [-3.141592653589793, 3.141592653589793]}},
      {"p": [0.2, 0, 0], "euler": {"roll": 0, "pitch": 0.5}}
    ]
  })");
  CHECK(t.constraints()[0].yaw.nominal == 0);
  CHECK(t.constraints()[0].yaw.lo == doctest::Approx(-pi));
  CHECK(t.constraints()[0].yaw.hi == doctest::Approx(pi));
  // missing yaw means unconstrained
  CHECK(t.constraints()[1].yaw.lo == doctest::Approx(-2 * pi));
  CHECK(t.constraints()[1].yaw.hi == doctest::Approx(2 * pi));
  CHECK(t.constraints()[1].yaw.nominal == 0);
}

TEST_CASE("explicit nominal must sit inside its bounds") {
  CHECK_THROWS_AS(parse_task_text(R"({
    "constraints": [
      {"p": [0,0,0], "euler": {"roll": 0, "pitch": 0, "yaw": [-1, 1]}, "nominal": [0, 0, 2]},
      {"p": [1,0,0], "euler": {}}
    ]})"),
                  SchemaError);
  const Task ok = parse_task_text(R"({
    "constraints": [
      {"p": [0,0,0], "euler": {"roll": 0, "pitch": 0, "yaw": [-1, 1]}, "nominal": [0, 0, 0.5]},
      {"p": [1,0,0], "euler": {}}
    ]})");
  CHECK(ok.constraints()[0].yaw.nominal == doctest::Approx(0.5));
}

TEST_CASE("config_to_pose") {
  CriticalConfiguration origin;
  const Posed id = config_to_pose(origin);
  CHECK(quat_distance(id.real, Quatd::Identity()) == 0);
  CHECK(position(id).norm() == 0);

  const Task t = yaw_line_task();
  const Posed c1 = config_to_pose(t.constraints()[0]);
  CHECK((position(c1) - Vec3d(-0.2, 0, 0.6)).norm() < 1e-15);
  CHECK(quat_distance(c1.real, Quatd::Identity()) == 0);

  const Posed c4 = config_to_pose(t.constraints()[3]);
  CHECK(quat_distance(c4.real, Quatd(kInvSqrt2, 0, 0, -kInvSqrt2)) < 1e-12);
}

TEST_CASE("segment_feature of the line task") {
  const Task t = yaw_line_task();

  const TaskFeature tail = segment_feature(t, {2, 3});
  REQUIRE(tail.deltas.size() == 1);
  CHECK(quat_distance(tail.deltas[0].rotation, Quatd(0.7, 0, 0, -0.7)) < 0.08);

  const TaskFeature whole = segment_feature(t, {0, 3});
  REQUIRE(whole.deltas.size() == 3);
  const Vec3d dir = whole.deltas[0].translation.normalized();
  CHECK(std::abs(dir.dot(Vec3d(1, 0, 0))) == doctest::Approx(1.0));
  CHECK(whole.deltas[0].translation.norm() == doctest::Approx(0.3));

  CHECK_THROWS_AS(segment_feature(t, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(segment_feature(t, {0, 9}), std::invalid_argument);
}

TEST_CASE("a loop segment yields an identity leading delta") {
  std::vector<CriticalConfiguration> cons(3);
  cons[0].position = Vec3d(0, 0, 0);
  cons[1].position = Vec3d(0.3, 0, 0);
  cons[2].position = Vec3d(0, 0, 0);
  const Task t("loop", cons);
  const TaskFeature f = segment_feature(t, {0, 2});
  CHECK(quat_distance(f.deltas[0].rotation, Quatd::Identity()) == 0);
  CHECK(f.deltas[0].translation.norm() == 0);
}

TEST_CASE("segment features recompose and shift rigidly") {
  std::mt19937_64 rng(61);
  Workspace ws;
  for (int trial = 0; trial < 50; ++trial) {
    const Task t = random_grid_task(rng, ws);
    const TaskFeature f = segment_feature(t, {0, t.size() - 1});
    CHECK(static_cast<int>(f.deltas.size()) == t.size() - 1);
    const Posed goal = config_to_pose(t.constraints().back());
    for (int i = 0; i < t.size() - 1; ++i) {
      const Posed back = apply_delta(config_to_pose(t.constraints()[i]), f.deltas[i]);
      CHECK(quat_distance(back.real, goal.real) < 1e-9);
      CHECK((position(back) - position(goal)).norm() < 1e-9);
    }

    // rigid translation of every configuration leaves the feature unchanged
    const Vec3d shift = demoplan::test::random_vec3(rng);
    std::vector<CriticalConfiguration> moved = t.constraints();
    for (auto& c : moved) c.position += shift;
    const TaskFeature g = segment_feature(Task("moved", moved), {0, t.size() - 1});
    for (std::size_t i = 0; i < f.deltas.size(); ++i) {
      CHECK(quat_distance(f.deltas[i].rotation, g.deltas[i].rotation) < 1e-12);
      CHECK((f.deltas[i].translation - g.deltas[i].translation).norm() < 1e-12);
    }
  }
}

TEST_CASE("task json round trip") {
  const Task t = filling_pouring_task(0.1, -0.1);
  const Task back = parse_task(t.to_json());
  REQUIRE(back.size() == t.size());
  for (int i = 0; i < t.size(); ++i) {
    CHECK((back.constraints()[i].position - t.constraints()[i].position).norm() == 0);
    CHECK(back.constraints()[i].yaw.lo == t.constraints()[i].yaw.lo);
    CHECK(back.constraints()[i].yaw.nominal == t.constraints()[i].yaw.nominal);
  }
}
