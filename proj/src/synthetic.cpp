#include "demoplan/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace demoplan {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kDiag = std::numbers::sqrt2 / 2;

Demonstration finish(Demonstration d) {
  d.poses = densify_poses(std::span<const Posed>(d.poses));
  return d;
}

}  // namespace

Demonstration sweep_demo(const std::string& name, const Vec3d& start, const Vec3d& displacement,
                         const Vec3d& axis, double angle, int waypoints) {
  Demonstration d;
  d.name = name;
  for (int i = 0; i < waypoints; ++i) {
    const double s = static_cast<double>(i) / (waypoints - 1);
    const Quatd r = angle == 0.0 ? Quatd::Identity() : axis_angle_quat(axis, s * angle);
    d.poses.push_back(pose_from<double>(start + s * displacement, r));
  }
  return finish(d);
}

std::vector<Demonstration> builtin_demos() {
  std::vector<Demonstration> demos;
  demos.push_back(sweep_demo("twisting-1", {0, 0, 0}, {0.3, 0, 0}, Vec3d::UnitZ(), -pi / 2));
  demos.push_back(sweep_demo("twisting-2", {0, 0, 0}, {0.3, 0, 0}, Vec3d::UnitZ(), pi / 2));
  demos.push_back(sweep_demo("filling", {0, 0, 0.3}, Vec3d(0.3 * kDiag, 0, -0.3 * kDiag),
                             Vec3d::UnitY(), pi / 2));
  demos.push_back(sweep_demo("pouring", {0.3, 0, 0}, Vec3d(-0.3 * kDiag, 0, 0.3 * kDiag),
                             Vec3d::UnitY(), -pi / 2));
  // stacking: constant orientation, descending onto the goal along a shallow
  // arc that bows up off the approach chord and swerves sideways around the
  // stack, the way a recorded carry does
  Demonstration stacking;
  stacking.name = "stacking";
  const Vec3d goal(0.4, 0, 0.3);
  const Vec3d start = goal - 0.4 * Vec3d(kDiag, 0, -kDiag);
  const Vec3d bow(kDiag, 0, kDiag);  // unit normal of the chord in the x-z plane
  stacking.poses.push_back(pose_from<double>(start, Quatd::Identity()));
  stacking.poses.push_back(pose_from<double>(
      start + 0.45 * (goal - start) + 0.03 * bow + Vec3d(0, 0.13, 0), Quatd::Identity()));
  stacking.poses.push_back(pose_from<double>(
      start + 0.8 * (goal - start) + 0.02 * bow + Vec3d(0, 0.12, 0), Quatd::Identity()));
  stacking.poses.push_back(pose_from<double>(goal, Quatd::Identity()));
  demos.push_back(finish(stacking));
  return demos;
}

Demonstration rolling_demo() {
  return sweep_demo("rolling", {0, 0, 0}, {0.2, 0, 0}, Vec3d::UnitX(), pi / 2);
}

Library build_builtin_library(bool include_rolling) {
  Library lib;
  for (const auto& d : builtin_demos()) lib.add(extract_feature(d));
  if (include_rolling) lib.add(extract_feature(rolling_demo()));
  return lib;
}

namespace {

CriticalConfiguration pinned(const Vec3d& p, double roll, double pitch, double yaw) {
  CriticalConfiguration c;
  c.position = p;
  c.roll = {roll, roll, roll};
  c.pitch = {pitch, pitch, pitch};
  c.yaw = {yaw, yaw, yaw};
  return c;
}

}  // namespace

Task transferring_task(double z) {
  std::vector<CriticalConfiguration> cons;
  cons.push_back(pinned({-0.5, 0, 0.3}, 0, -pi / 2, 0));
  cons.push_back(pinned({-0.4, 0.2, z}, 0, -pi / 2, 0));
  cons.push_back(pinned({0, 0.2, z}, 0, -pi / 2, 0));
  cons.push_back(pinned({0.1, 0, 0.3}, 0, -pi / 2, 0));
  return Task("transferring", std::move(cons));
}

Task filling_pouring_task(double x, double y) {
  std::vector<CriticalConfiguration> cons;
  cons.push_back(pinned({-0.4, -0.1, 0}, 0, -pi, 0));
  for (const Vec3d& p : {Vec3d(-0.5, 0.1, 0.1), Vec3d(-0.7, -0.1, 0.1), Vec3d(x, y, 0.1)}) {
    CriticalConfiguration c = pinned(p, 0, -pi / 2, 0);
    c.yaw = {-pi, pi, 0};  // upright is required, the heading is free
    cons.push_back(c);
  }
  cons.push_back(pinned({x, y, 0}, pi / 2, 0, -pi / 2));
  return Task("filling-and-pouring", std::move(cons));
}

Task assembling_task() {
  std::vector<CriticalConfiguration> cons;
  cons.push_back(pinned({0, 0.5, 0.6}, -pi / 2, 0, pi / 2));
  cons.push_back(pinned({0.1, 0.5, 0.6}, 0, -pi / 2, 0));
  cons.push_back(pinned({0.5, 0.1, 0.6}, 0, -pi / 2, pi / 2));
  cons.push_back(pinned({0.5, 0, 0.6}, pi, 0, -pi / 2));
  return Task("assembling", std::move(cons));
}

Task yaw_line_task() {
  std::vector<CriticalConfiguration> cons;
  cons.push_back(pinned({-0.2, 0, 0.6}, 0, 0, 0));
  cons.push_back(pinned({-0.3, 0, 0.6}, 0, 0, 0));
  cons.push_back(pinned({-0.4, 0, 0.6}, 0, 0, 0));
  cons.push_back(pinned({-0.5, 0, 0.6}, 0, 0, -pi / 2));
  return Task("yaw-line", std::move(cons));
}

Task random_grid_task(std::mt19937_64& rng, const Workspace& ws, int configurations,
                      const std::string& name) {
  const double grid[5] = {-pi, -pi / 2, 0, pi / 2, pi};
  std::uniform_int_distribution<int> pick(0, 4);
  auto sample_pos = [&] {
    Vec3d p;
    for (int i = 0; i < 3; ++i) {
      p[i] = std::uniform_real_distribution<double>(ws.lo[i], ws.hi[i])(rng);
    }
    return p;
  };
  std::vector<CriticalConfiguration> cons;
  for (int i = 0; i < configurations; ++i) {
    Vec3d p = sample_pos();
    if (!cons.empty()) {
      while ((p - cons.back().position).norm() < 1e-3) p = sample_pos();
    }
    cons.push_back(pinned(p, grid[pick(rng)], grid[pick(rng)], grid[pick(rng)]));
  }
  return Task(name, std::move(cons));
}

Demonstration random_demo(std::mt19937_64& rng, const std::string& name, int waypoints) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> step(0.05, 0.3);
  std::uniform_real_distribution<double> turn(0.0, 0.35);
  auto random_axis = [&] {
    Vec3d a;
    do {
      a = Vec3d(unit(rng), unit(rng), unit(rng));
    } while (a.norm() < 1e-3);
    return a;
  };
  Demonstration d;
  d.name = name;
  Vec3d p(0.25 * unit(rng), 0.25 * unit(rng), 0.3 + 0.2 * unit(rng));
  Quatd r = Quatd::Identity();
  d.poses.push_back(pose_from(p, r));
  for (int i = 1; i < waypoints; ++i) {
    p += step(rng) * random_axis().normalized();
    r = canonical(Quatd(r * axis_angle_quat(random_axis(), turn(rng))));
    d.poses.push_back(pose_from(p, r));
  }
  return finish(d);
}

}  // namespace demoplan
