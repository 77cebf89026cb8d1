#pragma once

#include <random>
#include <string>
#include <vector>

#include "demoplan/demo.hpp"
#include "demoplan/se3.hpp"
#include "demoplan/task.hpp"

namespace demoplan {

/// Synthetic stand-ins for the kinesthetic recordings behind the stock
/// library: two twisting motions (+-90 degrees about the tool z while moving
/// forward), filling/pouring (+-90 about y along a diagonal), and a stacking
/// arc with constant orientation.
std::vector<Demonstration> builtin_demos();

/// The follow-up demonstration: 90 degrees about the body x axis while
/// advancing; covers wrist-roll segments the stock five cannot.
Demonstration rolling_demo();

Library build_builtin_library(bool include_rolling = false);

/// Straight-line demonstration with a single-axis rotation sweep.
Demonstration sweep_demo(const std::string& name, const Vec3d& start, const Vec3d& displacement,
                         const Vec3d& axis, double angle, int waypoints = 4);

Task transferring_task(double z);
Task filling_pouring_task(double x, double y);
Task assembling_task();
/// The four-configuration straight-line task with a final -90 degree yaw.
Task yaw_line_task();

struct Workspace {
  Vec3d lo{-0.25, -0.25, 0.1};
  Vec3d hi{0.25, 0.25, 0.6};
};

/// Training task: positions uniform in the workspace, Euler angles drawn from
/// the five-value grid {-pi, -pi/2, 0, pi/2, pi}.
Task random_grid_task(std::mt19937_64& rng, const Workspace& ws, int configurations = 4,
                      const std::string& name = "training-task");

/// Random-walk demonstration with bounded per-step rotations.
Demonstration random_demo(std::mt19937_64& rng, const std::string& name, int waypoints);

}  // namespace demoplan
