#include "demoplan/mapper.hpp"

#include <cmath>
#include <numbers>

namespace demoplan {

Quatd alignment_quat(const Vec3d& from, const Vec3d& to) {
  const double nf = from.norm();
  const double nt = to.norm();
  if (!(nf > 0) || !(nt > 0)) throw GeometryError("alignment_quat: zero direction vector");
  const Vec3d cross = from.cross(to);
  const double cn = cross.norm();
  if (cn <= 1e-9 * nf * nt) {
    if (from.dot(to) >= 0) return Quatd::Identity();
    // antiparallel: flip about the part of world z orthogonal to `from`
    const Vec3d f = from / nf;
    Vec3d axis = Vec3d::UnitZ() - Vec3d::UnitZ().dot(f) * f;
    if (axis.norm() <= 1e-9) axis = Vec3d::UnitX();
    return axis_angle_quat(axis, std::numbers::pi);
  }
  const double angle = std::atan2(cn, from.dot(to));
  return axis_angle_quat(cross, angle);
}

MappedFeature map_feature(const DemoFeature& hd, const TaskFeature& tf, const Allocation& alloc,
                          double zero_translation_epsilon) {
  if (tf.deltas.empty() || hd.deltas.empty() || alloc.pairs.empty()) {
    throw std::invalid_argument("map_feature: empty feature or allocation");
  }
  MappedFeature mf;
  mf.demo = hd.name;
  mf.deltas.reserve(hd.deltas.size());

  const Vec3d demo_lead = hd.deltas.front().translation;
  const Vec3d task_lead = tf.deltas.front().translation;
  if (task_lead.norm() < zero_translation_epsilon) {
    // pure-rotation segment: hold position at the goal
    for (const auto& d : hd.deltas) {
      mf.deltas.push_back(Deltad{d.rotation, Vec3d::Zero()});
    }
    return mf;
  }
  if (demo_lead.norm() < zero_translation_epsilon) {
    throw GeometryError("map_feature: demonstration has no leading translation to scale");
  }
  const Quatd align = alignment_quat(demo_lead, task_lead);
  const double scale = task_lead.norm() / demo_lead.norm();
  for (const auto& d : hd.deltas) {
    mf.deltas.push_back(Deltad{d.rotation, scale * rotate_vector(align, d.translation)});
  }
  return mf;
}

std::vector<Posed> reconstruct_plan(const Posed& goal, const MappedFeature& mf) {
  std::vector<Posed> waypoints;
  waypoints.reserve(mf.deltas.size());
  const Vec3d goal_p = position(goal);
  for (const auto& d : mf.deltas) {
    waypoints.push_back(
        pose_from<double>(goal_p - d.translation, Quatd(goal.real * d.rotation.conjugate())));
  }
  return waypoints;
}

Json plan_to_json(const MotionPlan& plan) {
  Json waypoints = Json::array();
  for (const auto& wp : plan.waypoints) waypoints.push_back(to_json(wp));
  Json provenance = Json::array();
  for (const auto& p : plan.provenance) {
    provenance.push_back(
        {{"segment", Json::array({p.segment.start + 1, p.segment.end + 1})}, {"demo", p.demo}});
  }
  return Json{{"task", plan.task}, {"waypoints", waypoints}, {"provenance", provenance}};
}

MotionPlan plan_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("waypoints") || !j["waypoints"].is_array()) {
    throw SchemaError("plan file: expected {\"task\", \"waypoints\", \"provenance\"}");
  }
  MotionPlan plan;
  plan.task = j.value("task", "plan");
  for (const auto& wp : j["waypoints"]) plan.waypoints.push_back(pose_from_json(wp, "plan waypoint"));
  if (plan.waypoints.empty()) throw SchemaError("plan file: empty waypoint list");
  for (const auto& p : j.value("provenance", Json::array())) {
    SegmentProvenance sp;
    sp.segment.start = p.at("segment").at(0).get<int>() - 1;
    sp.segment.end = p.at("segment").at(1).get<int>() - 1;
    sp.demo = p.value("demo", "");
    plan.provenance.push_back(sp);
  }
  return plan;
}

CoverageReport coverage_check(const Task& task, const Library& lib, const SimilarityConfig& cfg) {
  const int n = task.size();
  // matched[j][k]: some feature covers configurations j..k directly
  std::vector<std::vector<bool>> matched(n, std::vector<bool>(n, false));
  for (int j = 0; j + 1 < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const TaskFeature tf = segment_feature(task, {j, k});
      for (int i = 0; i < lib.size() && !matched[j][k]; ++i) {
        matched[j][k] = is_semantically_similar(tf, lib.at(i), cfg).has_value();
      }
    }
  }
  // coverable[j][k]: j..k splits into directly matched pieces
  std::vector<std::vector<bool>> coverable = matched;
  for (int len = 2; len < n; ++len) {
    for (int j = 0; j + len < n; ++j) {
      const int k = j + len;
      for (int m = j + 1; m < k && !coverable[j][k]; ++m) {
        coverable[j][k] = coverable[j][m] && coverable[m][k];
      }
    }
  }
  CoverageReport report;
  report.plannable = coverable[0][n - 1];
  if (report.plannable) return report;
  for (int j = 0; j + 1 < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (coverable[j][k]) continue;
      bool minimal = true;
      for (int jj = j; jj < k && minimal; ++jj) {
        for (int kk = jj + 1; kk <= k && minimal; ++kk) {
          if (jj == j && kk == k) continue;
          if (!coverable[jj][kk]) minimal = false;
        }
      }
      if (minimal) report.uncovered.push_back({j, k});
    }
  }
  return report;
}

}  // namespace demoplan
