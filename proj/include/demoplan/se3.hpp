#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace demoplan {

template <typename Scalar> using Quat = Eigen::Quaternion<Scalar>;
template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Quatd = Quat<double>;
using Vec3d = Vec3<double>;

inline constexpr double kUnitTol = 1e-9;        // |norm - 1| bound for unit checks
inline constexpr double kRenormDrift = 1e-12;   // renormalize composites beyond this
inline constexpr double kMaxStepAngle = 0.175;  // ~10 deg; waypoint densification bound

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hamilton product. Eigen's quaternion product is exactly this, for unit and
/// non-unit operands alike.
template <typename S>
Quat<S> hamilton(const Quat<S>& a, const Quat<S>& b) {
  return a * b;
}

template <typename S>
Quat<S> conjugate(const Quat<S>& q) {
  return q.conjugate();
}

template <typename S>
S quat_norm(const Quat<S>& q) {
  return q.coeffs().norm();
}

template <typename S>
bool is_unit(const Quat<S>& q, S tol = S(kUnitTol)) {
  return std::abs(quat_norm(q) - S(1)) <= tol;
}

/// Representative with non-negative w; a w of exactly zero is disambiguated by
/// the first nonzero imaginary component. q and -q encode the same rotation.
template <typename S>
Quat<S> canonical(const Quat<S>& q) {
  S lead = q.w();
  if (lead == S(0)) lead = q.x();
  if (lead == S(0)) lead = q.y();
  if (lead == S(0)) lead = q.z();
  if (lead < S(0)) return Quat<S>(-q.w(), -q.x(), -q.y(), -q.z());
  return q;
}

template <typename S>
Quat<S> normalized(const Quat<S>& q) {
  const S n = quat_norm(q);
  if (!(n > S(0)) || !std::isfinite(n)) {
    throw GeometryError("cannot normalize a zero or non-finite quaternion");
  }
  Quat<S> r = q;
  r.coeffs() /= n;
  return canonical(r);
}

/// min(|q1 - q2|, |q1 + q2|): distance between unit quaternions in [0, sqrt 2],
/// invariant under the antipodal double cover.
template <typename S>
S quat_distance(const Quat<S>& a, const Quat<S>& b) {
  return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

/// Relative rotation angle in radians, in [0, pi].
template <typename S>
S rotation_angle(const Quat<S>& a, const Quat<S>& b) {
  return a.angularDistance(b);
}

template <typename S>
struct EulerAngles {
  S roll{};
  S pitch{};
  S yaw{};
};
using EulerAnglesd = EulerAngles<double>;

/// Intrinsic Z(yaw)-Y(pitch)-X(roll) composition.
template <typename S>
Quat<S> euler_to_quat(const EulerAngles<S>& e) {
  const Quat<S> q = Eigen::AngleAxis<S>(e.yaw, Vec3<S>::UnitZ()) *
                    Eigen::AngleAxis<S>(e.pitch, Vec3<S>::UnitY()) *
                    Eigen::AngleAxis<S>(e.roll, Vec3<S>::UnitX());
  return canonical(q);
}

/// cos(angle/2) + axis sin(angle/2), with the axis normalized first.
template <typename S>
Quat<S> axis_angle_quat(const Vec3<S>& axis, S angle) {
  const S n = axis.norm();
  if (!(n > S(0))) throw GeometryError("axis_angle_quat: degenerate zero axis");
  return canonical(Quat<S>(Eigen::AngleAxis<S>(angle, Vec3<S>(axis / n))));
}

/// Quaternion sandwich r (0, v) r*.
template <typename S>
Vec3<S> rotate_vector(const Quat<S>& r, const Vec3<S>& v) {
  return r * v;
}

/// Unit dual quaternion: real part is the rotation, dual = 0.5 (0, p) x real
/// for base-frame position p. The dual unit is carried structurally by the
/// (real, dual) pair.
template <typename S>
struct Pose {
  Quat<S> real{S(1), S(0), S(0), S(0)};
  Quat<S> dual{S(0), S(0), S(0), S(0)};
};
using Posed = Pose<double>;

namespace detail {

// Restores |real| = 1, the Pluecker orthogonality and the sign convention
// after products; long chains otherwise accumulate drift.
template <typename S>
Pose<S> tidy(Pose<S> d) {
  const S n = quat_norm(d.real);
  if (std::abs(n - S(1)) > S(kRenormDrift)) {
    d.real.coeffs() /= n;
    d.dual.coeffs() /= n;
  }
  const S plk = d.real.coeffs().dot(d.dual.coeffs());
  if (std::abs(plk) > S(kRenormDrift)) {
    d.dual.coeffs() -= plk * d.real.coeffs();
  }
  S lead = d.real.w();
  if (lead == S(0)) lead = d.real.x();
  if (lead == S(0)) lead = d.real.y();
  if (lead == S(0)) lead = d.real.z();
  if (lead < S(0)) {
    d.real.coeffs() = -d.real.coeffs();
    d.dual.coeffs() = -d.dual.coeffs();
  }
  return d;
}

}  // namespace detail

template <typename S>
Pose<S> pose_identity() {
  return Pose<S>{};
}

template <typename S>
Pose<S> pose_from(const Vec3<S>& p, const Quat<S>& r) {
  Pose<S> d;
  d.real = normalized(r);
  const Quat<S> t(S(0), p.x(), p.y(), p.z());
  d.dual = t * d.real;
  d.dual.coeffs() *= S(0.5);
  return d;
}

template <typename S>
Vec3<S> position(const Pose<S>& d) {
  return S(2) * (d.dual * d.real.conjugate()).vec();
}

template <typename S>
const Quat<S>& rotation(const Pose<S>& d) {
  return d.real;
}

template <typename S>
std::pair<Vec3<S>, Quat<S>> pose_to(const Pose<S>& d) {
  if (!is_unit(d.real)) throw GeometryError("pose_to: non-unit real part");
  return {position(d), d.real};
}

template <typename S>
Pose<S> pose_compose(const Pose<S>& a, const Pose<S>& b) {
  Pose<S> out;
  out.real = a.real * b.real;
  out.dual.coeffs() = (a.real * b.dual).coeffs() + (a.dual * b.real).coeffs();
  return detail::tidy(out);
}

template <typename S>
Pose<S> pose_conjugate(const Pose<S>& d) {
  return detail::tidy(Pose<S>{d.real.conjugate(), d.dual.conjugate()});
}

/// D_from^* x D_goal: the dual-quaternion relative transform.
template <typename S>
Pose<S> relative_pose(const Pose<S>& from, const Pose<S>& goal) {
  return pose_compose(pose_conjugate(from), goal);
}

/// One step of relative motion toward a goal configuration. `rotation` is the
/// moving-frame relative rotation r_from^* x r_goal; `translation` is the
/// base-frame displacement p_goal - p_from. Rotation closeness and translation
/// direction are judged independently downstream, and mapped plans must stay
/// pinned at both segment endpoints, which this split preserves exactly.
template <typename S>
struct Delta {
  Quat<S> rotation{S(1), S(0), S(0), S(0)};
  Vec3<S> translation{Vec3<S>::Zero()};
};
using Deltad = Delta<double>;

template <typename S>
Delta<S> make_delta(const Pose<S>& from, const Pose<S>& goal) {
  Delta<S> d;
  d.rotation = normalized(Quat<S>(from.real.conjugate() * goal.real));
  d.translation = position(goal) - position(from);
  return d;
}

/// Recomposition: apply_delta(D, make_delta(D, G)) == G.
template <typename S>
Pose<S> apply_delta(const Pose<S>& from, const Delta<S>& d) {
  return pose_from<S>(position(from) + d.translation, Quat<S>(from.real * d.rotation));
}

/// Deltas of every configuration against the final one; size() - 1 entries.
template <typename S>
std::vector<Delta<S>> deltas_to_goal(std::span<const Pose<S>> poses) {
  if (poses.size() < 2) throw GeometryError("deltas_to_goal: need at least two poses");
  std::vector<Delta<S>> out;
  out.reserve(poses.size() - 1);
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    out.push_back(make_delta(poses[i], poses.back()));
  }
  return out;
}

/// Shortest-arc rotation blend with linear position blend, t in [0, 1].
template <typename S>
Pose<S> interpolate_pose(const Pose<S>& a, const Pose<S>& b, S t) {
  Quat<S> rel = a.real.conjugate() * b.real;
  if (rel.w() < S(0)) rel.coeffs() = -rel.coeffs();
  const Eigen::AngleAxis<S> aa(rel);
  const Quat<S> r = a.real * Quat<S>(Eigen::AngleAxis<S>(t * aa.angle(), aa.axis()));
  const Vec3<S> p = (S(1) - t) * position(a) + t * position(b);
  return pose_from<S>(p, r);
}

/// Inserts interpolated waypoints so consecutive rotations stay strictly
/// below max_angle radians. Existing waypoints are kept verbatim.
template <typename S>
std::vector<Pose<S>> densify_poses(std::span<const Pose<S>> poses, S max_angle = S(kMaxStepAngle)) {
  std::vector<Pose<S>> out;
  if (poses.empty()) return out;
  out.push_back(poses.front());
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    const Pose<S>& a = poses[i];
    const Pose<S>& b = poses[i + 1];
    const S angle = rotation_angle(a.real, b.real);
    int steps = 1;
    while (angle / S(steps) >= max_angle) ++steps;
    for (int s = 1; s < steps; ++s) {
      out.push_back(interpolate_pose(a, b, S(s) / S(steps)));
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace demoplan
