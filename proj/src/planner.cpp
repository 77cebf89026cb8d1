#include "demoplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace demoplan {

namespace {

constexpr int kLookahead = 2;            // consecutive-pair features per key
constexpr double kZeroDirection = 1e-9;  // below this a pair step has no direction
constexpr double kQTieTol = 1e-9;        // Q values this close count as equal

// Argmax order: clearly larger value wins; value ties go to the longest
// stride, then the lowest demonstration index. Zero-reward covers of one
// segment differ only by float noise between split and unsplit strides, so
// plain argmax would segment arbitrarily.
bool action_improves(double v, int demo, int advance, double best_v, int best_demo,
                     int best_advance) {
  if (v > best_v + kQTieTol) return true;
  if (v < best_v - kQTieTol) return false;
  if (advance != best_advance) return advance > best_advance;
  return demo < best_demo;
}

const std::vector<Quatd>& rotation_codebook() {
  static const std::vector<Quatd> codebook = [] {
    constexpr double pi = std::numbers::pi;
    const double grid[5] = {-pi, -pi / 2, 0, pi / 2, pi};
    std::vector<Quatd> out;
    for (double roll : grid) {
      for (double pitch : grid) {
        for (double yaw : grid) {
          const Quatd q = euler_to_quat<double>({roll, pitch, yaw});
          bool seen = false;
          for (const auto& c : out) {
            if (quat_distance(c, q) < 1e-9) {
              seen = true;
              break;
            }
          }
          if (!seen) out.push_back(q);
        }
      }
    }
    return out;
  }();
  return codebook;
}

const std::vector<Vec3d>& direction_codebook() {
  static const std::vector<Vec3d> codebook = [] {
    std::vector<Vec3d> out;
    for (int x = -1; x <= 1; ++x) {
      for (int y = -1; y <= 1; ++y) {
        for (int z = -1; z <= 1; ++z) {
          if (x == 0 && y == 0 && z == 0) continue;
          out.push_back(Vec3d(x, y, z).normalized());
        }
      }
    }
    return out;
  }();
  return codebook;
}

int quantize_rotation(const Quatd& q) {
  const auto& codebook = rotation_codebook();
  int best = 0;
  double best_d = quat_distance(codebook[0], q);
  for (std::size_t i = 1; i < codebook.size(); ++i) {
    const double d = quat_distance(codebook[i], q);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int quantize_direction(const Vec3d& v) {
  if (v.norm() < kZeroDirection) return -1;
  const Vec3d u = v.normalized();
  const auto& codebook = direction_codebook();
  int best = 0;
  double best_dot = codebook[0].dot(u);
  for (std::size_t i = 1; i < codebook.size(); ++i) {
    const double d = codebook[i].dot(u);
    if (d > best_dot) {
      best_dot = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::string state_key(const Task& task, int j) {
  const int n = task.size();
  std::ostringstream key;
  key << "n" << (n - 1 - j);
  for (int p = 0; p < kLookahead && j + p + 1 < n; ++p) {
    const Deltad d =
        make_delta(config_to_pose(task.constraints()[j + p]), config_to_pose(task.constraints()[j + p + 1]));
    key << "|r" << quantize_rotation(d.rotation);
    const int dir = quantize_direction(d.translation);
    if (dir < 0) {
      key << "dZ";
    } else {
      key << "d" << dir;
    }
  }
  return key.str();
}

// Per-task memo of segment features, match results and state keys.
class TaskMatcher {
 public:
  TaskMatcher(const Task& task, const Library& lib, const SimilarityConfig& cfg)
      : task_(task), lib_(lib), cfg_(cfg), n_(task.size()) {
    features_.resize(n_ * n_);
    matches_.resize(n_ * n_ * std::max(lib.size(), 1));
    keys_.resize(n_);
  }

  const Task& task() const { return task_; }
  int size() const { return n_; }

  const TaskFeature& feature(int j, int k) {
    auto& slot = features_[j * n_ + k];
    if (!slot) slot = segment_feature(task_, {j, k});
    return *slot;
  }

  const std::optional<Allocation>& allocation(int j, int k, int demo) {
    auto& slot = matches_[(j * n_ + k) * lib_.size() + demo];
    if (!slot) slot = is_semantically_similar(feature(j, k), lib_.at(demo), cfg_);
    return *slot;
  }

  const std::string& key(int j) {
    auto& slot = keys_[j];
    if (slot.empty()) slot = state_key(task_, j);
    return slot;
  }

  double legal_reward(int j, int k, int demo) {
    const auto& alloc = allocation(j, k, demo);
    double sum = 0;
    const auto& tf = feature(j, k);
    const auto& hd = lib_.at(demo);
    for (const auto& [tj, dl] : alloc->pairs) sum += alpha(hd.deltas[dl], tf.deltas[tj]);
    return -sum;
  }

 private:
  const Task& task_;
  const Library& lib_;
  SimilarityConfig cfg_;
  int n_;
  std::vector<std::optional<TaskFeature>> features_;
  std::vector<std::optional<std::optional<Allocation>>> matches_;
  std::vector<std::string> keys_;
};

// All candidate (demo, advance) pairs at index j; exploration may pick any of
// them and discovers legality by acting.
std::vector<PlannerAction> candidate_actions(int j, int n, int h) {
  std::vector<PlannerAction> out;
  out.reserve(static_cast<std::size_t>(h) * (n - 1 - j));
  for (int i = 0; i < h; ++i) {
    for (int k = j + 1; k < n; ++k) out.push_back({i, k});
  }
  return out;
}

// Bootstrap target over the legal actions at index j. Illegal actions hold
// the failure value at the fixed point anyway, so masking them changes
// nothing converged while keeping the optimistic zero for unvisited legal
// moves. A state with no legal action is worth r_fail: every continuation
// fails.
double bootstrap_value(TaskMatcher& matcher, const Library& lib, const QTable& q, int j,
                       double r_fail) {
  const int n = matcher.size();
  double best = 0;
  bool any = false;
  for (int i = 0; i < lib.size(); ++i) {
    for (int k = j + 1; k < n; ++k) {
      if (!matcher.allocation(j, k, i)) continue;
      const double v = q.value(matcher.key(j), {i, k - j});
      if (!any || v > best) {
        best = v;
        any = true;
      }
    }
  }
  return any ? best : r_fail;
}

}  // namespace

double QTable::value(const std::string& key, const ActionKey& a) const {
  const auto row = entries_.find(key);
  if (row == entries_.end()) return 0;
  const auto it = row->second.find(a);
  return it == row->second.end() ? 0 : it->second;
}

void QTable::set(const std::string& key, const ActionKey& a, double v) { entries_[key][a] = v; }

Json QTable::to_json() const {
  Json entries = Json::array();
  for (const auto& [key, row] : entries_) {
    for (const auto& [action, value] : row) {
      entries.push_back(
          {{"state", key}, {"action", Json::array({action.demo + 1, action.steps})}, {"q", value}});
    }
  }
  Json hyper{{"gamma", hyper_.gamma},
             {"epsilon", hyper_.epsilon},
             {"learning_rate", hyper_.learning_rate},
             {"episodes", hyper_.episodes},
             {"r_fail", hyper_.r_fail},
             {"seed", hyper_.seed},
             {"library_version", library_version_}};
  return Json{{"hyper", hyper}, {"entries", entries}};
}

QTable QTable::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) {
    throw SchemaError("qtable file: expected {\"hyper\", \"entries\"}");
  }
  QTable q;
  const Json hyper = j.value("hyper", Json::object());
  q.hyper_.gamma = hyper.value("gamma", q.hyper_.gamma);
  q.hyper_.epsilon = hyper.value("epsilon", q.hyper_.epsilon);
  q.hyper_.learning_rate = hyper.value("learning_rate", q.hyper_.learning_rate);
  q.hyper_.episodes = hyper.value("episodes", q.hyper_.episodes);
  q.hyper_.r_fail = hyper.value("r_fail", q.hyper_.r_fail);
  q.hyper_.seed = hyper.value("seed", q.hyper_.seed);
  q.library_version_ = hyper.value("library_version", 0);
  for (const auto& e : j["entries"]) {
    const std::string key = e.at("state").get<std::string>();
    const int demo = e.at("action").at(0).get<int>() - 1;
    const int steps = e.at("action").at(1).get<int>();
    const double v = e.at("q").get<double>();
    if (!std::isfinite(v)) throw SchemaError("qtable file: non-finite value");
    q.set(key, {demo, steps}, v);
  }
  return q;
}

void save_qtable(const QTable& q, const std::string& path) { save_json_file(path, q.to_json()); }

QTable load_qtable(const std::string& path) { return QTable::from_json(load_json_file(path)); }

double q_update(double current, double reward, double max_next, const TrainingConfig& cfg) {
  return (1.0 - cfg.learning_rate) * current +
         cfg.learning_rate * (reward + cfg.gamma * max_next);
}

PlannerState encode_state(const Task& task, int j, const Library& lib) {
  if (j < 0 || j >= task.size()) throw std::invalid_argument("encode_state: index out of range");
  return PlannerState{j, state_key(task, j), lib.version()};
}

std::vector<PlannerAction> legal_actions(const Task& task, int j, const Library& lib,
                                         const SimilarityConfig& cfg) {
  std::vector<PlannerAction> out;
  for (int i = 0; i < lib.size(); ++i) {
    for (int k = j + 1; k < task.size(); ++k) {
      if (is_semantically_similar(segment_feature(task, {j, k}), lib.at(i), cfg)) {
        out.push_back({i, k});
      }
    }
  }
  return out;
}

double reward(const Task& task, const Library& lib, int j, const PlannerAction& a,
              const std::optional<Allocation>& alloc, double r_fail) {
  if (!alloc) return r_fail;
  const TaskFeature tf = segment_feature(task, {j, a.advance_to});
  const DemoFeature& hd = lib.at(a.demo);
  double sum = 0;
  for (const auto& [tj, dl] : alloc->pairs) sum += alpha(hd.deltas[dl], tf.deltas[tj]);
  return -sum;
}

namespace {

struct RolloutInternal {
  bool success{false};
  double accumulated{0};
  double discounted{0};
  std::vector<std::pair<TaskSegment, int>> segmentation;
};

RolloutInternal rollout_greedy(TaskMatcher& matcher, const Library& lib, const QTable& q,
                               double gamma, double r_fail) {
  RolloutInternal out;
  const int n = matcher.size();
  int j = 0;
  double discount = 1.0;
  while (j < n - 1) {
    int best_i = -1, best_k = -1;
    double best_v = 0;
    for (int i = 0; i < lib.size(); ++i) {
      for (int k = j + 1; k < n; ++k) {
        if (!matcher.allocation(j, k, i)) continue;
        const double v = q.value(matcher.key(j), {i, k - j});
        if (best_i < 0 || action_improves(v, i, k, best_v, best_i, best_k)) {
          best_i = i;
          best_k = k;
          best_v = v;
        }
      }
    }
    if (best_i < 0) {
      out.accumulated += r_fail;
      out.discounted += discount * r_fail;
      return out;
    }
    const double r = matcher.legal_reward(j, best_k, best_i);
    out.accumulated += r;
    out.discounted += discount * r;
    discount *= gamma;
    out.segmentation.push_back({TaskSegment{j, best_k}, best_i});
    j = best_k;
  }
  out.success = true;
  return out;
}

}  // namespace

std::pair<QTable, RewardCurve> train(const std::vector<Task>& tasks, const Library& lib,
                                     const TrainingConfig& tc, const SimilarityConfig& sc,
                                     const QTable* warm_start) {
  if (tasks.empty()) throw std::invalid_argument("train: no tasks");
  if (lib.size() == 0) throw std::invalid_argument("train: empty library");
  QTable q = warm_start ? *warm_start : QTable{};
  q.set_hyper(tc);
  q.bind_library(lib.version());

  std::mt19937_64 rng(tc.seed);
  std::vector<TaskMatcher> matchers;
  matchers.reserve(tasks.size());
  for (const auto& t : tasks) matchers.emplace_back(t, lib, sc);

  const int h = lib.size();
  RewardCurve curve;
  curve.reserve(tc.episodes);
  for (int episode = 0; episode < tc.episodes; ++episode) {
    double behavior_sum = 0;
    for (auto& matcher : matchers) {
      const int n = matcher.size();
      int j = 0;
      while (j < n - 1) {
        const auto candidates = candidate_actions(j, n, h);
        PlannerAction a{};
        bool chosen = false;
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < tc.epsilon) {
          a = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
          chosen = true;
        } else {
          // exploitation follows the derived policy: argmax over legal actions
          double best = 0;
          for (const auto& c : candidates) {
            if (!matcher.allocation(j, c.advance_to, c.demo)) continue;
            const double v = q.value(matcher.key(j), {c.demo, c.advance_to - j});
            if (!chosen || action_improves(v, c.demo, c.advance_to, best, a.demo, a.advance_to)) {
              best = v;
              a = c;
              chosen = true;
            }
          }
          if (!chosen) {
            a = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
          }
        }
        const auto& alloc = matcher.allocation(j, a.advance_to, a.demo);
        const QTable::ActionKey ak{a.demo, a.advance_to - j};
        const double current = q.value(matcher.key(j), ak);
        if (alloc) {
          const double r = matcher.legal_reward(j, a.advance_to, a.demo);
          const bool terminal = a.advance_to == n - 1;
          const double max_next =
              terminal ? 0.0 : bootstrap_value(matcher, lib, q, a.advance_to, tc.r_fail);
          q.set(matcher.key(j), ak, q_update(current, r, max_next, tc));
          behavior_sum += r;
          j = a.advance_to;
        } else {
          q.set(matcher.key(j), ak, q_update(current, tc.r_fail, 0.0, tc));
          behavior_sum += tc.r_fail;
          break;
        }
      }
    }
    double greedy_sum = 0;
    for (auto& matcher : matchers) {
      greedy_sum += rollout_greedy(matcher, lib, q, tc.gamma, tc.r_fail).accumulated;
    }
    curve.push_back({episode, greedy_sum / static_cast<double>(tasks.size()),
                     behavior_sum / static_cast<double>(tasks.size())});
  }
  return {std::move(q), std::move(curve)};
}

void save_reward_curve(const RewardCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << "episode,avg_reward,avg_behavior_reward\n";
  for (const auto& p : curve) {
    out << p.episode << "," << p.avg_greedy << "," << p.avg_behavior << "\n";
  }
}

GreedyRollout greedy_rollout(const Task& task, const Library& lib, const QTable& q,
                             const SimilarityConfig& sc) {
  TaskMatcher matcher(task, lib, sc);
  const auto r = rollout_greedy(matcher, lib, q, q.hyper().gamma, q.hyper().r_fail);
  return GreedyRollout{r.success, r.accumulated, r.discounted, r.segmentation};
}

Json DemoRequest::to_json(const Task& task) const {
  Json blocking_json = Json::array();
  for (std::size_t i = 0; i < blocking.size(); ++i) {
    Json deltas = Json::array();
    if (i < features.size()) {
      for (const auto& d : features[i].deltas) {
        deltas.push_back(
            {{"r", demoplan::to_json(d.rotation)}, {"t", demoplan::to_json(d.translation)}});
      }
    }
    blocking_json.push_back(
        {{"segment", Json::array({blocking[i].start + 1, blocking[i].end + 1})},
         {"feature", deltas}});
  }
  return Json{{"task", task.name()}, {"demonstration_requested", true}, {"blocking", blocking_json}};
}

PlanOutcome generate_plan(const Task& task, const Library& lib, const QTable& q,
                          const SimilarityConfig& sc) {
  if (q.library_version() != lib.version()) {
    throw std::invalid_argument("generate_plan: table was trained against library version " +
                                std::to_string(q.library_version()) + ", library is at " +
                                std::to_string(lib.version()));
  }
  TaskMatcher matcher(task, lib, sc);
  const auto rollout = rollout_greedy(matcher, lib, q, q.hyper().gamma, q.hyper().r_fail);
  if (!rollout.success) {
    DemoRequest request;
    const auto coverage = coverage_check(task, lib, sc);
    if (!coverage.uncovered.empty()) {
      request.blocking = coverage.uncovered;
    } else {
      // coverable but the table steered into a dead end; report the frontier
      int j = 0;
      for (const auto& [seg, demo] : rollout.segmentation) j = seg.end;
      for (int k = j + 1; k < task.size(); ++k) request.blocking.push_back({j, k});
    }
    for (const auto& seg : request.blocking) {
      request.features.push_back(segment_feature(task, seg));
    }
    return request;
  }
  MotionPlan plan;
  plan.task = task.name();
  for (const auto& [seg, demo] : rollout.segmentation) {
    const auto& alloc = matcher.allocation(seg.start, seg.end, demo);
    const MappedFeature mf =
        map_feature(lib.at(demo), matcher.feature(seg.start, seg.end), *alloc,
                    sc.zero_translation_epsilon);
    const Posed goal = config_to_pose(task.constraints()[seg.end]);
    const auto waypoints = reconstruct_plan(goal, mf);
    for (const auto& wp : waypoints) {
      if (!plan.waypoints.empty()) {
        const Posed& last = plan.waypoints.back();
        if (quat_distance(last.real, wp.real) < 1e-12 &&
            (position(last) - position(wp)).norm() < 1e-12) {
          continue;
        }
      }
      plan.waypoints.push_back(wp);
    }
    plan.provenance.push_back({seg, lib.at(demo).name, *alloc});
  }
  plan.waypoints = densify_poses(std::span<const Posed>(plan.waypoints));
  return plan;
}

std::optional<OracleResult> exhaustive_oracle(const Task& task, const Library& lib,
                                              const SimilarityConfig& sc, double gamma) {
  if (task.size() > 8 || lib.size() > 8) {
    throw std::invalid_argument("exhaustive_oracle: desk scale only (n <= 8, h <= 8)");
  }
  TaskMatcher matcher(task, lib, sc);
  const int n = task.size();
  struct Entry {
    bool feasible{false};
    double value{0};
    int demo{-1};
    int next{-1};
  };
  std::vector<Entry> best(n);
  best[n - 1] = {true, 0.0, -1, -1};
  for (int j = n - 2; j >= 0; --j) {
    for (int i = 0; i < lib.size(); ++i) {
      for (int k = j + 1; k < n; ++k) {
        if (!best[k].feasible) continue;
        if (!matcher.allocation(j, k, i)) continue;
        const double v = matcher.legal_reward(j, k, i) + gamma * best[k].value;
        if (!best[j].feasible || v > best[j].value) {
          best[j] = {true, v, i, k};
        }
      }
    }
  }
  if (!best[0].feasible) return std::nullopt;
  OracleResult out;
  out.discounted = best[0].value;
  int j = 0;
  while (j < n - 1) {
    const Entry& e = best[j];
    out.segmentation.push_back({TaskSegment{j, e.next}, e.demo});
    out.accumulated += matcher.legal_reward(j, e.next, e.demo);
    j = e.next;
  }
  return out;
}

}  // namespace demoplan
