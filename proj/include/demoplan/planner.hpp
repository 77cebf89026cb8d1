#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "demoplan/demo.hpp"
#include "demoplan/json_io.hpp"
#include "demoplan/mapper.hpp"
#include "demoplan/similarity.hpp"
#include "demoplan/task.hpp"

namespace demoplan {

/// Planner state: position in the task plus a canonical key quantized from
/// the next (up to two) consecutive-pair features, so structurally alike
/// tasks share table entries regardless of where they sit in the workspace.
struct PlannerState {
  int index{0};
  std::string key;
  int library_version{0};
};

/// Cover configurations index..advance_to with demonstration `demo`.
struct PlannerAction {
  int demo{0};
  int advance_to{0};
};

struct TrainingConfig {
  double gamma{0.9};
  double epsilon{0.8};
  double learning_rate{0.5};
  int episodes{100};  // per task
  double r_fail{-1e6};
  std::uint64_t seed{0};
};

/// Tabular action-value store. Actions are keyed by (demo, advance steps);
/// state keys are position-agnostic, so the advance is stored relative.
class QTable {
 public:
  struct ActionKey {
    int demo{0};
    int steps{0};
    auto operator<=>(const ActionKey&) const = default;
  };
  using Row = std::map<ActionKey, double>;

  double value(const std::string& key, const ActionKey& a) const;
  void set(const std::string& key, const ActionKey& a, double v);
  const std::map<std::string, Row>& entries() const { return entries_; }

  int library_version() const { return library_version_; }
  void bind_library(int version) { library_version_ = version; }
  const TrainingConfig& hyper() const { return hyper_; }
  void set_hyper(const TrainingConfig& tc) { hyper_ = tc; }

  Json to_json() const;
  static QTable from_json(const Json& j);

 private:
  std::map<std::string, Row> entries_;
  TrainingConfig hyper_;
  int library_version_{0};
};

void save_qtable(const QTable& q, const std::string& path);
QTable load_qtable(const std::string& path);

/// One-step Q-learning backup with a constant learning rate; a terminal
/// successor contributes max_next = 0.
double q_update(double current, double reward, double max_next, const TrainingConfig& cfg);

PlannerState encode_state(const Task& task, int j, const Library& lib);

std::vector<PlannerAction> legal_actions(const Task& task, int j, const Library& lib,
                                         const SimilarityConfig& cfg);

/// Negated sum of rotation distances over the allocated pairs for a legal
/// action; r_fail otherwise.
double reward(const Task& task, const Library& lib, int j, const PlannerAction& a,
              const std::optional<Allocation>& alloc, double r_fail);

struct RewardPoint {
  int episode{0};
  double avg_greedy{0};    // accumulated reward of the greedy plan, task-averaged
  double avg_behavior{0};  // accumulated reward collected by the exploring episode
};
using RewardCurve = std::vector<RewardPoint>;

void save_reward_curve(const RewardCurve& curve, const std::string& path);

/// Epsilon-greedy episodes over every task against a shared table; pass a
/// previous table to retrain incrementally after the library grew.
std::pair<QTable, RewardCurve> train(const std::vector<Task>& tasks, const Library& lib,
                                     const TrainingConfig& tc, const SimilarityConfig& sc,
                                     const QTable* warm_start = nullptr);

struct DemoRequest {
  std::vector<TaskSegment> blocking;
  std::vector<TaskFeature> features;  // one per blocking segment
  Json to_json(const Task& task) const;
};

using PlanOutcome = std::variant<MotionPlan, DemoRequest>;

/// Greedy plan per the trained table: per chosen action the demonstration is
/// mapped onto its segment and the reconstructions are concatenated and
/// densified. Requests a demonstration when some reached state has no legal
/// action.
PlanOutcome generate_plan(const Task& task, const Library& lib, const QTable& q,
                          const SimilarityConfig& sc);

struct GreedyRollout {
  bool success{false};
  double accumulated{0};  // undiscounted, r_fail added when stuck
  double discounted{0};
  std::vector<std::pair<TaskSegment, int>> segmentation;  // (segment, demo index)
};

/// Deterministic rollout of the greedy policy restricted to legal actions.
GreedyRollout greedy_rollout(const Task& task, const Library& lib, const QTable& q,
                             const SimilarityConfig& sc);

struct OracleResult {
  double discounted{0};
  double accumulated{0};
  std::vector<std::pair<TaskSegment, int>> segmentation;
};

/// Brute force over every segmentation and demonstration assignment,
/// maximizing the discounted return the planner itself is trained on.
/// Desk scale only (n <= 8, h <= 8); absent when no covering exists.
std::optional<OracleResult> exhaustive_oracle(const Task& task, const Library& lib,
                                              const SimilarityConfig& sc, double gamma);

}  // namespace demoplan
