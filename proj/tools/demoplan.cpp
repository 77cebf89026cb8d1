// demoplan: learn task-space motion plans from demonstration features.
//
// Subcommands: demo-import, train, plan, ik, reproduce. Exit codes are a
// stable contract: 0 success, 1 input or computation error, 2 a reproduce
// assertion failed, 3 an additional demonstration is requested.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "demoplan/config.hpp"
#include "demoplan/demo.hpp"
#include "demoplan/ik.hpp"
#include "demoplan/mapper.hpp"
#include "demoplan/planner.hpp"
#include "demoplan/robot.hpp"
#include "demoplan/similarity.hpp"
#include "demoplan/synthetic.hpp"
#include "demoplan/task.hpp"

namespace {

using namespace demoplan;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kCheckFailed = 2;
constexpr int kDemoRequested = 3;

std::string segment_name(const TaskSegment& s) {
  return "con_" + std::to_string(s.start + 1) + "..con_" + std::to_string(s.end + 1);
}

struct Options {
  std::optional<std::string> config;
  std::string robot;
  std::string library;
  std::string task;
  std::string qtable;
  std::string out;
  std::string demo;
  std::string name;
  std::string init_qtable;
  std::string q0;
  std::string curve;
  std::string limits_out;
  std::vector<std::string> task_files;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::optional<int> tasks_n;
  std::optional<double> delta_alpha;
  std::optional<double> delta_beta;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::optional<double> alpha_lr;
  double ik_dt = 0.1;
  double ik_damping = 1e-6;
  std::string reproduce_case;
};

ScenarioConfig effective_config(const Options& o) {
  ScenarioConfig cfg = load_scenario(o.config);
  if (!o.robot.empty()) cfg.robot_path = o.robot;
  if (!o.library.empty()) cfg.library_path = o.library;
  if (o.seed) cfg.training.seed = *o.seed;
  if (o.episodes) cfg.training.episodes = *o.episodes;
  if (o.tasks_n) cfg.tasks_n = *o.tasks_n;
  if (o.delta_alpha) cfg.similarity.delta_alpha = *o.delta_alpha;
  if (o.delta_beta) cfg.similarity.delta_beta = *o.delta_beta;
  if (o.gamma) cfg.training.gamma = *o.gamma;
  if (o.epsilon) cfg.training.epsilon = *o.epsilon;
  if (o.alpha_lr) cfg.training.learning_rate = *o.alpha_lr;
  return cfg;
}

int cmd_demo_import(const Options& o) {
  const ScenarioConfig cfg = effective_config(o);
  if (cfg.library_path.empty()) {
    std::cerr << "error: no library path (give --library or a scenario file)\n";
    return kError;
  }
  Library lib;
  if (fs::exists(cfg.library_path)) lib = load_library(cfg.library_path);
  std::optional<RobotModel> robot;
  if (!cfg.robot_path.empty() && fs::exists(cfg.robot_path)) robot = load_robot(cfg.robot_path);
  const Json doc = load_json_file(o.demo);
  const Demonstration demo = import_demo_file(
      doc, robot ? &*robot : nullptr, o.name,
      [](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
  const DemoFeature feature = extract_feature(demo);
  lib.add(feature);
  save_library(lib, cfg.library_path);
  std::cout << "imported \"" << feature.name << "\": " << demo.poses.size() << " poses, "
            << feature.deltas.size() << " deltas; library now holds " << lib.size()
            << " features (version " << lib.version() << ")\n";
  const Deltad& lead = feature.deltas.front();
  std::cout << "  leading delta: rotation [" << lead.rotation.w() << ", " << lead.rotation.x()
            << ", " << lead.rotation.y() << ", " << lead.rotation.z() << "], displacement ["
            << lead.translation.x() << ", " << lead.translation.y() << ", "
            << lead.translation.z() << "]\n";
  return kOk;
}

int cmd_train(const Options& o) {
  const ScenarioConfig cfg = effective_config(o);
  if (cfg.library_path.empty()) {
    std::cerr << "error: no library path (give --library or a scenario file)\n";
    return kError;
  }
  const Library lib = load_library(cfg.library_path);
  if (lib.size() == 0) {
    std::cerr << "error: the library is empty; import demonstrations first\n";
    return kError;
  }
  std::vector<Task> tasks;
  for (const auto& f : o.task_files) tasks.push_back(load_task(f));
  if (tasks.empty()) {
    if (cfg.tasks_n <= 0) {
      std::cerr << "error: no task files given and --tasks-n is not positive\n";
      return kError;
    }
    std::mt19937_64 rng(cfg.training.seed);
    for (int i = 0; i < cfg.tasks_n; ++i) {
      tasks.push_back(random_grid_task(rng, cfg.workspace, 4, "training-" + std::to_string(i)));
    }
  }
  std::optional<QTable> warm;
  if (!o.init_qtable.empty()) warm = load_qtable(o.init_qtable);
  const auto [qtable, curve] =
      train(tasks, lib, cfg.training, cfg.similarity, warm ? &*warm : nullptr);
  save_qtable(qtable, o.qtable);
  if (!o.curve.empty()) save_reward_curve(curve, o.curve);
  std::cout << "trained on " << tasks.size() << " tasks for " << cfg.training.episodes
            << " episodes; final greedy reward (task average): " << curve.back().avg_greedy
            << "\n";
  return kOk;
}

int cmd_plan(const Options& o) {
  const ScenarioConfig cfg = effective_config(o);
  if (cfg.library_path.empty()) {
    std::cerr << "error: no library path (give --library or a scenario file)\n";
    return kError;
  }
  const Task task = load_task(o.task);
  const Library lib = load_library(cfg.library_path);
  const QTable qtable = load_qtable(o.qtable);
  const PlanOutcome outcome = generate_plan(task, lib, qtable, cfg.similarity);
  const std::string out = o.out.empty() ? "plan.json" : o.out;
  if (std::holds_alternative<DemoRequest>(outcome)) {
    const DemoRequest& request = std::get<DemoRequest>(outcome);
    save_json_file(out, request.to_json(task));
    std::cout << "demonstration requested; no library feature covers:";
    for (const auto& seg : request.blocking) std::cout << " " << segment_name(seg);
    std::cout << "\n";
    return kDemoRequested;
  }
  const MotionPlan& plan = std::get<MotionPlan>(outcome);
  save_json_file(out, plan_to_json(plan));
  std::cout << "plan with " << plan.waypoints.size() << " waypoints:\n";
  for (const auto& p : plan.provenance) {
    std::cout << "  " << segment_name(p.segment) << " <- " << p.demo << "\n";
  }
  return kOk;
}

JointVector parse_joints(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  JointVector q(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) q[i] = values[i];
  return q;
}

int cmd_ik(const Options& o) {
  const ScenarioConfig cfg = effective_config(o);
  if (cfg.robot_path.empty()) {
    std::cerr << "error: no robot path (give --robot or a scenario file)\n";
    return kError;
  }
  const RobotModel robot = load_robot(cfg.robot_path);
  const MotionPlan plan = plan_from_json(load_json_file(o.task));
  IKConfig ik;
  ik.dt = o.ik_dt;
  ik.damping = o.ik_damping;
  JointVector q0;
  if (!o.q0.empty()) {
    q0 = parse_joints(o.q0);
    if (q0.size() != robot.dof()) {
      std::cerr << "error: --q0 needs " << robot.dof() << " angles\n";
      return kError;
    }
  } else {
    q0 = ik_seek(robot, JointVector::Zero(robot.dof()), plan.waypoints.front(), ik);
  }
  const auto [trajectory, limits] = track_plan(robot, q0, plan, ik);
  const std::string out = o.out.empty() ? "trajectory.csv" : o.out;
  save_trajectory_csv(trajectory, out);
  if (!o.limits_out.empty()) save_json_file(o.limits_out, limits.to_json());
  std::cout << "tracked " << plan.waypoints.size() << " waypoints into "
            << trajectory.samples.size() << " samples";
  if (limits.empty()) {
    std::cout << "; joint limits respected\n";
  } else {
    std::cout << "; " << limits.violations.size()
              << " joint-limit violations (worst excess " << limits.worst_excess << " rad)\n";
  }
  return kOk;
}

// --- reproduce cases -------------------------------------------------------

struct Checker {
  int failures = 0;
  void expect(bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  }
};

std::vector<Task> training_grid_tasks(std::mt19937_64& rng, const Workspace& ws, int count) {
  std::vector<Task> tasks;
  for (int i = 0; i < count; ++i) {
    tasks.push_back(random_grid_task(rng, ws, 4, "grid-" + std::to_string(i)));
  }
  return tasks;
}

bool plateaued(const RewardCurve& curve, std::size_t from_episode, double tol = 1e-6) {
  const double last = curve.back().avg_greedy;
  for (std::size_t i = from_episode; i < curve.size(); ++i) {
    if (std::abs(curve[i].avg_greedy - last) > tol) return false;
  }
  return true;
}

JointVector seek_start(const RobotModel& robot, const Posed& target, const IKConfig& ik) {
  JointVector guess = JointVector::Zero(robot.dof());
  if (robot.dof() == 6) guess << 0.4, -1.2, 1.4, -1.8, -1.4, 0.3;
  return ik_seek(robot, guess, target, ik);
}

int reproduce_transferring(const ScenarioConfig& cfg, const std::string& outdir) {
  Checker check;
  const Library lib = build_builtin_library();
  std::mt19937_64 rng(cfg.training.seed);
  std::uniform_real_distribution<double> zdist(0.1, 0.5);
  std::vector<double> zs;
  std::vector<Task> trials;
  for (int i = 0; i < 20; ++i) {
    zs.push_back(zdist(rng));
    trials.push_back(transferring_task(zs.back()));
  }
  const auto [qtable, curve] = train(trials, lib, cfg.training, cfg.similarity);

  const Quatd upright = euler_to_quat<double>({0, -pi / 2, 0});
  std::ofstream csv(outdir + "/transferring_trials.csv");
  csv << "trial,z,waypoints,max_orientation_distance,demo\n";
  int successes = 0;
  MotionPlan first_plan;
  for (int i = 0; i < 20; ++i) {
    const PlanOutcome outcome = generate_plan(trials[i], lib, qtable, cfg.similarity);
    if (!std::holds_alternative<MotionPlan>(outcome)) {
      csv << i << "," << zs[i] << ",0,nan,none\n";
      continue;
    }
    const MotionPlan& plan = std::get<MotionPlan>(outcome);
    if (i == 0) first_plan = plan;
    double worst = 0;
    for (const auto& wp : plan.waypoints) {
      worst = std::max(worst, quat_distance(wp.real, upright));
    }
    if (worst <= cfg.similarity.delta_alpha) ++successes;
    csv << i << "," << zs[i] << "," << plan.waypoints.size() << "," << worst << ","
        << plan.provenance.front().demo << "\n";
  }
  check.expect(successes == 20,
               "20/20 trials planned with every waypoint orientation within delta_alpha of "
               "(0, -pi/2, 0)");

  const RobotModel robot = load_robot(cfg.robot_path);
  IKConfig ik;
  const JointVector q0 = seek_start(robot, first_plan.waypoints.front(), ik);
  const auto [traj, limits] = track_plan(robot, q0, first_plan, ik);
  double worst_fk = 0;
  for (std::size_t i = 0; i < first_plan.waypoints.size(); ++i) {
    const Posed fk = forward_kinematics(robot, traj.samples[i + 1]);
    worst_fk = std::max(worst_fk, (position(fk) - position(first_plan.waypoints[i])).norm());
  }
  check.expect(worst_fk < 1e-3, "tracked trial 0 with per-waypoint position error < 1e-3 m");
  save_trajectory_csv(traj, outdir + "/transferring_trajectory.csv");
  return check.failures == 0 ? kOk : kCheckFailed;
}

int reproduce_filling_pouring(const ScenarioConfig& cfg, const std::string& outdir) {
  Checker check;
  const Library lib = build_builtin_library();
  std::mt19937_64 rng(cfg.training.seed);
  std::uniform_real_distribution<double> xdist(-0.5, 0.7), ydist(-0.2, 0.0);
  std::vector<Task> trials;
  for (int i = 0; i < 20; ++i) trials.push_back(filling_pouring_task(xdist(rng), ydist(rng)));
  const auto [qtable, curve] = train(trials, lib, cfg.training, cfg.similarity);

  std::ofstream csv(outdir + "/filling_pouring_trials.csv");
  csv << "trial,segments,demos\n";
  int successes = 0;
  for (int i = 0; i < 20; ++i) {
    const PlanOutcome outcome = generate_plan(trials[i], lib, qtable, cfg.similarity);
    if (!std::holds_alternative<MotionPlan>(outcome)) {
      csv << i << ",0,\n";
      continue;
    }
    const MotionPlan& plan = std::get<MotionPlan>(outcome);
    std::string demos;
    for (const auto& p : plan.provenance) demos += p.demo + " ";
    csv << i << "," << plan.provenance.size() << "," << demos << "\n";
    const auto& prov = plan.provenance;
    const bool assignment_ok =
        prov.size() == 3 && prov[0].segment.start == 0 && prov[0].segment.end == 1 &&
        prov[0].demo == "filling" && prov[1].segment.start == 1 && prov[1].segment.end == 3 &&
        prov[1].demo == "stacking" && prov[2].segment.start == 3 && prov[2].segment.end == 4 &&
        prov[2].demo.rfind("twisting", 0) == 0;
    if (assignment_ok) ++successes;
  }
  check.expect(successes == 20,
               "20/20 trials map filling, stacking and a twisting feature onto the three segments");
  return check.failures == 0 ? kOk : kCheckFailed;
}

int reproduce_assembling(const ScenarioConfig& cfg, const std::string& outdir) {
  Checker check;
  const Task task = assembling_task();
  const Library five = build_builtin_library(false);
  std::mt19937_64 rng(cfg.training.seed);
  const auto [general, curve0] =
      train(training_grid_tasks(rng, cfg.workspace, cfg.tasks_n), five, cfg.training,
            cfg.similarity);

  const PlanOutcome blocked = generate_plan(task, five, general, cfg.similarity);
  const bool requested = std::holds_alternative<DemoRequest>(blocked);
  check.expect(requested, "planning against the five-feature library requests a demonstration");
  if (requested) {
    const DemoRequest& request = std::get<DemoRequest>(blocked);
    const bool names_23 = request.blocking.size() == 1 && request.blocking[0].start == 1 &&
                          request.blocking[0].end == 2;
    check.expect(names_23, "the request names segment con_2..con_3");
    save_json_file(outdir + "/assembling_request.json", request.to_json(task));
  }

  Library six = five;
  six.add(extract_feature(rolling_demo()));
  TrainingConfig retrain_tc = cfg.training;
  retrain_tc.episodes = 30;
  const auto [retrained, retrain_curve] = train({task}, six, retrain_tc, cfg.similarity, &general);
  save_reward_curve(retrain_curve, outdir + "/assembling_retrain_curve.csv");
  check.expect(plateaued(retrain_curve, 14), "retraining reward plateaus within 15 episodes");

  const PlanOutcome outcome = generate_plan(task, six, retrained, cfg.similarity);
  const bool planned = std::holds_alternative<MotionPlan>(outcome);
  check.expect(planned, "planning succeeds after importing the rolling demonstration");
  if (planned) {
    const MotionPlan& plan = std::get<MotionPlan>(outcome);
    save_json_file(outdir + "/assembling_plan.json", plan_to_json(plan));
    bool rolling_used = false;
    for (const auto& p : plan.provenance) {
      if (p.segment.start == 1 && p.segment.end == 2) rolling_used = p.demo == "rolling";
    }
    check.expect(rolling_used, "the rolling feature is mapped onto con_2..con_3");
  }
  return check.failures == 0 ? kOk : kCheckFailed;
}

int reproduce_training_curve(const ScenarioConfig& cfg, const std::string& outdir) {
  Checker check;
  const Library lib = build_builtin_library();
  std::mt19937_64 rng(cfg.training.seed);
  const auto tasks = training_grid_tasks(rng, cfg.workspace, cfg.tasks_n);
  const auto [qtable, curve] = train(tasks, lib, cfg.training, cfg.similarity);
  save_reward_curve(curve, outdir + "/training_curve.csv");

  bool monotone = true;
  const std::size_t window = 20;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t end = 50; end <= curve.size(); ++end) {
    double mean = 0;
    for (std::size_t i = end - window; i < end; ++i) mean += curve[i].avg_greedy;
    mean /= window;
    if (mean < prev - 1e-6) monotone = false;
    prev = mean;
  }
  check.expect(monotone,
               "trailing-20-episode mean of the greedy reward is non-decreasing from episode 50");
  return check.failures == 0 ? kOk : kCheckFailed;
}

int cmd_reproduce(const Options& o) {
  ScenarioConfig cfg = effective_config(o);
  if (cfg.robot_path.empty()) cfg.robot_path = "data/robots/default_6r.json";
  const std::string outdir = o.out.empty() ? "reproduce-out" : o.out;
  fs::create_directories(outdir);
  int rc = kOk;
  bool matched = false;
  auto run = [&](const std::string& name, int (*fn)(const ScenarioConfig&, const std::string&)) {
    if (o.reproduce_case == name || o.reproduce_case == "all") {
      matched = true;
      std::cout << "== " << name << " ==\n";
      rc = std::max(rc, fn(cfg, outdir));
    }
  };
  run("transferring", reproduce_transferring);
  run("filling-pouring", reproduce_filling_pouring);
  run("assembling", reproduce_assembling);
  run("training-curve", reproduce_training_curve);
  if (!matched) {
    std::cerr << "error: unknown case \"" << o.reproduce_case << "\"\n";
    return kError;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning-from-demonstration motion planning"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "scenario configuration file (or DEMOPLAN_CONFIG)");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--delta-alpha", o.delta_alpha, "rotation-closeness tolerance");
    cmd->add_option("--delta-beta", o.delta_beta, "translation-direction threshold");
  };

  CLI::App* imp = app.add_subcommand("demo-import", "extract a feature and append it to a library");
  imp->add_option("--demo", o.demo, "demonstration file (poses or joints)")->required();
  imp->add_option("--library", o.library, "library file to create or extend");
  imp->add_option("--robot", o.robot, "robot file, required for joint-space demos");
  imp->add_option("--name", o.name, "override the demonstration name");
  add_common(imp);

  CLI::App* trn = app.add_subcommand("train", "train the planning policy");
  trn->add_option("--library", o.library, "library file");
  trn->add_option("--qtable", o.qtable, "output Q-table file")->required();
  trn->add_option("--curve", o.curve, "output reward-curve CSV");
  trn->add_option("--task", o.task_files, "task file(s) to train on");
  trn->add_option("--tasks-n", o.tasks_n, "number of generated training tasks");
  trn->add_option("--episodes", o.episodes, "episodes per task");
  trn->add_option("--gamma", o.gamma, "discount factor");
  trn->add_option("--epsilon", o.epsilon, "exploration probability");
  trn->add_option("--alpha-lr", o.alpha_lr, "learning rate");
  trn->add_option("--init-qtable", o.init_qtable, "warm-start table for retraining");
  add_common(trn);

  CLI::App* pln = app.add_subcommand("plan", "generate a task-space motion plan");
  pln->add_option("--task", o.task, "task file")->required();
  pln->add_option("--library", o.library, "library file");
  pln->add_option("--qtable", o.qtable, "trained Q-table")->required();
  pln->add_option("--out", o.out, "output plan (or demo-request) file");
  add_common(pln);

  CLI::App* ik = app.add_subcommand("ik", "resolve a plan to a joint trajectory");
  ik->add_option("--plan", o.task, "plan file")->required();
  ik->add_option("--robot", o.robot, "robot file");
  ik->add_option("--q0", o.q0, "initial joint angles, comma separated");
  ik->add_option("--out", o.out, "output trajectory CSV");
  ik->add_option("--limits-out", o.limits_out, "output limit-report JSON");
  ik->add_option("--dt", o.ik_dt, "seconds per sample");
  ik->add_option("--damping", o.ik_damping, "least-squares damping");
  add_common(ik);

  CLI::App* rep = app.add_subcommand("reproduce", "run a case study end to end");
  rep->add_option("case", o.reproduce_case,
                  "transferring | filling-pouring | assembling | training-curve | all")
      ->required();
  rep->add_option("--out", o.out, "output directory");
  rep->add_option("--robot", o.robot, "robot file");
  rep->add_option("--episodes", o.episodes, "episodes per task");
  rep->add_option("--tasks-n", o.tasks_n, "number of generated training tasks");
  rep->add_option("--gamma", o.gamma, "discount factor");
  rep->add_option("--epsilon", o.epsilon, "exploration probability");
  rep->add_option("--alpha-lr", o.alpha_lr, "learning rate");
  add_common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (imp->parsed()) return cmd_demo_import(o);
    if (trn->parsed()) return cmd_train(o);
    if (pln->parsed()) return cmd_plan(o);
    if (ik->parsed()) return cmd_ik(o);
    if (rep->parsed()) return cmd_reproduce(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
