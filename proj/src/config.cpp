#include "demoplan/config.hpp"

#include <cstdlib>

namespace demoplan {

ScenarioConfig ScenarioConfig::from_json(const Json& j) {
  ScenarioConfig cfg;
  cfg.robot_path = j.value("robot", cfg.robot_path);
  cfg.library_path = j.value("library", cfg.library_path);
  cfg.similarity.delta_alpha = j.value("delta_alpha", cfg.similarity.delta_alpha);
  cfg.similarity.delta_beta = j.value("delta_beta", cfg.similarity.delta_beta);
  cfg.similarity.zero_translation_epsilon =
      j.value("zero_translation_epsilon", cfg.similarity.zero_translation_epsilon);
  cfg.training.gamma = j.value("gamma", cfg.training.gamma);
  cfg.training.epsilon = j.value("epsilon", cfg.training.epsilon);
  cfg.training.learning_rate = j.value("alpha_lr", cfg.training.learning_rate);
  cfg.training.episodes = j.value("episodes", cfg.training.episodes);
  cfg.training.r_fail = j.value("r_fail", cfg.training.r_fail);
  cfg.training.seed = j.value("seed", cfg.training.seed);
  cfg.tasks_n = j.value("tasks_n", cfg.tasks_n);
  if (j.contains("workspace")) {
    const Json& w = j["workspace"];
    cfg.workspace.lo = vec3_from_json(w.at("min"), "workspace.min");
    cfg.workspace.hi = vec3_from_json(w.at("max"), "workspace.max");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(cfg.workspace.lo[i] < cfg.workspace.hi[i])) {
      throw SchemaError("scenario: workspace bounds must be well ordered");
    }
  }
  return cfg;
}

Json ScenarioConfig::to_json() const {
  return Json{{"robot", robot_path},
              {"library", library_path},
              {"delta_alpha", similarity.delta_alpha},
              {"delta_beta", similarity.delta_beta},
              {"zero_translation_epsilon", similarity.zero_translation_epsilon},
              {"gamma", training.gamma},
              {"epsilon", training.epsilon},
              {"alpha_lr", training.learning_rate},
              {"episodes", training.episodes},
              {"r_fail", training.r_fail},
              {"seed", training.seed},
              {"tasks_n", tasks_n},
              {"workspace", Json{{"min", demoplan::to_json(workspace.lo)},
                                 {"max", demoplan::to_json(workspace.hi)}}}};
}

ScenarioConfig load_scenario(const std::optional<std::string>& explicit_path) {
  std::string path;
  if (explicit_path) {
    path = *explicit_path;
  } else if (const char* env = std::getenv("DEMOPLAN_CONFIG")) {
    path = env;
  }
  if (path.empty()) return ScenarioConfig{};
  return ScenarioConfig::from_json(load_json_file(path));
}

}  // namespace demoplan
