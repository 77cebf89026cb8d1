#pragma once

#include <optional>
#include <string>

#include "demoplan/json_io.hpp"
#include "demoplan/planner.hpp"
#include "demoplan/similarity.hpp"
#include "demoplan/synthetic.hpp"

namespace demoplan {

/// One file carries every path and threshold a run needs; command-line flags
/// override individual fields.
struct ScenarioConfig {
  std::string robot_path;
  std::string library_path;
  SimilarityConfig similarity;
  TrainingConfig training;
  Workspace workspace;
  int tasks_n{20};

  static ScenarioConfig from_json(const Json& j);
  Json to_json() const;
};

/// Loads the file named by DEMOPLAN_CONFIG (or an explicit path); defaults
/// when neither is set.
ScenarioConfig load_scenario(const std::optional<std::string>& explicit_path);

}  // namespace demoplan
