#include <doctest.h>

#include "demoplan/config.hpp"

using namespace demoplan;

TEST_CASE("scenario defaults match the published training parameters") {
  const ScenarioConfig cfg;
  CHECK(cfg.similarity.delta_alpha == 0.5);
  CHECK(cfg.similarity.delta_beta == -0.9);
  CHECK(cfg.training.gamma == 0.9);
  CHECK(cfg.training.epsilon == 0.8);
  CHECK(cfg.training.episodes == 100);
  CHECK(cfg.tasks_n == 20);
  for (int i = 0; i < 3; ++i) {
    CHECK(cfg.workspace.hi[i] - cfg.workspace.lo[i] == doctest::Approx(0.5));
  }
}

TEST_CASE("scenario files override fields and round-trip") {
  const Json j = parse_json(R"({
    "robot": "r.json",
    "library": "l.json",
    "delta_alpha": 0.3,
    "gamma": 0.8,
    "episodes": 40,
    "workspace": {"min": [-1, -1, 0], "max": [1, 1, 1]}
  })", "scenario");
  const ScenarioConfig cfg = ScenarioConfig::from_json(j);
  CHECK(cfg.robot_path == "r.json");
  CHECK(cfg.library_path == "l.json");
  CHECK(cfg.similarity.delta_alpha == 0.3);
  CHECK(cfg.similarity.delta_beta == -0.9);  // untouched default
  CHECK(cfg.training.gamma == 0.8);
  CHECK(cfg.training.episodes == 40);
  CHECK(cfg.workspace.hi.z() == 1.0);

  const ScenarioConfig back = ScenarioConfig::from_json(cfg.to_json());
  CHECK(back.similarity.delta_alpha == cfg.similarity.delta_alpha);
  CHECK(back.workspace.lo.x() == cfg.workspace.lo.x());

  CHECK_THROWS_AS(ScenarioConfig::from_json(parse_json(
                      R"({"workspace": {"min": [1, 0, 0], "max": [0, 1, 1]}})", "scenario")),
                  SchemaError);
}
