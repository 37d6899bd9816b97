#pragma once

#include "sketchact/io.hpp"
#include "sketchact/metrics.hpp"
#include "sketchact/scenario.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sketchact {

struct BatchSpec {
  std::vector<LengthCategory> categories{std::begin(kAllCategories), std::end(kAllCategories)};
  std::vector<SceneType> scene_types{std::begin(kAllSceneTypes), std::end(kAllSceneTypes)};
  std::size_t trials = 100;  // per category; scene types are cycled
  std::uint64_t seed = 0;    // trial t uses scenario seed seed + t
  AngleProfile angles = AngleProfile::Lattice;
  bool clutter = true;
  ControlParams params;
  NoiseModel noise;  // seed ignored; each trial derives its own
  std::string tolerance_profile = "floor";
  std::string policy = "rules";
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct TrialTask {
  ScenarioSpec spec;
  std::size_t trial = 0;
  std::uint64_t noise_seed = 0;
};

/// Category-major task list; its order is the fold order of the aggregate.
std::vector<TrialTask> batch_tasks(const BatchSpec& spec);

ToleranceProfile tolerance_by_name(const std::string& name);  // throws ValidationFailed

/// "45,90" style label for a turn set.
std::string turn_set_label(const std::vector<double>& turn_set);

TrialRow run_task(const TrialTask& task, const BatchSpec& spec);

/// Results are independent of the job count.
ResultsFile run_batch(const BatchSpec& spec);

}  // namespace sketchact
