#include "sketchact/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace sketchact {

std::vector<TrialTask> batch_tasks(const BatchSpec& spec) {
  if (spec.categories.empty()) throw Error(ErrorCode::ValidationFailed, "no categories selected", "/categories");
  if (spec.scene_types.empty()) throw Error(ErrorCode::ValidationFailed, "no scene types selected", "/scene_types");
  std::vector<TrialTask> tasks;
  for (const auto cat : spec.categories)
    for (std::size_t t = 0; t < spec.trials; ++t) {
      TrialTask task;
      task.spec = {cat, spec.scene_types[t % spec.scene_types.size()], spec.seed + t, spec.angles, spec.clutter};
      task.trial = t;
      task.noise_seed = derive_seed(task.spec.seed, 0x6e6f697365ULL + std::uint64_t(cat));
      tasks.push_back(task);
    }
  return tasks;
}

ToleranceProfile tolerance_by_name(const std::string& name) {
  if (name == "floor") return ToleranceProfile::floor();
  if (name == "tabletop") return ToleranceProfile::tabletop();
  throw Error(ErrorCode::ValidationFailed, "tolerance profile must be floor or tabletop", "/tolerance_profile");
}

std::string turn_set_label(const std::vector<double>& turn_set) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < turn_set.size(); ++i) ss << (i ? "," : "") << turn_set[i];
  return ss.str();
}

TrialRow run_task(const TrialTask& task, const BatchSpec& spec) {
  ControlParams gen = spec.params;
  gen.turn_set = baseline_turn_set();
  Scenario sc = generate_scenario(task.spec, gen);
  NoiseModel noise = spec.noise;
  noise.seed = task.noise_seed;
  TrialResult trial = run_trial(sc.scene, sc.sketch, spec.params, noise, spec.policy);
  TrialRow row = summarize(trial, sc.reference, sc.area, tolerance_by_name(spec.tolerance_profile));
  row.scene_type = std::string(to_string(task.spec.scene_type));
  row.category = std::string(to_string(task.spec.category));
  row.seed = task.spec.seed;
  row.trial = task.trial;
  row.corners = sc.corners;
  row.turn_set = turn_set_label(spec.params.turn_set);
  return row;
}

ResultsFile run_batch(const BatchSpec& spec) {
  validate(spec.params);
  tolerance_by_name(spec.tolerance_profile);
  const auto tasks = batch_tasks(spec);
  std::vector<TrialRow> rows(tasks.size());

  unsigned jobs = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, unsigned(std::max<std::size_t>(1, tasks.size())));

  std::atomic<std::size_t> next{0}, done{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        rows[k] = run_task(tasks[k], spec);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
      const std::size_t d = ++done;
      if (spec.progress) {
        std::lock_guard lock(mu);
        spec.progress(d, tasks.size());
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ResultsFile out;
  out.params = spec.params;
  out.noise = spec.noise;
  out.noise.seed = spec.seed;
  out.tolerance_profile = spec.tolerance_profile;
  out.rows = std::move(rows);
  out.report = aggregate(out.rows);
  return out;
}

}  // namespace sketchact
