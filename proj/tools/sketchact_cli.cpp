#include "sketchact/batch.hpp"
#include "sketchact/io.hpp"
#include "sketchact/report.hpp"
#include "sketchact/service.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

using namespace sketchact;
namespace fs = std::filesystem;

namespace {

enum class Format { Text, Structured, Csv };

// Looks the path up as given, then under the data directory.
fs::path input_path(const std::string& p) {
  if (fs::exists(p)) return p;
  const fs::path alt = default_data_dir() / p;
  if (fs::exists(alt)) return alt;
  throw Error(ErrorCode::NotFound, "no such file: " + p);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ValidationFailed, "bad number '" + s + "' for " + flag, flag);
}

std::vector<double> parse_turn_set(const std::string& s) {
  if (s == "coarse") return coarse_turn_set();
  if (s == "baseline") return baseline_turn_set();
  if (s == "fine") return fine_turn_set();
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(item, "--turn-set"));
  return out;
}

NoiseModel parse_noise(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3)
    throw Error(ErrorCode::ValidationFailed, "--noise takes sigma_long,sigma_lat,sigma_turn_deg", "--noise");
  NoiseModel n{to_double(parts[0], "--noise"), to_double(parts[1], "--noise"), to_double(parts[2], "--noise"), 0};
  if (n.sigma_long_m < 0 || n.sigma_lat_m < 0 || n.sigma_turn_deg < 0)
    throw Error(ErrorCode::ValidationFailed, "noise must be >= 0", "--noise");
  return n;
}

/// Parameter file plus per-field overrides, shared by plan, run and batch.
struct ParamFlags {
  std::string file;
  std::string turn_set;
  double l_max = 0, theta_turn = 0, d_step = 0, d_safety = 0, h_clearance = 0, kappa = 0;
  CLI::Option *o_l_max{}, *o_theta{}, *o_step{}, *o_safety{}, *o_clear{}, *o_kappa{};

  void add(CLI::App& app) {
    const ControlParams d;
    app.add_option("--params", file, "Parameter file (params/1)");
    o_l_max = app.add_option("--l-max", l_max, "Maximum segment length [m]")->default_val(d.l_max_m);
    o_theta = app.add_option("--theta-turn", theta_turn, "Corner threshold [deg]")->default_val(d.theta_turn_deg);
    o_step = app.add_option("--d-step", d_step, "Forward step [m]")->default_val(d.d_step_m);
    o_safety = app.add_option("--d-safety", d_safety, "Obstacle look-ahead [m]")->default_val(d.d_safety_m);
    o_clear = app.add_option("--h-clearance", h_clearance, "Required under-clearance [m]")->default_val(d.h_clearance_m);
    o_kappa = app.add_option("--kappa", kappa, "Pixel-proxy ratio")->default_val(d.kappa);
    app.add_option("--turn-set", turn_set, "Turn magnitudes: coarse, baseline, fine or a list like 45,90")
        ->default_str("45,90");
  }

  bool given() const {
    return !file.empty() || !turn_set.empty() || o_l_max->count() || o_theta->count() || o_step->count() ||
           o_safety->count() || o_clear->count() || o_kappa->count();
  }

  ControlParams resolve() const {
    ControlParams p = file.empty() ? ControlParams{} : load_params(input_path(file));
    if (o_l_max->count()) p.l_max_m = l_max;
    if (o_theta->count()) p.theta_turn_deg = theta_turn;
    if (o_step->count()) p.d_step_m = d_step;
    if (o_safety->count()) p.d_safety_m = d_safety;
    if (o_clear->count()) p.h_clearance_m = h_clearance;
    if (o_kappa->count()) p.kappa = kappa;
    if (!turn_set.empty()) p.turn_set = parse_turn_set(turn_set);
    validate(p);
    return p;
  }
};

void add_format(CLI::App& app, Format& format, bool csv = false) {
  std::vector<std::string> names{"text", "structured"};
  if (csv) names.push_back("csv");
  app.add_option_function<std::string>(
         "--format",
         [&format](const std::string& v) {
           format = v == "structured" ? Format::Structured : v == "csv" ? Format::Csv : Format::Text;
         },
         "Output format")
      ->check(CLI::IsMember(names))
      ->default_str("text");
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_text(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketchact: turn 2D sketches into robot macro-actions and evaluate them"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // plan
  auto* plan = app.add_subcommand("plan", "Segment a sketch and print the macro-action per segment");
  std::string plan_sketch, plan_scene, plan_policy;
  Format plan_format = Format::Text;
  ParamFlags plan_params;
  plan->add_option("--sketch", plan_sketch, "Sketch file (sketch/1)");
  plan->add_option("--scene", plan_scene, "Scene or scenario file; supplies the metric scale");
  plan->add_option("--policy", plan_policy, "Registered policy name")->default_str("rules");
  plan_params.add(*plan);
  add_format(*plan, plan_format);

  // run
  auto* run = app.add_subcommand("run", "Execute a sketch in a scene and report the trial");
  std::string run_sketch, run_scene, run_policy, run_out, run_noise, run_tol = "floor";
  std::uint64_t run_seed = 0;
  Format run_format = Format::Text;
  ParamFlags run_params;
  run->add_option("--scene", run_scene, "Scene or scenario file")->required();
  run->add_option("--sketch", run_sketch, "Sketch file; defaults to the scenario's sketch");
  run->add_option("--seed", run_seed, "Noise seed")->capture_default_str();
  run->add_option("--noise", run_noise, "sigma_long_m,sigma_lat_m,sigma_turn_deg")->default_str("0,0,0");
  run->add_option("--tolerance-profile", run_tol, "floor or tabletop")
      ->check(CLI::IsMember({"floor", "tabletop"}))
      ->capture_default_str();
  run->add_option("--policy", run_policy, "Registered policy name")->default_str("rules");
  run->add_option("--out", run_out, "Write the trial document here");
  run_params.add(*run);
  add_format(*run, run_format);

  // batch
  auto* batch = app.add_subcommand("batch", "Generate scenarios and run trials in parallel");
  BatchSpec bspec;
  std::string b_categories = "short,medium,long", b_scenes = "all", b_noise = "0.005,0.005,1", b_angles = "lattice",
              b_out;
  bool b_no_clutter = false, b_progress = false;
  ParamFlags b_params;
  batch->add_option("--categories", b_categories, "Length categories")->capture_default_str();
  batch->add_option("--scenes", b_scenes, "Scene types, comma separated, or all")->capture_default_str();
  batch->add_option("--trials", bspec.trials, "Trials per category")->capture_default_str();
  batch->add_option("--seed,--seeds", bspec.seed, "First scenario seed; trial t uses seed + t")->capture_default_str();
  batch->add_option("--noise", b_noise, "sigma_long_m,sigma_lat_m,sigma_turn_deg")->capture_default_str();
  batch->add_option("--angles", b_angles, "Corner profile: lattice or free")
      ->check(CLI::IsMember({"lattice", "free"}))
      ->capture_default_str();
  batch->add_option("--jobs", bspec.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  batch->add_option("--tolerance-profile", bspec.tolerance_profile, "floor or tabletop")
      ->check(CLI::IsMember({"floor", "tabletop"}))
      ->capture_default_str();
  batch->add_flag("--no-clutter", b_no_clutter, "Leave out the small boxes beside the path");
  batch->add_flag("--progress", b_progress, "Progress on stderr");
  batch->add_option("--out", b_out, "Results file (default: stdout)");
  b_params.add(*batch);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate scenario files");
  std::string g_category, g_scene = "other", g_angles = "lattice", g_out;
  std::uint64_t g_seed = 0;
  std::size_t g_count = 1;
  Format g_format = Format::Text;
  gen->add_option("--category", g_category, "short, medium or long")->required();
  gen->add_option("--scene-type", g_scene, "Scene type")->capture_default_str();
  gen->add_option("--seed", g_seed, "First seed")->capture_default_str();
  gen->add_option("--count", g_count, "Number of scenarios")->capture_default_str();
  gen->add_option("--angles", g_angles, "lattice or free")->check(CLI::IsMember({"lattice", "free"}))->capture_default_str();
  gen->add_option("--out-dir", g_out, "Output directory (default: $SKETCHACT_DATA_DIR or .)");
  add_format(*gen, g_format);

  // report
  auto* report = app.add_subcommand("report", "Render results files as tables");
  std::vector<std::string> r_files;
  Format r_format = Format::Text;
  report->add_option("results", r_files, "Results files")->required();
  add_format(*report, r_format, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*plan) {
      Json req;
      if (!plan_sketch.empty()) req["sketch"] = read_json(input_path(plan_sketch));
      if (!plan_scene.empty()) req["scene"] = read_json(input_path(plan_scene));
      if (plan_params.given()) req["params"] = to_json(plan_params.resolve());
      if (!plan_policy.empty()) req["policy"] = plan_policy;
      const Json payload = plan_payload(req);
      std::cout << (plan_format == Format::Structured ? dump(payload) : render_plan_text(payload));
    } else if (*run) {
      Json req;
      req["scene"] = read_json(input_path(run_scene));
      if (!run_sketch.empty()) req["sketch"] = read_json(input_path(run_sketch));
      if (run_params.given()) req["params"] = to_json(run_params.resolve());
      if (!run_policy.empty()) req["policy"] = run_policy;
      req["seed"] = run_seed;
      if (!run_noise.empty()) req["noise"] = to_json(parse_noise(run_noise));
      req["tolerance_profile"] = run_tol;
      const Json payload = execute_payload(req);
      if (!run_out.empty()) write_text(run_out, dump(payload));
      std::cout << (run_format == Format::Structured ? dump(payload) : render_trial_summary(payload));
    } else if (*batch) {
      bspec.params = b_params.resolve();
      bspec.noise = parse_noise(b_noise);
      bspec.angles = *angle_profile_from_string(b_angles);
      bspec.clutter = !b_no_clutter;
      bspec.categories.clear();
      for (const auto& c : split(b_categories, ',')) {
        const auto cat = category_from_string(c);
        if (!cat) throw Error(ErrorCode::ValidationFailed, "unknown category '" + c + "'", "--categories");
        bspec.categories.push_back(*cat);
      }
      if (b_scenes != "all") {
        bspec.scene_types.clear();
        for (const auto& s : split(b_scenes, ',')) {
          const auto t = scene_type_from_string(s);
          if (!t) throw Error(ErrorCode::ValidationFailed, "unknown scene type '" + s + "'", "--scenes");
          bspec.scene_types.push_back(*t);
        }
      }
      if (b_progress)
        bspec.progress = [](std::size_t done, std::size_t total) {
          if (done == total || done % 100 == 0) std::fprintf(stderr, "batch: %zu/%zu trials\n", done, total);
        };
      const auto t0 = std::chrono::steady_clock::now();
      const ResultsFile results = run_batch(bspec);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::fprintf(stderr, "batch: %zu trials in %.1f s\n", results.rows.size(), secs);
      emit(dump(to_json(results)), b_out);
    } else if (*gen) {
      ScenarioSpec spec;
      const auto cat = category_from_string(g_category);
      if (!cat) throw Error(ErrorCode::ValidationFailed, "unknown category '" + g_category + "'", "--category");
      const auto type = scene_type_from_string(g_scene);
      if (!type) throw Error(ErrorCode::ValidationFailed, "unknown scene type '" + g_scene + "'", "--scene-type");
      spec.category = *cat;
      spec.scene_type = *type;
      spec.angles = *angle_profile_from_string(g_angles);
      const fs::path dir = g_out.empty() ? default_data_dir() : fs::path(g_out);
      if (g_format != Format::Structured) fs::create_directories(dir);
      for (std::size_t k = 0; k < g_count; ++k) {
        spec.seed = g_seed + k;
        const Json doc = scenario_payload(to_json(spec));
        if (g_format == Format::Structured) {
          std::cout << dump(doc);
          continue;
        }
        const fs::path file =
            dir / (g_category + "-" + g_scene + "-" + std::to_string(spec.seed) + ".json");
        write_text(file, dump(doc));
        std::cout << file.string() << " corners=" << doc["corners"].get<std::size_t>() << "\n";
      }
    } else if (*report) {
      std::vector<ResultsFile> results;
      for (const auto& f : r_files) results.push_back(read_results(input_path(f)));
      if (r_format == Format::Structured) {
        Json arr = Json::array();
        for (const auto& r : results) arr.push_back(to_json(r.report));
        std::cout << dump(arr);
      } else {
        std::cout << (r_format == Format::Csv ? render_report_csv(results) : render_report_text(results));
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code());
    if (!e.location().empty()) std::cerr << " at " << e.location();
    std::cerr << ": " << e.what() << "\n";
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
