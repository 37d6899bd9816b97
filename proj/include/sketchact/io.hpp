#pragma once

#include "sketchact/executor.hpp"
#include "sketchact/metrics.hpp"
#include "sketchact/params.hpp"
#include "sketchact/scenario.hpp"
#include "sketchact/sketch.hpp"
#include "sketchact/world.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sketchact {

/// Objects keep sorted keys, so dumping is canonical.
using Json = nlohmann::json;

inline constexpr const char* kSketchSchema = "sketch/1";
inline constexpr const char* kSceneSchema = "scene/1";
inline constexpr const char* kParamsSchema = "params/1";
inline constexpr const char* kTrialSchema = "trial/1";
inline constexpr const char* kPlanSchema = "plan/1";
inline constexpr const char* kResultsSchema = "results/1";
inline constexpr const char* kScenarioSchema = "scenario/1";

/// Canonical text: two-space indent, sorted keys, shortest round-trip
/// doubles, trailing newline.
std::string dump(const Json& doc);

/// Throws ParseError (with the byte offset as location).
Json parse(const std::string& text);
Json read_json(const std::filesystem::path& path);  // also NotFound
void write_text(const std::filesystem::path& path, const std::string& text);

/// Throws SchemaVersionUnknown unless doc["schema"] == expected.
void expect_schema(const Json& doc, const std::string& expected);

Json to_json(const Sketch& sketch);
Sketch sketch_from_json(const Json& doc);

Json to_json(const SceneGrid& scene);
SceneGrid scene_from_json(const Json& doc);

/// Missing fields take their defaults; unknown fields are rejected.
Json to_json(const ControlParams& params);
ControlParams params_from_json(const Json& doc);

Json to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const Json& doc, const std::string& where = "/noise");

Json to_json(const MetricScale& scale);
MetricScale scale_from_json(const Json& doc, const std::string& where = "/scale");

Json to_json(const Segment& segment);
Json to_json(const PolicyDecision& decision);
Json to_json(const TrialResult& trial);

Json to_json(const TrialRow& row);
TrialRow row_from_json(const Json& doc, const std::string& where);
Json to_json(const Rates& rates);
Json to_json(const MetricsReport& report);

struct ResultsFile {
  ControlParams params;
  NoiseModel noise;
  std::string tolerance_profile = "floor";
  std::vector<TrialRow> rows;
  MetricsReport report;
};

Json to_json(const ResultsFile& results);
/// Recomputes the aggregate from the rows and rejects the document when it
/// differs from the stored one.
ResultsFile results_from_json(const Json& doc);

Json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_spec_from_json(const Json& doc, const std::string& where = "");
Json to_json(const Scenario& scenario);

Json polyline_json(const Polyline& line);
Polyline polyline_from_json(const Json& arr, const std::string& where);

Sketch load_sketch(const std::filesystem::path& path);
void save_sketch(const std::filesystem::path& path, const Sketch& sketch);
SceneGrid load_scene(const std::filesystem::path& path);  // also accepts scenario documents
void save_scene(const std::filesystem::path& path, const SceneGrid& scene);
ControlParams load_params(const std::filesystem::path& path);
void save_params(const std::filesystem::path& path, const ControlParams& params);
ResultsFile read_results(const std::filesystem::path& path);
void write_results(const std::filesystem::path& path, const ResultsFile& results);

}  // namespace sketchact
