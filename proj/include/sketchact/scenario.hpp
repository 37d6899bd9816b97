#pragma once

#include "sketchact/params.hpp"
#include "sketchact/sketch.hpp"
#include "sketchact/world.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace sketchact {

enum class LengthCategory { Short, Medium, Long };

enum class SceneType { Bedroom, Kitchen, LivingRoom, Bathroom, Corridor, Staircase, Region, Other };

/// Corner magnitudes of generated paths. Lattice draws +-45/+-90 only;
/// Free draws any corner in [35, 100] degrees and adds gentle sub-threshold
/// bends, which is what makes turn-set resolution matter.
enum class AngleProfile { Lattice, Free };

std::string_view to_string(LengthCategory c);
std::string_view to_string(SceneType t);
std::string_view to_string(AngleProfile p);
std::optional<LengthCategory> category_from_string(std::string_view s);
std::optional<SceneType> scene_type_from_string(std::string_view s);
std::optional<AngleProfile> angle_profile_from_string(std::string_view s);

inline constexpr SceneType kAllSceneTypes[] = {SceneType::Bedroom,  SceneType::Kitchen,   SceneType::LivingRoom,
                                               SceneType::Bathroom, SceneType::Corridor,  SceneType::Staircase,
                                               SceneType::Region,   SceneType::Other};
inline constexpr LengthCategory kAllCategories[] = {LengthCategory::Short, LengthCategory::Medium,
                                                    LengthCategory::Long};

/// Inclusive corner-count band: Short 0-2, Medium 3-5, Long 6-9.
std::pair<int, int> corner_band(LengthCategory c);
LengthCategory category_for_corners(std::size_t corners);

struct ScenarioSpec {
  LengthCategory category = LengthCategory::Short;
  SceneType scene_type = SceneType::Other;
  std::uint64_t seed = 0;
  AngleProfile angles = AngleProfile::Lattice;
  bool clutter = true;  // small boxes flanking the path at tight gaps

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct Scenario {
  ScenarioSpec spec;
  SceneGrid scene;
  Sketch sketch;
  Polyline reference;           // metric ground-truth path
  std::optional<Polyline> area;  // coverage target for Region scenes
  std::size_t corners = 0;       // corner keypoints over the path segments
};

/// Corner keypoints summed over the path segments of a segmented sketch.
std::size_t path_corner_count(const std::vector<Segment>& segments);

/// Deterministic in (spec, params). Throws GenerationFailed.
Scenario generate_scenario(const ScenarioSpec& spec, const ControlParams& params = {});

}  // namespace sketchact
