#pragma once

#include "sketchact/common.hpp"
#include "sketchact/params.hpp"
#include "sketchact/sketch.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sketchact {

/// SE(2) pose; theta in degrees, kept in (-180, 180].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta_deg = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return unit_from_deg(theta_deg); }
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct NoiseModel {
  double sigma_long_m = 0.0;
  double sigma_lat_m = 0.0;
  double sigma_turn_deg = 0.0;
  std::uint64_t seed = 0;

  /// Calibrated defaults used for the length-degradation experiment.
  static NoiseModel calibrated(std::uint64_t seed = 0) { return {0.005, 0.005, 1.0, seed}; }
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// SplitMix64 finalizer (constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
/// 0x94D049BB133111EB). Used both for seed derivation and as the stream
/// generator.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed for (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Counter-based random stream: value n is mix64(seed + n * golden). Normals
/// use Box-Muller on two consecutive uniforms, so traces replay identically
/// on any platform with IEEE doubles.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct LowLevelCommand {
  enum class Kind { Step, Rotate, Halt, UnderManeuver };
  Kind kind = Kind::Halt;
  double distance_m = 0.0;  // Step / UnderManeuver advance
  double delta_deg = 0.0;   // Rotate
  bool retract = false;     // UnderManeuver

  static LowLevelCommand step(double d) { return {Kind::Step, d, 0.0, false}; }
  static LowLevelCommand rotate(double deg) { return {Kind::Rotate, 0.0, deg, false}; }
  static LowLevelCommand halt() { return {Kind::Halt, 0.0, 0.0, false}; }
  static LowLevelCommand under_maneuver(double advance, bool retract) {
    return {Kind::UnderManeuver, advance, 0.0, retract};
  }
  friend bool operator==(const LowLevelCommand&, const LowLevelCommand&) = default;
};

std::string_view to_string(LowLevelCommand::Kind k);

/// Applies one command. Each call draws exactly three normals from the
/// stream regardless of the command kind or noise level, so a zero-noise
/// run and a noisy run consume the stream identically.
Pose2 apply_command(const Pose2& pose, const LowLevelCommand& cmd, const NoiseModel& noise, RandomStream& rng);

struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// 2D occupancy world. Cell (i, j) covers [i r, (i+1) r] x [j r, (j+1) r]
/// in meters. Everything outside the grid counts as occupied wall.
struct SceneGrid {
  double resolution_m = 0.05;
  int width = 0;   // cells along x
  int height = 0;  // cells along y
  std::vector<std::uint8_t> occupancy;
  std::vector<double> clearance;  // NaN where unannotated
  MetricScale scale;
  int image_width = 0;
  int image_height = 0;
  Pose2 start_pose;
  std::optional<std::string> scene_image_ref;
  PlatformProfile platform;

  static SceneGrid empty(double width_m, double height_m, double resolution_m = 0.05);

  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < width && j < height; }
  std::size_t flat(int i, int j) const { return std::size_t(j) * std::size_t(width) + std::size_t(i); }
  bool occupied(int i, int j) const { return !in_bounds(i, j) || occupancy[flat(i, j)] != 0; }
  std::optional<double> clearance_at(int i, int j) const;
  /// Occupied but high enough to pass beneath.
  bool passable(int i, int j, double h_clearance) const;

  CellIndex cell_of(const Vec2& p) const;
  Vec2 cell_center(int i, int j) const;
  double width_m() const { return width * resolution_m; }
  double height_m() const { return height * resolution_m; }

  /// Marks every cell whose center lies in the axis-aligned box.
  void fill_rect(double x0, double y0, double x1, double y1, std::optional<double> clearance_m = std::nullopt);

  /// Throws ValidationFailed (with location) on broken invariants.
  void validate() const;
};

/// Distance from p to the cell's square.
double distance_to_cell(const SceneGrid& scene, const Vec2& p, int i, int j);

/// Does a disc of radius r at center overlap any cell that blocks it?
/// Blocking cells are occupied cells that are not passable at h_clearance.
bool footprint_blocked(const SceneGrid& scene, const Vec2& center, double radius, double h_clearance);

/// Does a disc overlap any occupied cell at all (passable or not)?
bool footprint_touches_occupied(const SceneGrid& scene, const Vec2& center, double radius);

struct CastHit {
  double distance_m = 0.0;  // free travel before the footprint touches the cell
  CellIndex cell;
  double lateral_offset_m = 0.0;  // signed, left of heading positive
};

/// Sweeps a disc from `pose` along its heading up to max_distance and returns
/// the first occupied cell it would touch (ties broken by cell order).
std::optional<CastHit> cast_footprint(const SceneGrid& scene, const Pose2& pose, double radius, double max_distance);

/// 8-connected component of occupied cells containing `seed` (capped at
/// `limit` cells). Out-of-grid seeds give a single pseudo cell.
std::vector<CellIndex> occupied_region(const SceneGrid& scene, CellIndex seed, std::size_t limit = 20000);

}  // namespace sketchact
