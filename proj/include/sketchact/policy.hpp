#pragma once

#include "sketchact/params.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sketchact {

/// Discrete macro-action vocabulary. The 22.5 degree turns exist only for
/// the fine turn-set variant; the default vocabulary never emits them.
enum class MacroAction {
  Forward,
  TurnP45,
  TurnN45,
  TurnP90,
  TurnN90,
  CheckUnder,
  CoverArea,
  TurnP22_5,
  TurnN22_5,
};

std::string_view to_string(MacroAction a);
std::optional<MacroAction> macro_from_string(std::string_view s);

/// Signed rotation of a turn token in degrees; 0 for non-turn tokens.
double turn_degrees(MacroAction a);
bool is_turn(MacroAction a);

/// Turn token for a signed magnitude. Throws UnsupportedTurn.
MacroAction turn_token(double signed_deg);

/// Decision-relevant projection of live perception, gated by eta.
struct PerceptionSnapshot {
  bool eta = false;
  bool obs_ahead = false;
  std::optional<double> obstacle_distance_m;
  std::optional<double> h_est_m;  // empty means "unknown"
  double lateral_offset_m = 0.0;  // > 0 when the first contact lies left of the heading
};

struct PolicyInput {
  std::size_t segment_index = 0;
  std::size_t n_seg = 1;
  bool is_path = true;
  bool is_area = false;
  bool is_closed = false;
  double length_m = 0.0;
  double delta_yaw_deg = 0.0;
  double mean_curvature = 0.0;
  std::size_t corner_count = 0;
  double under_table_prior = 0.0;
  double traversable_prior = 1.0;
  PerceptionSnapshot perception;
  ControlParams params;
};

enum class Rule { Rule1, Rule2, Rule3, Rule4, Rule5, Rule6 };
std::string_view to_string(Rule r);

struct PolicyDecision {
  MacroAction action = MacroAction::Forward;
  double confidence = 0.0;
  Rule rule_fired = Rule::Rule3;
};

/// Thresholds on |delta_yaw| for each turn magnitude: midpoints between
/// consecutive magnitudes of the sorted turn set (with 0 below the first).
/// For {45, 90} this yields 22.5 and 67.5.
std::vector<double> turn_thresholds(const std::vector<double>& turn_set);

/// Quantizes a heading change to the turn set: 0 when below the first
/// threshold, otherwise the signed magnitude of the highest band reached.
double quantize_turn(double delta_yaw_deg, const std::vector<double>& turn_set);

/// The deterministic segment-level decision rules. Precedence is area >
/// obstacle (only with eta = 1) > turn > forward. With strict = true an
/// eta = 0 input carrying perception fields is rejected.
PolicyDecision classify_segment(const PolicyInput& input, bool strict = false);

using Policy = std::function<PolicyDecision(const PolicyInput&)>;

/// Name -> policy table. "rules" is always present.
class PolicyRegistry {
 public:
  PolicyRegistry();
  static PolicyRegistry& global();

  void add(const std::string& name, Policy policy);
  const Policy& get(const std::string& name) const;  // throws ValidationFailed
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Policy> policies_;
};

}  // namespace sketchact
