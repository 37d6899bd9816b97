#include "sketchact/policy.hpp"

#include "sketchact/common.hpp"

#include <cmath>

namespace sketchact {

std::string_view to_string(MacroAction a) {
  switch (a) {
    case MacroAction::Forward: return "forward";
    case MacroAction::TurnP45: return "turn_p45";
    case MacroAction::TurnN45: return "turn_n45";
    case MacroAction::TurnP90: return "turn_p90";
    case MacroAction::TurnN90: return "turn_n90";
    case MacroAction::CheckUnder: return "check_under";
    case MacroAction::CoverArea: return "cover_area";
    case MacroAction::TurnP22_5: return "turn_p22_5";
    case MacroAction::TurnN22_5: return "turn_n22_5";
  }
  return "?";
}

std::optional<MacroAction> macro_from_string(std::string_view s) {
  for (auto a : {MacroAction::Forward, MacroAction::TurnP45, MacroAction::TurnN45, MacroAction::TurnP90,
                 MacroAction::TurnN90, MacroAction::CheckUnder, MacroAction::CoverArea, MacroAction::TurnP22_5,
                 MacroAction::TurnN22_5})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

double turn_degrees(MacroAction a) {
  switch (a) {
    case MacroAction::TurnP45: return 45.0;
    case MacroAction::TurnN45: return -45.0;
    case MacroAction::TurnP90: return 90.0;
    case MacroAction::TurnN90: return -90.0;
    case MacroAction::TurnP22_5: return 22.5;
    case MacroAction::TurnN22_5: return -22.5;
    default: return 0.0;
  }
}

bool is_turn(MacroAction a) { return turn_degrees(a) != 0.0; }

MacroAction turn_token(double signed_deg) {
  if (signed_deg == 45.0) return MacroAction::TurnP45;
  if (signed_deg == -45.0) return MacroAction::TurnN45;
  if (signed_deg == 90.0) return MacroAction::TurnP90;
  if (signed_deg == -90.0) return MacroAction::TurnN90;
  if (signed_deg == 22.5) return MacroAction::TurnP22_5;
  if (signed_deg == -22.5) return MacroAction::TurnN22_5;
  throw Error(ErrorCode::UnsupportedTurn, "no macro-action for a turn of " + std::to_string(signed_deg) + " deg");
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Rule1: return "rule1";
    case Rule::Rule2: return "rule2";
    case Rule::Rule3: return "rule3";
    case Rule::Rule4: return "rule4";
    case Rule::Rule5: return "rule5";
    case Rule::Rule6: return "rule6";
  }
  return "?";
}

std::vector<double> turn_thresholds(const std::vector<double>& turn_set) {
  std::vector<double> out;
  double prev = 0.0;
  for (double m : turn_set) {
    out.push_back(0.5 * (prev + m));
    prev = m;
  }
  return out;
}

double quantize_turn(double delta_yaw_deg, const std::vector<double>& turn_set) {
  const double mag = std::abs(delta_yaw_deg);
  const auto thresholds = turn_thresholds(turn_set);
  double chosen = 0.0;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (mag >= thresholds[i]) chosen = turn_set[i];
  return delta_yaw_deg > 0.0 ? chosen : -chosen;
}

namespace {

constexpr double kConfArea = 0.97;
constexpr double kConfForward = 0.92;
constexpr double kConfTurn90 = 0.95;
constexpr double kConfCheckUnder = 0.88;
constexpr double kConfOther = 0.90;

PolicyDecision turn_decision(double signed_deg, Rule rule) {
  const MacroAction a = turn_token(signed_deg);
  return {a, std::abs(signed_deg) == 90.0 ? kConfTurn90 : kConfOther, rule};
}

/// Turn to take when forward is forbidden but the heading change is inside
/// the forward band: away from the contact side, left on ties.
double turn_away(const PolicyInput& in) {
  const auto& set = in.params.turn_set;
  double mag = set.front();
  for (double m : set)
    if (m == 45.0) mag = 45.0;
  return in.perception.lateral_offset_m > 0.0 ? -mag : mag;
}

}  // namespace

PolicyDecision classify_segment(const PolicyInput& in, bool strict) {
  if (!in.is_path && !in.is_area && !in.is_closed)
    throw Error(ErrorCode::InconsistentInput, "segment is neither a path nor an area");
  if (in.under_table_prior < 0.0 || in.under_table_prior > 1.0 || in.traversable_prior < 0.0 ||
      in.traversable_prior > 1.0)
    throw Error(ErrorCode::InconsistentInput, "scene priors must lie in [0, 1]");
  const auto& p = in.perception;
  if (strict && !p.eta && (p.obs_ahead || p.h_est_m || p.obstacle_distance_m))
    throw Error(ErrorCode::InconsistentInput, "perception fields populated while eta = 0");

  // Rule 1: areas.
  if (in.is_area || in.is_closed) return {MacroAction::CoverArea, kConfArea, Rule::Rule1};

  // +-180 keeps its sign; anything beyond is wrapped first.
  const double dpsi = std::abs(in.delta_yaw_deg) <= 180.0 ? in.delta_yaw_deg : wrap_deg(in.delta_yaw_deg);
  const double turn = quantize_turn(dpsi, in.params.turn_set);

  // Rule 4: only inside an obstacle-handling context.
  if (p.eta && p.obs_ahead) {
    if (!p.h_est_m) return {MacroAction::CheckUnder, kConfCheckUnder, Rule::Rule4};
    if (*p.h_est_m < in.params.h_clearance_m) {
      if (turn != 0.0) return turn_decision(turn, Rule::Rule4);
      return turn_decision(turn_away(in), Rule::Rule4);
    }
    // Clearance suffices: forward stays allowed, fall through.
  }

  // Rule 2: turns.
  if (turn != 0.0) return turn_decision(turn, Rule::Rule2);

  // Rule 3: forward.
  return {MacroAction::Forward, kConfForward, Rule::Rule3};
}

PolicyRegistry::PolicyRegistry() {
  policies_["rules"] = [](const PolicyInput& in) { return classify_segment(in); };
}

PolicyRegistry& PolicyRegistry::global() {
  static PolicyRegistry registry;
  return registry;
}

void PolicyRegistry::add(const std::string& name, Policy policy) { policies_[name] = std::move(policy); }

const Policy& PolicyRegistry::get(const std::string& name) const {
  const auto it = policies_.find(name);
  if (it == policies_.end()) throw Error(ErrorCode::ValidationFailed, "unknown policy '" + name + "'", "/policy");
  return it->second;
}

std::vector<std::string> PolicyRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : policies_) out.push_back(k);
  return out;
}

}  // namespace sketchact
