#include "sketchact/params.hpp"

#include "sketchact/common.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sketchact {

double stopping_distance(double v, double a_brake, double t_latency, double delta_sensor) {
  if (!(a_brake > 0.0)) throw Error(ErrorCode::NonPositiveBrake, "braking deceleration must be > 0");
  return v * v / (2.0 * a_brake) + v * t_latency + delta_sensor;
}

double required_clearance(double h_tool, double epsilon) {
  if (h_tool < 0.0 || epsilon < 0.0)
    throw Error(ErrorCode::ValidationFailed, "tool height and margin must be >= 0");
  return h_tool + epsilon;
}

double pixel_proxy_lmax(double width, double height, double kappa) {
  if (!(width > 0.0) || !(height > 0.0))
    throw Error(ErrorCode::NonPositiveDims, "image dimensions must be positive");
  return kappa * std::hypot(width, height);
}

bool kappa_in_recommended_band(double kappa) { return kappa >= 0.06 && kappa <= 0.10; }

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::ValidationFailed, std::string(field) + " must be strictly positive",
                std::string("/") + field);
}

}  // namespace

void validate(const ControlParams& p) {
  require_positive(p.l_max_m, "l_max_m");
  require_positive(p.theta_turn_deg, "theta_turn_deg");
  require_positive(p.hysteresis_deg, "hysteresis_deg");
  require_positive(p.d_step_m, "d_step_m");
  require_positive(p.d_safety_m, "d_safety_m");
  require_positive(p.h_clearance_m, "h_clearance_m");
  require_positive(p.kappa, "kappa");
  require_positive(p.merge_travel_m, "merge_travel_m");
  require_positive(p.v_mps, "v_mps");
  require_positive(p.a_brake_mps2, "a_brake_mps2");
  require_positive(p.t_latency_s, "t_latency_s");
  require_positive(p.delta_sensor_m, "delta_sensor_m");
  require_positive(p.lane_spacing_m, "lane_spacing_m");
  require_positive(p.turn_window_cap_m, "turn_window_cap_m");
  if (p.hysteresis_deg >= p.theta_turn_deg)
    throw Error(ErrorCode::ValidationFailed, "hysteresis must be below theta_turn", "/hysteresis_deg");

  const double d_stop = stopping_distance(p.v_mps, p.a_brake_mps2, p.t_latency_s, p.delta_sensor_m);
  if (p.d_safety_m < d_stop)
    throw Error(ErrorCode::ValidationFailed,
                "d_safety_m " + std::to_string(p.d_safety_m) + " is below the stopping distance " +
                    std::to_string(d_stop),
                "/d_safety_m");

  if (p.turn_set.empty())
    throw Error(ErrorCode::ValidationFailed, "turn_set must not be empty", "/turn_set");
  for (std::size_t i = 0; i < p.turn_set.size(); ++i) {
    const double m = p.turn_set[i];
    const std::string loc = "/turn_set/" + std::to_string(i);
    if (!(m > 0.0) || m > 180.0)
      throw Error(ErrorCode::ValidationFailed, "turn magnitudes must lie in (0, 180]", loc);
    if (i > 0 && !(m > p.turn_set[i - 1]))
      throw Error(ErrorCode::ValidationFailed, "turn_set must be strictly increasing", loc);
  }
}

std::vector<double> coarse_turn_set() { return {90.0}; }
std::vector<double> baseline_turn_set() { return {45.0, 90.0}; }
std::vector<double> fine_turn_set() { return {22.5, 45.0, 90.0}; }

}  // namespace sketchact
