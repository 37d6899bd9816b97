#pragma once

#include <vector>

namespace sketchact {

/// Runtime control parameters of the sketch-to-action loop. Defaults are the
/// household mobile-base configuration.
struct ControlParams {
  double l_max_m = 0.5;          // maximum path segment length
  double theta_turn_deg = 30.0;  // corner threshold for segmentation
  double hysteresis_deg = 5.0;   // falling threshold is theta_turn - hysteresis
  double d_step_m = 0.05;        // forward increment
  double d_safety_m = 0.30;      // obstacle look-ahead
  double h_clearance_m = 1.00;   // under-obstacle clearance required for a maneuver
  double kappa = 0.08;           // pixel-proxy ratio for uncalibrated sketches
  double merge_travel_m = 0.20;  // merge consecutive short path segments below this
  double v_mps = 0.30;
  double a_brake_mps2 = 0.60;
  double t_latency_s = 0.10;
  double delta_sensor_m = 0.10;
  double lane_spacing_m = 0.25;
  double turn_window_cap_m = 0.05;  // cap on the turning-angle window arc length
  std::vector<double> turn_set{45.0, 90.0};

  friend bool operator==(const ControlParams&, const ControlParams&) = default;
};

/// Physical description of the robot the translator targets.
struct PlatformProfile {
  double footprint_radius_m = 0.15;
  double tool_width_m = 0.25;

  friend bool operator==(const PlatformProfile&, const PlatformProfile&) = default;
};

/// v^2 / (2 a_brake) + v t_latency + delta_sensor. Throws NonPositiveBrake.
double stopping_distance(double v, double a_brake, double t_latency, double delta_sensor);

/// Minimum under-obstacle clearance for a tool envelope h_tool plus margin.
double required_clearance(double h_tool, double epsilon);

/// Pixel surrogate for L_max: kappa * sqrt(W^2 + H^2). Throws NonPositiveDims.
/// Kappa outside [0.06, 0.10] is accepted; see kappa_in_recommended_band.
double pixel_proxy_lmax(double width, double height, double kappa);

bool kappa_in_recommended_band(double kappa);

/// Checks every ControlParams invariant (positivity, d_safety >= stopping
/// distance, non-empty sorted turn set). Throws ValidationFailed with the
/// offending field as location.
void validate(const ControlParams& params);

/// The three turn-set variants of the action-resolution experiment.
std::vector<double> coarse_turn_set();
std::vector<double> baseline_turn_set();
std::vector<double> fine_turn_set();

}  // namespace sketchact
