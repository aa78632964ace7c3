#pragma once

#include <Eigen/Dense>

#include "ctxrl/envs/environment.hpp"

namespace ctxrl::envs {

using Vec2 = Eigen::Vector2d;

struct Rect2 {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  bool contains(const Vec2& p) const { return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max; }
};

struct PushConfig {
  // Geometry: box long side runs along its body x axis.
  double box_length = 0.17;
  double box_width = 0.105;
  double pusher_radius = 0.015;

  // Timing. Each action lasts `min_substeps + i` physics steps, i ~ U{0..substep_choices-1}.
  double physics_dt = 0.005;
  int min_substeps = 8;
  int substep_choices = 5;
  int max_steps = 250;

  double action_cap = 0.01;  // m per axis per step
  double delta = 0.10;       // reward distance normalization
  double r_fail = -50.0;
  double success_threshold = 0.03;

  // Observation noise on the box pose.
  double position_noise = 0.003;
  double orientation_noise = 0.05;

  // Compliant pusher: first-order tracking of the target with time constant
  // `tracking_time_constant`, loaded by the contact force through `stiffness`.
  double stiffness = 500.0;  // N/m
  double tracking_time_constant = 0.02;
  double gravity = 9.81;

  Vec2 goal{0.50, 0.015};
  Rect2 workspace{0.30, 0.70, -0.10, 0.45};

  // Reset distributions.
  double robot_x_min = 0.45, robot_x_max = 0.55;
  double robot_y_min = 0.25, robot_y_max = 0.35;
  double box_rel_x_min = -0.03, box_rel_x_max = 0.03;
  double box_rel_y_min = -0.1025, box_rel_y_max = -0.0675;
  double box_theta_min = -0.5236, box_theta_max = 0.5236;

  // Values used for context dimensions that are not randomized.
  double default_mass = 0.55;
  double default_tool_friction = 0.3;
  double default_table_friction = 0.5;
  double default_com_offset = 0.0;
};

struct PushPhysics {
  double mass = 0.55;
  double tool_friction = 0.3;
  double table_friction = 0.5;
  double com_offset = 0.0;  // along the box long axis, from the centroid
};

struct BoxPose {
  Vec2 position{0.0, 0.0};  // centroid
  double theta = 0.0;
};

struct PushState {
  Vec2 ee{0.0, 0.0};      // pusher (end-effector) position
  Vec2 target{0.0, 0.0};  // commanded pusher target
  BoxPose box;            // true pose
  BoxPose observed_box;   // pose with tracking noise, what the policy sees
  Vec2 prev_action{0.0, 0.0};
  Vec2 goal{0.0, 0.0};
  int steps = 0;

  /// [x_ee, y_ee, x_o, y_o, theta_o, dx_prev, dy_prev] using the noisy box pose.
  Vector observation() const;
};

/// Disc-rectangle proximity in world frame.
struct Contact {
  double penetration = 0.0;  // > 0 when overlapping
  Vec2 normal{0.0, 0.0};     // unit, from the disc centre into the box
  Vec2 point{0.0, 0.0};      // closest point on the box boundary
};

PushPhysics push_physics(const ContextSpace& space, const ContextVector& context, const PushConfig& config = {});

Contact disc_box_contact(const Vec2& disc, double radius, const BoxPose& box, const PushConfig& config);

/// Moves the pusher one physics step toward `state.target` and resolves any
/// disc-box penetration with the quasi-static limit-surface model. Returns the
/// box CoM displacement of this substep.
double push_substep(PushState& state, const PushPhysics& physics, const PushConfig& config);

/// Samples the start configuration. Box poses touching the pusher are re-drawn.
PushState push_reset(const ContextSpace& space, const ContextVector& context, Rng& rng, const PushConfig& config = {});

/// Applies one target displacement (clipped to the action cap). Reward is
/// -log(1 + d/delta) plus r_fail when the target leaves the workspace; success
/// and reward use the true box pose.
StepResult push_step(PushState& state, const Vec2& action, const PushPhysics& physics, Rng& rng,
                     const PushConfig& config = {});

/// Adds tracking noise to the true pose.
BoxPose observe_box(const BoxPose& box, Rng& rng, const PushConfig& config);

double goal_distance(const PushState& state);

class PushingEnv final : public Environment {
 public:
  PushingEnv(ContextSpace space, PushConfig config = {});

  std::string id() const override { return "pushing"; }
  int observation_dim() const override { return 7; }
  int action_dim() const override { return 2; }
  Vector action_bound() const override;
  int max_steps() const override { return config_.max_steps; }
  const ContextSpace& context_space() const override { return space_; }

  Vector reset(const ContextVector& context, Rng& rng) override;
  StepResult step(const Vector& action, Rng& rng) override;
  bool success() const override { return success_; }
  double failure_penalty() const override { return config_.r_fail; }
  std::optional<double> goal_distance() const override { return envs::goal_distance(state_); }

  std::vector<std::string> trace_header() const override;
  std::vector<double> trace_row() const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PushingEnv>(*this); }

  const PushState& state() const noexcept { return state_; }
  const PushConfig& config() const noexcept { return config_; }

 private:
  ContextSpace space_;
  PushConfig config_;
  PushPhysics physics_;
  PushState state_;
  bool success_ = false;
};

}  // namespace ctxrl::envs
