#pragma once

#include "ctxrl/envs/environment.hpp"

namespace ctxrl::envs {

struct PendulumConfig {
  double dt = 0.05;
  double max_speed = 8.0;
  double max_torque = 2.0;
  int max_steps = 200;
  double default_g = 10.0;
  double default_l = 1.0;
  double default_m = 1.0;
};

struct PendulumPhysics {
  double g = 10.0;
  double l = 1.0;
  double m = 1.0;
};

struct PendulumState {
  double theta = 0.0;      // rad, 0 is upright, kept in (-pi, pi]
  double theta_dot = 0.0;  // rad/s
  int steps = 0;

  /// [cos theta, sin theta, theta_dot]
  Vector observation() const;
};

/// Maps a context over any subset of {g, l, m} to full physics; unvaried
/// dimensions keep their defaults. Out-of-bounds values are a ConfigError.
PendulumPhysics pendulum_physics(const ContextSpace& space, const ContextVector& context,
                                 const PendulumConfig& config = {});

/// theta ~ U(-pi, pi), theta_dot ~ U(-1, 1).
PendulumState pendulum_reset(const ContextSpace& space, const ContextVector& context, Rng& rng,
                             const PendulumConfig& config = {});

/// Frictionless pendulum update with semi-implicit Euler:
///   w' = clip(w + (3g/(2l) sin th + 3/(m l^2) u) dt, -8, 8),  th' = th + w' dt,
/// reward = -(wrap(th)^2 + 0.1 w^2 + 0.001 u^2) on the pre-step state.
StepResult pendulum_step(PendulumState& state, double torque, const PendulumPhysics& physics,
                         const PendulumConfig& config = {});

double wrap_angle(double theta);

class PendulumEnv final : public Environment {
 public:
  PendulumEnv(ContextSpace space, PendulumConfig config = {});

  std::string id() const override { return "pendulum"; }
  int observation_dim() const override { return 3; }
  int action_dim() const override { return 1; }
  Vector action_bound() const override;
  int max_steps() const override { return config_.max_steps; }
  const ContextSpace& context_space() const override { return space_; }

  Vector reset(const ContextVector& context, Rng& rng) override;
  StepResult step(const Vector& action, Rng& rng) override;

  std::vector<std::string> trace_header() const override;
  std::vector<double> trace_row() const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PendulumEnv>(*this); }

  const PendulumState& state() const noexcept { return state_; }
  const PendulumPhysics& physics() const noexcept { return physics_; }

 private:
  ContextSpace space_;
  PendulumConfig config_;
  PendulumPhysics physics_;
  PendulumState state_;
};

}  // namespace ctxrl::envs
