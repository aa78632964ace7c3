#pragma once

#include <string>
#include <vector>

#include "ctxrl/nn/tensor.hpp"

namespace ctxrl::envs {

using nn::Vector;

struct ContextDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

/// Sampling bounds of the randomized dynamics parameters, in SI units.
class ContextSpace {
 public:
  ContextSpace() = default;
  /// Throws ConfigError when a name repeats or lower >= upper.
  explicit ContextSpace(std::vector<ContextDim> dims);

  std::size_t size() const noexcept { return dims_.size(); }
  bool empty() const noexcept { return dims_.empty(); }
  const std::vector<ContextDim>& dims() const noexcept { return dims_; }
  const ContextDim& dim(std::size_t i) const { return dims_.at(i); }
  /// -1 when absent.
  int index_of(const std::string& name) const;

  bool contains(const Vector& values) const;
  /// Throws ConfigError naming the first offending dimension.
  void require_contains(const Vector& values) const;

  /// Affine map of each dimension onto [-1, 1].
  Vector normalize(const Vector& values) const;
  Vector denormalize(const Vector& unit) const;

 private:
  std::vector<ContextDim> dims_;
};

/// One concrete context drawn from a set. `context_id` indexes that set and is
/// the identity used for grouping transitions.
struct ContextVector {
  Vector values;
  int context_id = -1;
};

/// The pendulum's (g, l, m) defaults are 10 m/s^2, 1 m and 1 kg; each varied
/// dimension spans 0.1x to 2x of its default.
ContextSpace pendulum_context_space(const std::vector<std::string>& varied);

/// Box mass, box-tool friction, box-table friction and (optionally) CoM offset.
ContextSpace pushing_context_space(const std::vector<std::string>& varied);

}  // namespace ctxrl::envs
