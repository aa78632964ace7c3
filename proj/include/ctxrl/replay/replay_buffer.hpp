#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <vector>

#include "ctxrl/envs/context_space.hpp"
#include "ctxrl/util/random.hpp"

namespace ctxrl::replay {

using envs::ContextVector;
using nn::Vector;

struct Transition {
  Vector obs;
  Vector action;  // policy units, each component in [-1, 1]
  double reward = 0.0;
  Vector next_obs;
  bool done = false;  // cuts the bootstrap
  int context_id = -1;
  ContextVector context;
  std::int64_t episode = -1;  // provenance: global episode index
};

/// N transitions sharing one context id. An empty set is the cold-start marker.
struct ContextSet {
  int context_id = -1;
  std::vector<const Transition*> members;

  bool empty() const noexcept { return members.empty(); }
  std::size_t size() const noexcept { return members.size(); }
};

/// FIFO ring buffer with a per-context index of sequence numbers. Pointers
/// returned by the samplers stay valid until the next insert.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1'000'000);

  /// Throws ContractError when `context_id` disagrees with `context` or the
  /// observation widths differ.
  void insert(Transition t);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t inserted() const noexcept { return next_seq_; }

  /// B draws, uniform with replacement. Throws NotReadyError when empty.
  std::vector<const Transition*> sample_minibatch(std::size_t batch, Rng& rng) const;

  /// N draws with replacement among the transitions of `context_id`; empty
  /// marker when there are none.
  ContextSet sample_context_set(int context_id, std::size_t n, Rng& rng) const;

  /// Transitions currently indexed under `context_id`.
  std::size_t context_count(int context_id) const;
  /// Same count by scanning storage.
  std::size_t scan_count(int context_id) const;
  std::vector<int> context_ids() const;

  /// Oldest first.
  const Transition& at(std::size_t i) const;

  /// Debug dump in the tensor-archive format.
  void dump(const std::filesystem::path& path) const;

 private:
  const Transition& by_seq(std::uint64_t seq) const { return slots_[seq % capacity_]; }

  std::size_t capacity_;
  std::size_t size_ = 0;
  std::uint64_t next_seq_ = 0;
  std::vector<Transition> slots_;
  std::map<int, std::deque<std::uint64_t>> index_;
};

}  // namespace ctxrl::replay
