#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cfsmkit/cfsm.hpp"

namespace cfsmkit {

namespace detail {
class CompiledSystem;
}

/// Role-indexed family of machines. Every channel used by any machine must
/// connect two roles of the system.
class CommunicatingSystem {
 public:
  CommunicatingSystem() = default;
  explicit CommunicatingSystem(std::vector<Cfsm> machines);
  explicit CommunicatingSystem(std::map<Role, Cfsm> machines);

  const std::map<Role, Cfsm>& machines() const { return machines_; }
  const Cfsm& machine(const Role& r) const;
  bool contains(const Role& r) const { return machines_.contains(r); }
  std::vector<Role> roles() const;
  /// Union of the machines' message sets.
  std::set<Message> messages() const;
  std::size_t size() const { return machines_.size(); }

  bool operator==(const CommunicatingSystem&) const = default;

 private:
  std::map<Role, Cfsm> machines_;
};

/// Control state per role plus channel contents. Channels missing from
/// `buffers` are empty; equality treats an absent channel and an empty one
/// the same way.
struct Configuration {
  std::map<Role, StateId> control;
  std::map<Channel, std::vector<Message>> buffers;

  const std::vector<Message>& buffer(const Channel& c) const;
  bool buffers_empty() const;

  bool operator==(const Configuration& o) const;
};

/// Canonical one-line rendering, e.g. `[A=1 B=2 | AB:a.b]`.
std::string to_string(const Configuration& c);
/// 16 hex digits identifying the canonical rendering.
std::string digest(const Configuration& c);

Configuration initial_configuration(const CommunicatingSystem& s);

/// Successor configurations obtained by firing `l` from `c`; empty when `l`
/// is not enabled. Throws StructuralError when `c` does not belong to `s`.
std::vector<Configuration> step(const CommunicatingSystem& s, const Configuration& c, const Action& l);

std::set<Action> enabled_actions(const CommunicatingSystem& s, const Configuration& c);

struct ExploreOptions {
  std::size_t max_buffer_bound = 4;
  std::size_t max_states = 1'000'000;
  unsigned jobs = 1;
  bool record_edges = true;
};

/// Breadth-first under-approximation of the reachable configurations.
class ExplorationResult {
 public:
  struct Edge {
    std::size_t from;
    std::uint32_t action;
    std::size_t to;
  };

  std::size_t size() const;
  Configuration configuration(std::size_t id) const;
  std::vector<Configuration> reachable() const;
  /// Recorded only when ExploreOptions::record_edges is set.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edge_count_; }
  const Action& action(std::uint32_t index) const;
  /// Actions along the BFS tree from the initial configuration to `id`.
  std::vector<Action> trace_to(std::size_t id) const;
  /// Configurations visited along trace_to(id), initial one excluded.
  std::vector<Configuration> path_to(std::size_t id) const;

  /// Some enabled send was suppressed because its buffer was full.
  bool frontier_truncated() const { return frontier_truncated_; }
  /// Exploration stopped because `max_states` configurations were stored.
  bool budget_exhausted() const { return budget_exhausted_; }
  /// Neither truncated nor exhausted: the set is all of RS(S).
  bool complete() const { return !frontier_truncated_ && !budget_exhausted_; }
  std::size_t max_buffer_bound() const { return max_buffer_bound_; }
  std::size_t max_states() const { return max_states_; }

  const detail::CompiledSystem& compiled() const { return *system_; }
  std::span<const std::uint32_t> packed(std::size_t id) const {
    return {arena_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }

 private:
  friend ExplorationResult explore(const CommunicatingSystem&, const ExploreOptions&);

  std::shared_ptr<const detail::CompiledSystem> system_;
  std::vector<std::uint32_t> arena_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::pair<std::size_t, std::uint32_t>> parents_;
  std::vector<Edge> edges_;
  std::size_t edge_count_ = 0;
  bool frontier_truncated_ = false;
  bool budget_exhausted_ = false;
  std::size_t max_buffer_bound_ = 0;
  std::size_t max_states_ = 0;
};

ExplorationResult explore(const CommunicatingSystem& s, const ExploreOptions& options = {});
ExplorationResult explore(const CommunicatingSystem& s, std::size_t max_buffer_bound, std::size_t max_states);

}  // namespace cfsmkit
