#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfsmkit/system.hpp"

namespace cfsmkit {

/// All buffers empty and every machine in a receiving state.
bool is_deadlock(const CommunicatingSystem& s, const Configuration& c);

/// Every machine final while some buffer is nonempty.
bool is_orphan_message(const CommunicatingSystem& s, const Configuration& c);

/// The role stuck in a receiving state: every channel it could consume from
/// is nonempty and has a head it cannot receive. Nullopt if there is none.
std::optional<Role> unspecified_reception_role(const CommunicatingSystem& s, const Configuration& c);
bool is_unspecified_reception(const CommunicatingSystem& s, const Configuration& c);

enum class VerdictKind { Violation, SafeWithinBound, SafeComplete };

const char* to_string(VerdictKind k);

struct Witness {
  std::vector<Action> trace;
  Configuration configuration;
  /// Configuration reached after each action of `trace`.
  std::vector<Configuration> path;
  /// For unspecified receptions, the blocked role.
  std::optional<Role> role;
};

struct Verdict {
  VerdictKind kind = VerdictKind::SafeComplete;
  std::optional<Witness> witness;

  bool violated() const { return kind == VerdictKind::Violation; }
};

enum class Property { Deadlock, OrphanMessage, UnspecifiedReception };

const char* to_string(Property p);

struct ExplorationStats {
  std::size_t configurations = 0;
  std::size_t edges = 0;
  std::size_t max_buffer_bound = 0;
  std::size_t max_states = 0;
  bool frontier_truncated = false;
  bool budget_exhausted = false;
};

struct SafetyReport {
  Verdict deadlock;
  Verdict orphan_message;
  Verdict unspecified_reception;
  ExplorationStats stats;

  const Verdict& verdict(Property p) const;
  bool any_violation() const;
  bool all_complete() const;
};

/// Explores `s` within the given bounds and evaluates the three predicates
/// on every stored configuration. The first violation per property in BFS
/// order becomes its witness.
SafetyReport check_safety(const CommunicatingSystem& s, const ExploreOptions& options = {});

/// Evaluates the predicates over an existing exploration.
SafetyReport check_safety(const ExplorationResult& r);

}  // namespace cfsmkit
