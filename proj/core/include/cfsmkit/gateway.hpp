#pragma once

#include <map>
#include <optional>
#include <string>

#include "cfsmkit/cfsm.hpp"

namespace cfsmkit {

/// Name of the state inserted in the middle of `t`. The whole transition is
/// encoded, so two transitions never share an inserted state.
StateId inserted_state_name(const Transition& t);

/// A gateway machine together with the origin of each inserted state.
struct Gateway {
  Cfsm machine;
  Role partner;
  /// Inserted state -> the transition of the original machine it splits.
  std::map<StateId, Transition> inserted;

  bool is_inserted(const StateId& q) const { return inserted.contains(q); }
  std::optional<Transition> origin(const StateId& q) const;
};

/// Splits every transition of `m` through a fresh state so that each send
/// first waits for the message from `partner` and each receive is forwarded
/// to `partner`. Throws PreconditionError if `partner` is `m`'s subject or
/// already appears on one of its channels.
Gateway make_gateway(const Cfsm& m, const Role& partner);

Cfsm gateway(const Cfsm& m, const Role& partner);

}  // namespace cfsmkit
