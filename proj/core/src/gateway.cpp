#include "cfsmkit/gateway.hpp"

#include <vector>

namespace cfsmkit {

StateId inserted_state_name(const Transition& t) {
  return t.from + "^(" + t.from + "," + to_string(t.action) + "," + t.to + ")";
}

std::optional<Transition> Gateway::origin(const StateId& q) const {
  auto it = inserted.find(q);
  if (it == inserted.end()) return std::nullopt;
  return it->second;
}

Gateway make_gateway(const Cfsm& m, const Role& partner) {
  const Role& self = m.subject();
  if (partner == self) {
    throw PreconditionError("gateway partner " + partner.name + " is the machine's own role");
  }
  if (m.peers().contains(partner)) {
    throw PreconditionError("gateway partner " + partner.name + " already communicates with " + self.name);
  }

  Gateway gw;
  gw.partner = partner;
  std::vector<StateId> states = m.states();
  std::vector<Transition> ts;
  ts.reserve(2 * m.transitions().size());

  for (const auto& t : m.transitions()) {
    StateId mid = inserted_state_name(t);
    if (m.has_state(mid) || gw.inserted.contains(mid)) {
      throw StructuralError("inserted state name '" + mid + "' collides with an existing state");
    }
    const Message& a = t.action.message;
    if (t.action.is_send()) {
      // (q, Hs!a, q')  =>  q --KH?a--> mid --Hs!a--> q'
      ts.push_back({t.from, Action{Channel{partner, self}, Direction::Receive, a}, mid});
      ts.push_back({mid, t.action, t.to});
    } else {
      // (q, sH?a, q')  =>  q --sH?a--> mid --HK!a--> q'
      ts.push_back({t.from, t.action, mid});
      ts.push_back({mid, Action{Channel{self, partner}, Direction::Send, a}, t.to});
    }
    states.push_back(mid);
    gw.inserted.emplace(std::move(mid), t);
  }

  gw.machine = Cfsm(self, std::move(states), m.initial(), std::move(ts), m.messages());
  return gw;
}

Cfsm gateway(const Cfsm& m, const Role& partner) { return make_gateway(m, partner).machine; }

}  // namespace cfsmkit
