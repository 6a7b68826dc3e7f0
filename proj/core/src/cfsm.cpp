#include "cfsmkit/cfsm.hpp"

#include <algorithm>
#include <map>

namespace cfsmkit {

Role::Role(std::string n) : name(std::move(n)) {
  if (name.empty()) throw StructuralError("role name must be nonempty");
}

Message::Message(std::string l) : label(std::move(l)) {
  if (label.empty()) throw StructuralError("message label must be nonempty");
}

Channel::Channel(Role s, Role r) : sender(std::move(s)), receiver(std::move(r)) {
  if (sender == receiver) {
    throw StructuralError("channel endpoints coincide: " + sender.name);
  }
}

char direction_symbol(Direction d) { return d == Direction::Send ? '!' : '?'; }

Action send(const std::string& sender, const std::string& receiver, const std::string& msg) {
  return Action{Channel{Role{sender}, Role{receiver}}, Direction::Send, Message{msg}};
}

Action receive(const std::string& sender, const std::string& receiver, const std::string& msg) {
  return Action{Channel{Role{sender}, Role{receiver}}, Direction::Receive, Message{msg}};
}

std::string to_string(const Channel& c) {
  if (c.sender.name.size() == 1 && c.receiver.name.size() == 1) {
    return c.sender.name + c.receiver.name;
  }
  return c.sender.name + "." + c.receiver.name;
}

std::string to_string(const Action& a) {
  return to_string(a.channel) + direction_symbol(a.direction) + a.message.label;
}

std::string to_string(const Transition& t) {
  return "(" + t.from + ", " + to_string(t.action) + ", " + t.to + ")";
}

const char* to_string(StateKind k) {
  switch (k) {
    case StateKind::Final: return "final";
    case StateKind::Sending: return "sending";
    case StateKind::Receiving: return "receiving";
    case StateKind::Mixed: return "mixed";
  }
  return "?";
}

Cfsm::Cfsm(Role subject, std::vector<StateId> states, StateId initial,
           std::vector<Transition> transitions, std::set<Message> messages)
    : subject_(std::move(subject)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      messages_(std::move(messages)),
      transitions_(std::move(transitions)) {
  if (subject_.name.empty()) throw StructuralError("machine subject must be nonempty");
  std::sort(states_.begin(), states_.end());
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

  if (!has_state(initial_)) {
    throw StructuralError("machine " + subject_.name + ": initial state '" + initial_ +
                          "' is not declared");
  }
  for (const auto& t : transitions_) {
    if (!has_state(t.from) || !has_state(t.to)) {
      throw StructuralError("machine " + subject_.name + ": transition " + to_string(t) +
                            " uses an undeclared state");
    }
    if (t.action.actor() != subject_) {
      throw StructuralError("machine " + subject_.name + ": transition " + to_string(t) +
                            " is not performed by its subject");
    }
    messages_.insert(t.action.message);
  }
}

bool Cfsm::has_state(const StateId& q) const {
  return std::binary_search(states_.begin(), states_.end(), q);
}

std::vector<Transition> Cfsm::outgoing(const StateId& q) const {
  if (!has_state(q)) {
    throw StructuralError("machine " + subject_.name + ": unknown state '" + q + "'");
  }
  // transitions_ is sorted by source state first
  auto lo = std::lower_bound(transitions_.begin(), transitions_.end(), q,
                             [](const Transition& t, const StateId& s) { return t.from < s; });
  std::vector<Transition> out;
  for (; lo != transitions_.end() && lo->from == q; ++lo) out.push_back(*lo);
  return out;
}

std::set<Role> Cfsm::peers() const {
  std::set<Role> out;
  for (const auto& t : transitions_) out.insert(t.action.peer());
  return out;
}

StateKind classify_state(const Cfsm& m, const StateId& q) {
  const auto out = m.outgoing(q);
  if (out.empty()) return StateKind::Final;
  const bool any_send = std::any_of(out.begin(), out.end(), [](auto& t) { return t.action.is_send(); });
  const bool any_recv = std::any_of(out.begin(), out.end(), [](auto& t) { return t.action.is_receive(); });
  if (any_send && any_recv) return StateKind::Mixed;
  return any_send ? StateKind::Sending : StateKind::Receiving;
}

namespace {

std::optional<DeterminismWitness> nondeterminism(const Cfsm& m, Direction dir) {
  // key: (source, message); channel deliberately not part of the key
  std::map<std::pair<StateId, Message>, const Transition*> seen;
  for (const auto& t : m.transitions()) {
    if (t.action.direction != dir) continue;
    auto [it, inserted] = seen.try_emplace({t.from, t.action.message}, &t);
    if (!inserted && it->second->to != t.to) return DeterminismWitness{*it->second, t};
  }
  return std::nullopt;
}

}  // namespace

std::optional<DeterminismWitness> receive_nondeterminism(const Cfsm& m) {
  return nondeterminism(m, Direction::Receive);
}

std::optional<DeterminismWitness> send_nondeterminism(const Cfsm& m) {
  return nondeterminism(m, Direction::Send);
}

bool is_receive_deterministic(const Cfsm& m) { return !receive_nondeterminism(m); }
bool is_send_deterministic(const Cfsm& m) { return !send_nondeterminism(m); }
bool is_io_deterministic(const Cfsm& m) {
  return is_receive_deterministic(m) && is_send_deterministic(m);
}

std::vector<StateId> mixed_states(const Cfsm& m) {
  std::vector<StateId> out;
  for (const auto& q : m.states()) {
    if (classify_state(m, q) == StateKind::Mixed) out.push_back(q);
  }
  return out;
}

bool has_mixed_states(const Cfsm& m) { return !mixed_states(m).empty(); }

}  // namespace cfsmkit
