#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfsmkit {

/// Raised when a machine, system or configuration is malformed, or when an
/// operation is given a state or role it does not know about.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (overlapping roles,
/// a role that is not present, incompatible interfaces...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Role {
  std::string name;

  Role() = default;
  explicit Role(std::string n);

  auto operator<=>(const Role&) const = default;
};

struct Message {
  std::string label;

  Message() = default;
  explicit Message(std::string l);

  auto operator<=>(const Message&) const = default;
};

/// Point-to-point FIFO channel from `sender` to `receiver`.
struct Channel {
  Role sender;
  Role receiver;

  Channel() = default;
  Channel(Role s, Role r);

  auto operator<=>(const Channel&) const = default;
};

enum class Direction : std::uint8_t { Send, Receive };

char direction_symbol(Direction d);

struct Action {
  Channel channel;
  Direction direction{Direction::Send};
  Message message;

  auto operator<=>(const Action&) const = default;

  bool is_send() const { return direction == Direction::Send; }
  bool is_receive() const { return direction == Direction::Receive; }

  /// The role whose machine performs this action.
  const Role& actor() const { return is_send() ? channel.sender : channel.receiver; }
  /// The other endpoint of the channel.
  const Role& peer() const { return is_send() ? channel.receiver : channel.sender; }
};

Action send(const std::string& sender, const std::string& receiver, const std::string& msg);
Action receive(const std::string& sender, const std::string& receiver, const std::string& msg);

/// Edge label in the `sr!a` / `sr?a` notation. Roles longer than one
/// character are separated by a dot so labels stay unambiguous.
std::string to_string(const Channel& c);
std::string to_string(const Action& a);

using StateId = std::string;

struct Transition {
  StateId from;
  Action action;
  StateId to;

  auto operator<=>(const Transition& o) const {
    if (auto c = from <=> o.from; c != 0) return c;
    if (auto c = action <=> o.action; c != 0) return c;
    return to <=> o.to;
  }
  bool operator==(const Transition&) const = default;
};

std::string to_string(const Transition& t);

enum class StateKind : std::uint8_t { Final, Sending, Receiving, Mixed };

const char* to_string(StateKind k);

/// A communicating finite-state machine for a single role. Immutable once
/// constructed; states and transitions are kept sorted, which is also the
/// canonical form used by serialization.
class Cfsm {
 public:
  Cfsm() = default;

  /// Throws StructuralError unless the initial state and every transition
  /// endpoint are declared states and every action involves `subject`.
  /// Messages carried by transitions are added to `messages` automatically.
  Cfsm(Role subject, std::vector<StateId> states, StateId initial,
       std::vector<Transition> transitions, std::set<Message> messages = {});

  const Role& subject() const { return subject_; }
  const std::vector<StateId>& states() const { return states_; }
  const StateId& initial() const { return initial_; }
  const std::set<Message>& messages() const { return messages_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  bool has_state(const StateId& q) const;
  /// Transitions leaving `q`, in canonical order. Throws for unknown states.
  std::vector<Transition> outgoing(const StateId& q) const;
  /// Every role other than the subject appearing on some channel.
  std::set<Role> peers() const;

  bool operator==(const Cfsm&) const = default;

 private:
  Role subject_;
  std::vector<StateId> states_;
  StateId initial_;
  std::set<Message> messages_;
  std::vector<Transition> transitions_;
};

StateKind classify_state(const Cfsm& m, const StateId& q);

/// Two transitions from the same state that carry the same message in the
/// same direction but lead to different targets. Channels are ignored.
struct DeterminismWitness {
  Transition first;
  Transition second;
};

std::optional<DeterminismWitness> receive_nondeterminism(const Cfsm& m);
std::optional<DeterminismWitness> send_nondeterminism(const Cfsm& m);

bool is_receive_deterministic(const Cfsm& m);
bool is_send_deterministic(const Cfsm& m);
bool is_io_deterministic(const Cfsm& m);

std::vector<StateId> mixed_states(const Cfsm& m);
bool has_mixed_states(const Cfsm& m);

}  // namespace cfsmkit
