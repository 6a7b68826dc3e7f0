#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/parse_error.hpp"

namespace cfsmkit {

// A small global-type language: interactions, sequencing, choices located at
// a deciding role, and loops. `break` leaves the innermost loop; reaching
// the end of a loop body jumps back to its start.
//
//   I->C:trialsNum;
//   loop {
//     J->M:text;
//     choice at M { M->J:ok; break or M->J:fail }
//   }

struct GlobalType;

struct Interaction {
  Role sender;
  Role receiver;
  Message message;
  bool operator==(const Interaction&) const = default;
};

struct Seq {
  std::vector<GlobalType> items;
  bool operator==(const Seq&) const;
};

struct Choice {
  Role decider;
  std::vector<GlobalType> branches;
  bool operator==(const Choice&) const;
};

struct Loop {
  std::vector<GlobalType> body;
  bool operator==(const Loop&) const;
};

struct Break {
  bool operator==(const Break&) const = default;
};

struct End {
  bool operator==(const End&) const = default;
};

struct GlobalType {
  std::variant<Interaction, Seq, Choice, Loop, Break, End> node;
  bool operator==(const GlobalType&) const = default;
};

GlobalType interaction(const std::string& sender, const std::string& receiver, const std::string& msg);
GlobalType seq(std::vector<GlobalType> items);
GlobalType choice(const std::string& decider, std::vector<GlobalType> branches);
GlobalType loop(std::vector<GlobalType> body);
GlobalType brk();
GlobalType end();

/// Violates a structural rule of the language (self-interaction, a choice
/// branch not opened by its decider, `break` outside a loop...).
class GlobalTypeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Role `role` cannot be projected because it behaves differently in two
/// branches of a choice without being able to tell them apart.
class ProjectionError : public std::invalid_argument {
 public:
  ProjectionError(Role role, Role decider, std::size_t branch_a, std::size_t branch_b);
  const Role& role() const { return role_; }
  const Role& decider() const { return decider_; }
  std::size_t branch_a() const { return a_; }
  std::size_t branch_b() const { return b_; }

 private:
  Role role_;
  Role decider_;
  std::size_t a_;
  std::size_t b_;
};

/// Throws GlobalTypeError if `g` breaks a structural rule.
void validate(const GlobalType& g);

GlobalType parse_global_type(std::string_view text);
std::string to_string(const GlobalType& g);

std::set<Role> roles(const GlobalType& g);
std::set<Message> messages(const GlobalType& g);

/// What `project` does with a role that does not occur in the type.
enum class AbsentRole { Reject, Idle };

/// Local machine of `p`: p's sends and receives, with interactions between
/// other roles erased and the result determinized. States are numbered
/// "1", "2", ... in breadth-first order from the initial state. A role not
/// occurring in `g` raises PreconditionError, or with AbsentRole::Idle gets
/// the one-state machine without transitions.
Cfsm project(const GlobalType& g, const Role& p, AbsentRole absent = AbsentRole::Reject);

}  // namespace cfsmkit
