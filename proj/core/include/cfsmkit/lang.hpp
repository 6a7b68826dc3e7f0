#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfsmkit/cfsm.hpp"

namespace cfsmkit {

/// An action with its channel forgotten: `!a` or `?a`.
struct ErasedSymbol {
  Direction direction{Direction::Send};
  Message message;

  auto operator<=>(const ErasedSymbol&) const = default;
};

std::string to_string(const ErasedSymbol& s);

using ErasedWord = std::vector<ErasedSymbol>;

std::string to_string(const ErasedWord& w);

struct ErasedTransition {
  StateId from;
  ErasedSymbol symbol;
  StateId to;

  auto operator<=>(const ErasedTransition&) const = default;
};

/// Finite automaton over erased symbols in which every state accepts, so the
/// recognized language is prefix-closed. May be nondeterministic.
class ErasedAutomaton {
 public:
  ErasedAutomaton() = default;
  ErasedAutomaton(std::vector<StateId> states, StateId initial,
                  std::vector<ErasedTransition> transitions);

  const std::vector<StateId>& states() const { return states_; }
  const StateId& initial() const { return initial_; }
  const std::vector<ErasedTransition>& transitions() const { return transitions_; }
  std::set<ErasedSymbol> alphabet() const;

  bool operator==(const ErasedAutomaton&) const = default;

 private:
  std::vector<StateId> states_;
  StateId initial_;
  std::vector<ErasedTransition> transitions_;
};

ErasedAutomaton erase_channels(const Cfsm& m);

/// Flips every symbol's direction; the state graph is untouched.
ErasedAutomaton dualize(const ErasedAutomaton& a);

ErasedWord dualize(const ErasedWord& w);

/// A word recognized by exactly one of the two automata, or nullopt when
/// the languages coincide. Not guaranteed to be the shortest such word.
std::optional<ErasedWord> find_separating_word(const ErasedAutomaton& a,
                                               const ErasedAutomaton& b);

bool languages_equal(const ErasedAutomaton& a, const ErasedAutomaton& b);

bool accepts(const ErasedAutomaton& a, const ErasedWord& w);

}  // namespace cfsmkit
