#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/globaltype.hpp"
#include "cfsmkit/lang.hpp"

namespace gen {

using Rng = std::mt19937_64;

/// Random machine for `subject` talking to `peers`, with states "0".."n-1"
/// and initial state "0".
cfsmkit::Cfsm random_cfsm(Rng& rng, const cfsmkit::Role& subject, const std::vector<cfsmkit::Role>& peers,
                          std::size_t max_states, std::size_t max_transitions,
                          const std::vector<std::string>& messages);

cfsmkit::ErasedAutomaton random_erased(Rng& rng, std::size_t max_states, std::size_t max_transitions,
                                       const std::vector<cfsmkit::ErasedSymbol>& alphabet);

/// Either a language-preserving rewrite (splitting a state) or a small edit
/// that usually changes the language.
cfsmkit::ErasedAutomaton mutate(Rng& rng, const cfsmkit::ErasedAutomaton& a,
                                const std::vector<cfsmkit::ErasedSymbol>& alphabet);

struct GlobalOptions {
  std::vector<std::string> roles;
  std::vector<std::string> messages{"a", "b", "c"};
  std::size_t max_items = 3;
  int depth = 2;
  bool loops = true;
};

/// Random global type. Every choice is decided by one role sending distinct
/// messages to one fixed target, so the type passes the structural checks;
/// projectability is not guaranteed.
cfsmkit::GlobalType random_global(Rng& rng, const GlobalOptions& o);

/// Mirror image of `g` around interface role `h`: h becomes `k`, every
/// interaction with h changes direction, other roles get `suffix` appended.
/// The projection on `k` of the result is dual to the projection on `h`.
cfsmkit::GlobalType dual_global(const cfsmkit::GlobalType& g, const std::string& h, const std::string& k,
                                const std::string& suffix);

/// Every machine for `subject` (with a single peer) having at most
/// `max_states` states, at most `max_transitions` transitions over
/// `messages`, one representative per renaming of non-initial states.
/// `max_transitions` is capped at 2.
std::vector<cfsmkit::Cfsm> small_machines(const cfsmkit::Role& subject, const cfsmkit::Role& peer,
                                          std::size_t max_states, std::size_t max_transitions,
                                          const std::vector<std::string>& messages);

}  // namespace gen
