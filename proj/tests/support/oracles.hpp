#pragma once

// Reference implementations used to cross-check the library. They favour
// obviously-correct brute force over speed and share no code with it.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/gateway.hpp"
#include "cfsmkit/lang.hpp"
#include "cfsmkit/system.hpp"

namespace oracles {

/// A bijection between the states of `a` and `b` mapping initial to initial
/// and transitions onto transitions, if one exists. Subjects must agree.
std::optional<std::map<std::string, std::string>> isomorphism(const cfsmkit::Cfsm& a, const cfsmkit::Cfsm& b);
inline bool isomorphic(const cfsmkit::Cfsm& a, const cfsmkit::Cfsm& b) { return isomorphism(a, b).has_value(); }

/// Every word of length <= n recognized by `a`, as strings such as "!a?b".
std::set<std::string> words_up_to(const cfsmkit::ErasedAutomaton& a, std::size_t n);

/// Direct NFA simulation on a word given as a string ("!a?b").
bool accepts_word(const cfsmkit::ErasedAutomaton& a, const std::string& word);

/// Undoes a gateway: each inserted state is bypassed by an edge carrying the
/// action that does not involve the partner.
cfsmkit::Cfsm contract(const cfsmkit::Cfsm& gw, const cfsmkit::Role& partner,
                       const std::set<std::string>& original_states);

struct NaiveVerdicts {
  bool deadlock = false;
  bool orphan = false;
  bool unspecified = false;
  /// Some reachable configuration had a send blocked by the bound.
  bool truncated = false;
  std::size_t configurations = 0;
};

/// Depth-first enumeration of the bounded configuration graph over string
/// encoded configurations.
NaiveVerdicts naive_safety(const cfsmkit::CommunicatingSystem& s, std::size_t bound);

}  // namespace oracles
