#pragma once

#include <string>
#include <string_view>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/safety.hpp"
#include "cfsmkit/system.hpp"

namespace cfsmkit {

// Machine files are JSON documents:
//
//   {"subject": "J", "states": ["1", "2"], "initial": "1",
//    "messages": ["fail", "ok", "text"],
//    "transitions": [{"from": "1", "to": "2", "channel": {"sender": "J", "receiver": "M"},
//                     "dir": "!", "msg": "text"}, ...]}
//
// "messages" is optional. A system file is {"machines": [machine, ...]}.
// Malformed JSON or missing fields raise ParseError; well-formed documents
// describing an invalid machine raise StructuralError.

Cfsm machine_from_json(std::string_view text);
std::string to_json(const Cfsm& m);

CommunicatingSystem system_from_json(std::string_view text);
std::string to_json(const CommunicatingSystem& s);

/// Graphviz rendering. Edge labels use the `sr!a` / `sr?a` notation; the
/// initial state is pointed to by an unboxed node carrying the subject.
std::string to_dot(const Cfsm& m);
/// One cluster per machine.
std::string to_dot(const CommunicatingSystem& s);

/// Human-readable report: one line per property, witnesses as traces of
/// `action  configuration-digest` lines, then exploration statistics.
std::string render_text(const SafetyReport& r);

/// Versioned JSON document ("schema": "cfsmkit.safety-report/1").
std::string render_json(const SafetyReport& r, std::string_view input = {});

}  // namespace cfsmkit
