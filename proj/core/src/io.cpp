#include "cfsmkit/io.hpp"

#include <json.hpp>

#include "cfsmkit/parse_error.hpp"

namespace cfsmkit {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json machine_json(const Cfsm& m) {
  ordered_json j;
  j["subject"] = m.subject().name;
  j["states"] = m.states();
  j["initial"] = m.initial();
  auto& msgs = j["messages"] = ordered_json::array();
  for (const auto& a : m.messages()) msgs.push_back(a.label);
  auto& ts = j["transitions"] = ordered_json::array();
  for (const auto& t : m.transitions()) {
    ts.push_back({{"from", t.from},
                  {"to", t.to},
                  {"channel", {{"sender", t.action.channel.sender.name}, {"receiver", t.action.channel.receiver.name}}},
                  {"dir", std::string(1, direction_symbol(t.action.direction))},
                  {"msg", t.action.message.label}});
  }
  return j;
}

std::string field_string(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

const ordered_json& field_array(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_array()) throw ParseError(where + ": field \"" + key + "\" must be an array");
  return v;
}

Cfsm machine_of(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const Role subject{field_string(j, "subject", where)};
  std::vector<StateId> states;
  for (const auto& s : field_array(j, "states", where)) {
    if (!s.is_string()) throw ParseError(where + ": state names must be strings");
    states.push_back(s.get<std::string>());
  }
  const auto initial = field_string(j, "initial", where);
  std::set<Message> msgs;
  if (j.contains("messages")) {
    for (const auto& a : field_array(j, "messages", where)) {
      if (!a.is_string()) throw ParseError(where + ": messages must be strings");
      msgs.insert(Message{a.get<std::string>()});
    }
  }
  std::vector<Transition> ts;
  const auto& arr = field_array(j, "transitions", where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto at = where + ": transition " + std::to_string(i);
    const auto& t = arr[i];
    if (!t.is_object() || !t.contains("channel") || !t.at("channel").is_object()) {
      throw ParseError(at + ": missing field \"channel\"");
    }
    const auto& c = t.at("channel");
    const auto dir = field_string(t, "dir", at);
    if (dir != "!" && dir != "?") throw ParseError(at + ": \"dir\" must be \"!\" or \"?\"");
    Action a{Channel{Role{field_string(c, "sender", at)}, Role{field_string(c, "receiver", at)}},
             dir == "!" ? Direction::Send : Direction::Receive, Message{field_string(t, "msg", at)}};
    ts.push_back({field_string(t, "from", at), std::move(a), field_string(t, "to", at)});
  }
  return Cfsm(subject, std::move(states), initial, std::move(ts), std::move(msgs));
}

ordered_json parse(std::string_view text) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

Cfsm machine_from_json(std::string_view text) { return machine_of(parse(text), "machine"); }

std::string to_json(const Cfsm& m) { return machine_json(m).dump(2) + "\n"; }

CommunicatingSystem system_from_json(std::string_view text) {
  const auto j = parse(text);
  std::vector<Cfsm> ms;
  const auto& arr = field_array(j, "machines", "system");
  for (std::size_t i = 0; i < arr.size(); ++i) ms.push_back(machine_of(arr[i], "machine " + std::to_string(i)));
  return CommunicatingSystem(std::move(ms));
}

std::string to_json(const CommunicatingSystem& s) {
  ordered_json j;
  auto& arr = j["machines"] = ordered_json::array();
  for (const auto& [r, m] : s.machines()) arr.push_back(machine_json(m));
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_body(const Cfsm& m, const std::string& prefix, const std::string& pad, std::string& out) {
  const auto id = [&](const StateId& q) { return quote(prefix + q); };
  const auto start = quote(prefix + "__start");
  out += pad + start + " [shape=none, label=" + quote(m.subject().name) + "];\n";
  for (const auto& q : m.states()) out += pad + id(q) + " [label=" + quote(q) + "];\n";
  out += pad + start + " -> " + id(m.initial()) + ";\n";
  for (const auto& t : m.transitions()) {
    out += pad + id(t.from) + " -> " + id(t.to) + " [label=" + quote(to_string(t.action)) + "];\n";
  }
}

}  // namespace

std::string to_dot(const Cfsm& m) {
  std::string out = "digraph " + quote(m.subject().name) + " {\n  rankdir=LR;\n  node [shape=circle];\n";
  dot_body(m, "", "  ", out);
  return out + "}\n";
}

std::string to_dot(const CommunicatingSystem& s) {
  std::string out = "digraph system {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (const auto& [r, m] : s.machines()) {
    out += "  subgraph " + quote("cluster_" + r.name) + " {\n    label=" + quote(r.name) + ";\n";
    dot_body(m, r.name + ".", "    ", out);
    out += "  }\n";
  }
  return out + "}\n";
}

// ---------------------------------------------------------------------------
// Reports

namespace {

constexpr Property kProperties[] = {Property::Deadlock, Property::OrphanMessage, Property::UnspecifiedReception};

const char* exploration_status(const ExplorationStats& s) {
  if (s.budget_exhausted) return "state budget exhausted";
  if (s.frontier_truncated) return "truncated by the buffer bound";
  return "complete";
}

}  // namespace

std::string render_text(const SafetyReport& r) {
  std::string out;
  for (auto p : kProperties) {
    const auto& v = r.verdict(p);
    std::string name = to_string(p);
    name.resize(23, ' ');
    out += name + to_string(v.kind) + "\n";
    if (!v.witness) continue;
    const auto& w = *v.witness;
    if (w.role) out += "  blocked role: " + w.role->name + "\n";
    out += "  trace (" + std::to_string(w.trace.size()) + " steps):\n";
    for (std::size_t i = 0; i < w.trace.size(); ++i) {
      out += "    " + to_string(w.trace[i]) + "  " + digest(w.path[i]) + "\n";
    }
    out += "  configuration: " + to_string(w.configuration) + "\n";
  }
  const auto& s = r.stats;
  out += "explored " + std::to_string(s.configurations) + " configurations, " + std::to_string(s.edges) +
         " transitions (bound " + std::to_string(s.max_buffer_bound) + ", budget " + std::to_string(s.max_states) +
         "): " + exploration_status(s) + "\n";
  return out;
}

std::string render_json(const SafetyReport& r, std::string_view input) {
  ordered_json j;
  j["schema"] = "cfsmkit.safety-report/1";
  if (!input.empty()) j["input"] = std::string(input);
  auto& props = j["properties"] = ordered_json::object();
  for (auto p : kProperties) {
    const auto& v = r.verdict(p);
    ordered_json e;
    e["verdict"] = to_string(v.kind);
    if (v.witness) {
      const auto& w = *v.witness;
      auto& trace = e["witness"]["trace"] = ordered_json::array();
      for (std::size_t i = 0; i < w.trace.size(); ++i) {
        trace.push_back({{"action", to_string(w.trace[i])}, {"digest", digest(w.path[i])}});
      }
      e["witness"]["configuration"] = to_string(w.configuration);
      e["witness"]["digest"] = digest(w.configuration);
      if (w.role) e["witness"]["role"] = w.role->name;
    }
    props[to_string(p)] = std::move(e);
  }
  const auto& s = r.stats;
  j["stats"] = {{"configurations", s.configurations},
                {"edges", s.edges},
                {"max_buffer_bound", s.max_buffer_bound},
                {"max_states", s.max_states},
                {"frontier_truncated", s.frontier_truncated},
                {"budget_exhausted", s.budget_exhausted}};
  const char* overall = r.any_violation() ? "violation" : r.all_complete() ? "safe-complete" : "safe-within-bound";
  j["verdict"] = overall;
  return j.dump(2) + "\n";
}

}  // namespace cfsmkit
