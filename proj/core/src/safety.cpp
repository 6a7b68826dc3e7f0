#include "cfsmkit/safety.hpp"

#include <algorithm>

#include "cfsmkit/detail/compiled.hpp"

namespace cfsmkit {

namespace {

using detail::CompiledSystem;
using detail::Index;
using detail::Unpacked;

bool deadlock(const CompiledSystem& cs, const Unpacked& u) {
  if (!u.buffers_empty()) return false;
  for (std::size_t r = 0; r < cs.machines().size(); ++r) {
    if (cs.machines()[r].kind[u.control[r]] != StateKind::Receiving) return false;
  }
  return true;
}

bool orphan(const CompiledSystem& cs, const Unpacked& u) {
  for (std::size_t r = 0; r < cs.machines().size(); ++r) {
    if (cs.machines()[r].kind[u.control[r]] != StateKind::Final) return false;
  }
  return !u.buffers_empty();
}

// Per-channel reading: a receiving role is stuck when each channel it can
// consume from holds a message whose head it has no transition for.
std::optional<Index> unspecified(const CompiledSystem& cs, const Unpacked& u) {
  for (Index r = 0; r < cs.machines().size(); ++r) {
    const auto& m = cs.machines()[r];
    const Index q = u.control[r];
    if (m.kind[q] != StateKind::Receiving) continue;
    const bool stuck = std::all_of(m.receivable[q].begin(), m.receivable[q].end(), [&](const auto& entry) {
      const auto& buf = u.buffers[entry.first];
      return !buf.empty() && !std::binary_search(entry.second.begin(), entry.second.end(), buf.front());
    });
    if (stuck) return r;
  }
  return std::nullopt;
}

std::set<Channel> nonempty_channels(const CommunicatingSystem& s, const Configuration& c) {
  std::set<Channel> out;
  for (const auto& [ch, w] : c.buffers) {
    if (w.empty()) continue;
    if (!s.contains(ch.sender) || !s.contains(ch.receiver)) {
      throw StructuralError("configuration buffer on channel " + to_string(ch) + " outside the system");
    }
    out.insert(ch);
  }
  return out;
}

}  // namespace

bool is_deadlock(const CommunicatingSystem& s, const Configuration& c) {
  const CompiledSystem cs(s, nonempty_channels(s, c));
  return deadlock(cs, cs.from_public(c));
}

bool is_orphan_message(const CommunicatingSystem& s, const Configuration& c) {
  const CompiledSystem cs(s, nonempty_channels(s, c));
  return orphan(cs, cs.from_public(c));
}

std::optional<Role> unspecified_reception_role(const CommunicatingSystem& s, const Configuration& c) {
  const CompiledSystem cs(s, nonempty_channels(s, c));
  if (auto r = unspecified(cs, cs.from_public(c))) return cs.roles()[*r];
  return std::nullopt;
}

bool is_unspecified_reception(const CommunicatingSystem& s, const Configuration& c) {
  return unspecified_reception_role(s, c).has_value();
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Violation: return "violation";
    case VerdictKind::SafeWithinBound: return "safe-within-bound";
    case VerdictKind::SafeComplete: return "safe-complete";
  }
  return "?";
}

const char* to_string(Property p) {
  switch (p) {
    case Property::Deadlock: return "deadlock";
    case Property::OrphanMessage: return "orphan-message";
    case Property::UnspecifiedReception: return "unspecified-reception";
  }
  return "?";
}

const Verdict& SafetyReport::verdict(Property p) const {
  switch (p) {
    case Property::Deadlock: return deadlock;
    case Property::OrphanMessage: return orphan_message;
    case Property::UnspecifiedReception: return unspecified_reception;
  }
  return deadlock;
}

bool SafetyReport::any_violation() const {
  return deadlock.violated() || orphan_message.violated() || unspecified_reception.violated();
}

bool SafetyReport::all_complete() const {
  return deadlock.kind == VerdictKind::SafeComplete && orphan_message.kind == VerdictKind::SafeComplete &&
         unspecified_reception.kind == VerdictKind::SafeComplete;
}

SafetyReport check_safety(const ExplorationResult& r) {
  const auto& cs = r.compiled();
  SafetyReport rep;
  rep.stats = {r.size(), r.edge_count(), r.max_buffer_bound(), r.max_states(), r.frontier_truncated(),
               r.budget_exhausted()};

  auto witness = [&](std::size_t id, std::optional<Role> role = std::nullopt) {
    return Witness{r.trace_to(id), r.configuration(id), r.path_to(id), std::move(role)};
  };

  std::optional<Witness> dl, om, ur;
  for (std::size_t id = 0; id < r.size() && !(dl && om && ur); ++id) {
    const auto u = cs.unpack(r.packed(id));
    if (!dl && deadlock(cs, u)) dl = witness(id);
    if (!om && orphan(cs, u)) om = witness(id);
    if (!ur) {
      if (auto role = unspecified(cs, u)) ur = witness(id, cs.roles()[*role]);
    }
  }

  const VerdictKind clean = r.complete() ? VerdictKind::SafeComplete : VerdictKind::SafeWithinBound;
  auto make = [&](std::optional<Witness>& w) {
    return w ? Verdict{VerdictKind::Violation, std::move(w)} : Verdict{clean, std::nullopt};
  };
  rep.deadlock = make(dl);
  rep.orphan_message = make(om);
  rep.unspecified_reception = make(ur);
  return rep;
}

SafetyReport check_safety(const CommunicatingSystem& s, const ExploreOptions& options) {
  ExploreOptions o = options;
  o.record_edges = false;
  auto rep = check_safety(explore(s, o));
  return rep;
}

}  // namespace cfsmkit
