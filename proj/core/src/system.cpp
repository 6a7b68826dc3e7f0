#include "cfsmkit/system.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "cfsmkit/detail/compiled.hpp"

namespace cfsmkit {

// ---------------------------------------------------------------------------
// CommunicatingSystem

CommunicatingSystem::CommunicatingSystem(std::vector<Cfsm> machines) {
  for (auto& m : machines) {
    Role r = m.subject();
    if (!machines_.emplace(r, std::move(m)).second) {
      throw StructuralError("duplicate machine for role " + r.name);
    }
  }
  for (const auto& [role, m] : machines_) {
    for (const auto& p : m.peers()) {
      if (!machines_.contains(p)) {
        throw StructuralError("machine " + role.name + " talks to role " + p.name +
                              " which is not part of the system");
      }
    }
  }
}

CommunicatingSystem::CommunicatingSystem(std::map<Role, Cfsm> machines) {
  std::vector<Cfsm> ms;
  for (auto& [role, m] : machines) {
    if (m.subject() != role) {
      throw StructuralError("machine keyed by " + role.name + " has subject " + m.subject().name);
    }
    ms.push_back(std::move(m));
  }
  *this = CommunicatingSystem(std::move(ms));
}

const Cfsm& CommunicatingSystem::machine(const Role& r) const {
  auto it = machines_.find(r);
  if (it == machines_.end()) throw StructuralError("unknown role " + r.name);
  return it->second;
}

std::vector<Role> CommunicatingSystem::roles() const {
  std::vector<Role> out;
  for (const auto& [r, m] : machines_) out.push_back(r);
  return out;
}

std::set<Message> CommunicatingSystem::messages() const {
  std::set<Message> out;
  for (const auto& [r, m] : machines_) out.insert(m.messages().begin(), m.messages().end());
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

const std::vector<Message>& Configuration::buffer(const Channel& c) const {
  static const std::vector<Message> empty;
  auto it = buffers.find(c);
  return it == buffers.end() ? empty : it->second;
}

bool Configuration::buffers_empty() const {
  return std::all_of(buffers.begin(), buffers.end(), [](const auto& kv) { return kv.second.empty(); });
}

bool Configuration::operator==(const Configuration& o) const {
  if (control != o.control) return false;
  auto nonempty = [](const Configuration& c) {
    std::map<Channel, std::vector<Message>> out;
    for (const auto& [ch, w] : c.buffers) {
      if (!w.empty()) out.emplace(ch, w);
    }
    return out;
  };
  return nonempty(*this) == nonempty(o);
}

std::string to_string(const Configuration& c) {
  std::string out = "[";
  bool first = true;
  for (const auto& [r, q] : c.control) {
    if (!first) out += ' ';
    first = false;
    out += r.name + "=" + q;
  }
  out += " |";
  bool any = false;
  for (const auto& [ch, w] : c.buffers) {
    if (w.empty()) continue;
    any = true;
    out += ' ' + to_string(ch) + ':';
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += '.';
      out += w[i].label;
    }
  }
  if (!any) out += " ε";
  return out + "]";
}

std::string digest(const Configuration& c) {
  // FNV-1a over the canonical rendering
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_string(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// CompiledSystem

namespace detail {

CompiledSystem::CompiledSystem(const CommunicatingSystem& s, const std::set<Channel>& extra) {
  roles_ = s.roles();
  std::map<Role, Index> role_index;
  for (const auto& r : roles_) role_index.emplace(r, static_cast<Index>(role_index.size()));

  for (const auto& m : s.messages()) {
    message_index_.emplace(m, static_cast<Index>(messages_.size()));
    messages_.push_back(m);
  }

  std::set<Channel> used = extra;
  std::set<Action> all_actions;
  for (const auto& [r, m] : s.machines()) {
    for (const auto& t : m.transitions()) {
      used.insert(t.action.channel);
      all_actions.insert(t.action);
    }
  }
  for (const auto& c : used) {
    if (!role_index.contains(c.sender) || !role_index.contains(c.receiver)) {
      throw StructuralError("channel " + to_string(c) + " is not between roles of the system");
    }
    channel_index_.emplace(c, static_cast<Index>(channels_.size()));
    channels_.push_back(c);
  }
  std::map<Action, Index> action_index;
  for (const auto& a : all_actions) {
    action_index.emplace(a, static_cast<Index>(actions_.size()));
    actions_.push_back(a);
  }

  for (const auto& [r, m] : s.machines()) {
    CompiledMachine cm;
    cm.states = m.states();
    for (const auto& q : cm.states) cm.index.emplace(q, static_cast<Index>(cm.index.size()));
    cm.initial = cm.index.at(m.initial());
    cm.out.resize(cm.states.size());
    cm.kind.resize(cm.states.size());
    cm.receivable.resize(cm.states.size());
    for (const auto& t : m.transitions()) {
      cm.out[cm.index.at(t.from)].push_back(CompiledEdge{
          channel_index_.at(t.action.channel), t.action.direction, message_index_.at(t.action.message),
          cm.index.at(t.to), action_index.at(t.action)});
    }
    for (Index q = 0; q < cm.states.size(); ++q) {
      cm.kind[q] = classify_state(m, cm.states[q]);
      std::map<Index, std::set<Index>> recv;
      for (const auto& e : cm.out[q]) {
        if (e.direction == Direction::Receive) recv[e.channel].insert(e.message);
      }
      for (auto& [ch, msgs] : recv) cm.receivable[q].emplace_back(ch, std::vector<Index>(msgs.begin(), msgs.end()));
    }
    machines_.push_back(std::move(cm));
  }
}

Unpacked CompiledSystem::initial() const {
  Unpacked u;
  for (const auto& m : machines_) u.control.push_back(m.initial);
  u.buffers.resize(channels_.size());
  return u;
}

void CompiledSystem::pack(const Unpacked& u, std::vector<Index>& out) const {
  out.insert(out.end(), u.control.begin(), u.control.end());
  for (const auto& b : u.buffers) {
    out.push_back(static_cast<Index>(b.size()));
    out.insert(out.end(), b.begin(), b.end());
  }
}

Unpacked CompiledSystem::unpack(std::span<const Index> packed) const {
  Unpacked u;
  const std::size_t n = machines_.size();
  u.control.assign(packed.begin(), packed.begin() + static_cast<std::ptrdiff_t>(n));
  u.buffers.resize(channels_.size());
  std::size_t pos = n;
  for (auto& b : u.buffers) {
    const Index len = packed[pos++];
    b.assign(packed.begin() + static_cast<std::ptrdiff_t>(pos),
             packed.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return u;
}

Configuration CompiledSystem::to_public(const Unpacked& u) const {
  Configuration c;
  for (std::size_t r = 0; r < roles_.size(); ++r) c.control.emplace(roles_[r], machines_[r].states[u.control[r]]);
  for (std::size_t ch = 0; ch < channels_.size(); ++ch) {
    if (u.buffers[ch].empty()) continue;
    auto& w = c.buffers[channels_[ch]];
    for (Index m : u.buffers[ch]) w.push_back(messages_[m]);
  }
  return c;
}

Unpacked CompiledSystem::from_public(const Configuration& c) const {
  if (c.control.size() != roles_.size()) {
    throw StructuralError("configuration has " + std::to_string(c.control.size()) +
                          " control entries for a system of " + std::to_string(roles_.size()) + " roles");
  }
  Unpacked u;
  u.control.resize(roles_.size());
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    auto it = c.control.find(roles_[r]);
    if (it == c.control.end()) throw StructuralError("configuration lacks role " + roles_[r].name);
    auto q = machines_[r].index.find(it->second);
    if (q == machines_[r].index.end()) {
      throw StructuralError("configuration puts " + roles_[r].name + " in unknown state '" + it->second + "'");
    }
    u.control[r] = q->second;
  }
  u.buffers.resize(channels_.size());
  for (const auto& [ch, w] : c.buffers) {
    if (w.empty()) continue;
    auto ci = channel_index_.find(ch);
    if (ci == channel_index_.end()) {
      throw StructuralError("configuration has contents on unrepresented channel " + to_string(ch));
    }
    for (const auto& m : w) {
      auto mi = message_index_.find(m);
      if (mi == message_index_.end()) throw StructuralError("configuration carries unknown message " + m.label);
      u.buffers[ci->second].push_back(mi->second);
    }
  }
  return u;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Transition relation

namespace {

std::set<Channel> config_channels(const CommunicatingSystem& s, const Configuration& c) {
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

Configuration initial_configuration(const CommunicatingSystem& s) {
  const detail::CompiledSystem cs(s);
  return cs.to_public(cs.initial());
}

std::vector<Configuration> step(const CommunicatingSystem& s, const Configuration& c, const Action& l) {
  const detail::CompiledSystem cs(s, config_channels(s, c));
  const auto u = cs.from_public(c);
  std::vector<Configuration> out;
  cs.for_each_successor(u, detail::CompiledSystem::unbounded, [&](detail::Index a, detail::Unpacked next) {
    if (cs.actions()[a] != l) return;
    auto pc = cs.to_public(next);
    if (std::find(out.begin(), out.end(), pc) == out.end()) out.push_back(std::move(pc));
  });
  return out;
}

std::set<Action> enabled_actions(const CommunicatingSystem& s, const Configuration& c) {
  const detail::CompiledSystem cs(s, config_channels(s, c));
  const auto u = cs.from_public(c);
  std::set<Action> out;
  cs.for_each_successor(u, detail::CompiledSystem::unbounded,
                        [&](detail::Index a, const detail::Unpacked&) { out.insert(cs.actions()[a]); });
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

std::size_t ExplorationResult::size() const { return offsets_.size() - 1; }

Configuration ExplorationResult::configuration(std::size_t id) const {
  if (id >= size()) throw std::out_of_range("configuration id out of range");
  return system_->to_public(system_->unpack(packed(id)));
}

std::vector<Configuration> ExplorationResult::reachable() const {
  std::vector<Configuration> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(configuration(i));
  return out;
}

const Action& ExplorationResult::action(std::uint32_t index) const { return system_->actions().at(index); }

std::vector<Action> ExplorationResult::trace_to(std::size_t id) const {
  if (id >= size()) throw std::out_of_range("configuration id out of range");
  std::vector<Action> out;
  while (id != 0) {
    out.push_back(system_->actions()[parents_[id].second]);
    id = parents_[id].first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Configuration> ExplorationResult::path_to(std::size_t id) const {
  if (id >= size()) throw std::out_of_range("configuration id out of range");
  std::vector<Configuration> out;
  while (id != 0) {
    out.push_back(configuration(id));
    id = parents_[id].first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

struct Successor {
  std::size_t parent;
  detail::Index action;
  std::vector<detail::Index> packed;
};

struct Expansion {
  std::vector<Successor> successors;
  bool truncated = false;
};

Expansion expand_slice(const detail::CompiledSystem& cs, const std::vector<std::uint32_t>& arena,
                       const std::vector<std::size_t>& offsets, std::span<const std::size_t> ids,
                       std::size_t bound) {
  Expansion ex;
  for (std::size_t id : ids) {
    const auto u = cs.unpack({arena.data() + offsets[id], offsets[id + 1] - offsets[id]});
    ex.truncated |= cs.for_each_successor(u, bound, [&](detail::Index a, const detail::Unpacked& next) {
      Successor s{id, a, {}};
      cs.pack(next, s.packed);
      ex.successors.push_back(std::move(s));
    });
  }
  return ex;
}

}  // namespace

ExplorationResult explore(const CommunicatingSystem& s, const ExploreOptions& options) {
  if (options.max_buffer_bound < 1) throw std::invalid_argument("max_buffer_bound must be at least 1");
  if (options.max_states < 1) throw std::invalid_argument("max_states must be at least 1");

  ExplorationResult res;
  res.system_ = std::make_shared<const detail::CompiledSystem>(s);
  res.max_buffer_bound_ = options.max_buffer_bound;
  res.max_states_ = options.max_states;
  const auto& cs = *res.system_;
  auto& arena = res.arena_;
  auto& offsets = res.offsets_;

  auto view = [&](std::size_t id) {
    return std::span<const std::uint32_t>(arena.data() + offsets[id], offsets[id + 1] - offsets[id]);
  };
  struct Hash {
    decltype(view)* v;
    std::size_t operator()(std::size_t id) const {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (auto x : (*v)(id)) h = (h ^ x) * 0x100000001b3ULL;
      return h;
    }
  };
  struct Eq {
    decltype(view)* v;
    bool operator()(std::size_t a, std::size_t b) const {
      auto x = (*v)(a), y = (*v)(b);
      return std::equal(x.begin(), x.end(), y.begin(), y.end());
    }
  };
  std::unordered_set<std::size_t, Hash, Eq> visited(1024, Hash{&view}, Eq{&view});

  // Appends `packed` tentatively; returns (id, inserted).
  auto intern = [&](const std::vector<detail::Index>& packed) -> std::pair<std::size_t, bool> {
    arena.insert(arena.end(), packed.begin(), packed.end());
    offsets.push_back(arena.size());
    const std::size_t id = offsets.size() - 2;
    auto [it, inserted] = visited.insert(id);
    if (!inserted) {
      arena.resize(offsets[id]);
      offsets.pop_back();
      return {*it, false};
    }
    return {id, true};
  };

  {
    std::vector<detail::Index> init;
    cs.pack(cs.initial(), init);
    intern(init);
    res.parents_.emplace_back(0, 0);
  }

  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::size_t> level{0};
  while (!level.empty() && !res.budget_exhausted_) {
    std::vector<Expansion> parts(std::min<std::size_t>(jobs, level.size()));
    const std::size_t chunk = (level.size() + parts.size() - 1) / parts.size();
    auto run = [&](std::size_t p) {
      const std::size_t lo = p * chunk;
      const std::size_t hi = std::min(level.size(), lo + chunk);
      if (lo < hi) {
        parts[p] = expand_slice(cs, arena, offsets, std::span(level).subspan(lo, hi - lo),
                                options.max_buffer_bound);
      }
    };
    if (parts.size() == 1) {
      run(0);
    } else {
      std::vector<std::jthread> workers;
      for (std::size_t p = 0; p < parts.size(); ++p) workers.emplace_back(run, p);
    }

    // Sequential merge in frontier order keeps ids independent of `jobs`.
    std::vector<std::size_t> next_level;
    for (auto& part : parts) {
      res.frontier_truncated_ |= part.truncated;
      for (auto& succ : part.successors) {
        if (res.budget_exhausted_) break;
        auto [id, fresh] = intern(succ.packed);
        if (fresh) {
          if (res.size() > options.max_states) {
            // roll back: the budget only admits max_states configurations
            visited.erase(id);
            arena.resize(offsets[id]);
            offsets.pop_back();
            res.budget_exhausted_ = true;
            break;
          }
          res.parents_.emplace_back(succ.parent, succ.action);
          next_level.push_back(id);
        }
        ++res.edge_count_;
        if (options.record_edges) res.edges_.push_back({succ.parent, succ.action, id});
      }
    }
    level = std::move(next_level);
  }
  return res;
}

ExplorationResult explore(const CommunicatingSystem& s, std::size_t max_buffer_bound, std::size_t max_states) {
  ExploreOptions o;
  o.max_buffer_bound = max_buffer_bound;
  o.max_states = max_states;
  return explore(s, o);
}

}  // namespace cfsmkit
