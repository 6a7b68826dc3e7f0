#pragma once

// Index-based form of a communicating system shared by the explorer and the
// safety detectors. Not part of the stable interface.

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "cfsmkit/system.hpp"

namespace cfsmkit::detail {

using Index = std::uint32_t;

struct CompiledEdge {
  Index channel;  // slot in CompiledSystem::channels()
  Direction direction;
  Index message;
  Index target;
  Index action;  // slot in CompiledSystem::actions()
};

struct CompiledMachine {
  std::vector<StateId> states;
  std::map<StateId, Index> index;
  Index initial = 0;
  std::vector<std::vector<CompiledEdge>> out;
  std::vector<StateKind> kind;
  /// Per state: channels it can consume from, each with the receivable messages.
  std::vector<std::vector<std::pair<Index, std::vector<Index>>>> receivable;
};

/// Control vector plus one buffer per active channel.
struct Unpacked {
  std::vector<Index> control;
  std::vector<std::vector<Index>> buffers;

  bool buffers_empty() const {
    for (const auto& b : buffers) {
      if (!b.empty()) return false;
    }
    return true;
  }
};

class CompiledSystem {
 public:
  /// `extra` adds channels beyond those used by transitions, so that
  /// arbitrary configurations can be represented.
  explicit CompiledSystem(const CommunicatingSystem& s, const std::set<Channel>& extra = {});

  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<Message>& messages() const { return messages_; }
  /// Channels used by some transition (plus extras); others stay empty forever.
  const std::vector<Channel>& channels() const { return channels_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<CompiledMachine>& machines() const { return machines_; }

  Unpacked initial() const;
  void pack(const Unpacked& u, std::vector<Index>& out) const;
  Unpacked unpack(std::span<const Index> packed) const;

  Configuration to_public(const Unpacked& u) const;
  /// Throws StructuralError if `c` is not a configuration of this system.
  Unpacked from_public(const Configuration& c) const;

  /// Calls f(action, successor) for every transition enabled in `u`. Sends
  /// into a buffer already holding `bound` messages are skipped; the return
  /// value reports whether that happened.
  template <class F>
  bool for_each_successor(const Unpacked& u, std::size_t bound, F&& f) const {
    bool truncated = false;
    for (Index r = 0; r < machines_.size(); ++r) {
      const auto& m = machines_[r];
      for (const auto& e : m.out[u.control[r]]) {
        const auto& buf = u.buffers[e.channel];
        if (e.direction == Direction::Send) {
          if (buf.size() >= bound) {
            truncated = true;
            continue;
          }
          Unpacked next = u;
          next.control[r] = e.target;
          next.buffers[e.channel].push_back(e.message);
          f(e.action, std::move(next));
        } else if (!buf.empty() && buf.front() == e.message) {
          Unpacked next = u;
          next.control[r] = e.target;
          auto& nb = next.buffers[e.channel];
          nb.erase(nb.begin());
          f(e.action, std::move(next));
        }
      }
    }
    return truncated;
  }

  static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

 private:
  std::vector<Role> roles_;
  std::vector<Message> messages_;
  std::map<Message, Index> message_index_;
  std::vector<Channel> channels_;
  std::map<Channel, Index> channel_index_;
  std::vector<Action> actions_;
  std::vector<CompiledMachine> machines_;
};

}  // namespace cfsmkit::detail
