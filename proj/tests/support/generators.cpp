#include "generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gen {

using namespace cfsmkit;

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<StateId> numbered(std::size_t n) {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

Cfsm random_cfsm(Rng& rng, const Role& subject, const std::vector<Role>& peers, std::size_t max_states,
                 std::size_t max_transitions, const std::vector<std::string>& messages) {
  const std::size_t n = 1 + pick(rng, max_states);
  const std::size_t m = pick(rng, max_transitions + 1);
  std::vector<Transition> ts;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& peer = peers[pick(rng, peers.size())];
    const auto& msg = messages[pick(rng, messages.size())];
    const Action a = coin(rng, 0.5) ? send(subject.name, peer.name, msg) : receive(peer.name, subject.name, msg);
    ts.push_back({std::to_string(pick(rng, n)), a, std::to_string(pick(rng, n))});
  }
  return Cfsm(subject, numbered(n), "0", std::move(ts));
}

ErasedAutomaton random_erased(Rng& rng, std::size_t max_states, std::size_t max_transitions,
                              const std::vector<ErasedSymbol>& alphabet) {
  const std::size_t n = 1 + pick(rng, max_states);
  const std::size_t m = pick(rng, max_transitions + 1);
  std::vector<ErasedTransition> ts;
  for (std::size_t i = 0; i < m; ++i) {
    ts.push_back({std::to_string(pick(rng, n)), alphabet[pick(rng, alphabet.size())], std::to_string(pick(rng, n))});
  }
  return ErasedAutomaton(numbered(n), "0", std::move(ts));
}

ErasedAutomaton mutate(Rng& rng, const ErasedAutomaton& a, const std::vector<ErasedSymbol>& alphabet) {
  auto states = a.states();
  auto ts = a.transitions();
  const std::size_t kind = pick(rng, 5);
  if (kind == 0 || ts.empty()) {
    // split a state: the copy takes some incoming edges and all outgoing ones
    const auto q = states[pick(rng, states.size())];
    const StateId copy = q + "'";
    if (std::find(states.begin(), states.end(), copy) != states.end()) return a;
    states.push_back(copy);
    std::vector<ErasedTransition> extra;
    for (auto& t : ts) {
      if (t.from == q) extra.push_back({copy, t.symbol, t.to == q ? copy : t.to});
    }
    for (auto& t : ts) {
      if (t.to == q && coin(rng, 0.5)) t.to = copy;
    }
    ts.insert(ts.end(), extra.begin(), extra.end());
  } else if (kind == 1) {
    ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(pick(rng, ts.size())));
  } else if (kind == 2) {
    ts.push_back({states[pick(rng, states.size())], alphabet[pick(rng, alphabet.size())],
                  states[pick(rng, states.size())]});
  } else if (kind == 3) {
    ts[pick(rng, ts.size())].to = states[pick(rng, states.size())];
  } else {
    ts[pick(rng, ts.size())].symbol = alphabet[pick(rng, alphabet.size())];
  }
  return ErasedAutomaton(std::move(states), a.initial(), std::move(ts));
}

// ---------------------------------------------------------------------------
// Global types

namespace {

struct GlobalGen {
  Rng& rng;
  const GlobalOptions& o;

  std::pair<std::string, std::string> two_roles() {
    const auto s = pick(rng, o.roles.size());
    auto r = pick(rng, o.roles.size() - 1);
    if (r >= s) ++r;
    return {o.roles[s], o.roles[r]};
  }

  std::vector<GlobalType> items(int depth, std::size_t min_items) {
    const std::size_t n = min_items + pick(rng, o.max_items - min_items + 1);
    std::vector<GlobalType> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(item(depth));
    return out;
  }

  /// Branches of a choice at `d` toward `t`; `exit_first` makes the first
  /// branch leave the enclosing loop.
  GlobalType make_choice(int depth, bool exit_first) {
    auto [d, t] = two_roles();
    std::vector<std::string> msgs = o.messages;
    std::shuffle(msgs.begin(), msgs.end(), rng);
    std::vector<GlobalType> branches;
    for (std::size_t b = 0; b < 2; ++b) {
      std::vector<GlobalType> body{interaction(d, t, msgs[b])};
      if (depth > 0) {
        for (auto& g : items(depth - 1, 0)) body.push_back(std::move(g));
      }
      if (exit_first && b == 0) body.push_back(brk());
      branches.push_back(body.size() == 1 ? std::move(body.front()) : seq(std::move(body)));
    }
    return choice(d, std::move(branches));
  }

  GlobalType item(int depth) {
    const double x = std::uniform_real_distribution<double>(0, 1)(rng);
    if (depth > 0 && x < 0.25) return make_choice(depth - 1, false);
    if (depth > 0 && o.loops && x < 0.4) {
      auto body = items(depth - 1, 1);
      body.push_back(make_choice(depth - 1, true));
      return loop(std::move(body));
    }
    auto [s, r] = two_roles();
    return interaction(s, r, o.messages[pick(rng, o.messages.size())]);
  }
};

struct Dualizer {
  const std::string& h;
  const std::string& k;
  const std::string& suffix;

  std::string role(const std::string& r) const { return r == h ? k : r + suffix; }

  GlobalType operator()(const GlobalType& g) const {
    if (const auto* i = std::get_if<Interaction>(&g.node)) {
      if (i->sender.name == h) return interaction(role(i->receiver.name), k, i->message.label);
      if (i->receiver.name == h) return interaction(k, role(i->sender.name), i->message.label);
      return interaction(role(i->sender.name), role(i->receiver.name), i->message.label);
    }
    if (const auto* s = std::get_if<Seq>(&g.node)) return seq(all(s->items));
    if (const auto* c = std::get_if<Choice>(&g.node)) {
      auto branches = all(c->branches);
      // the new decider sends the first interaction of every branch
      std::string decider = role(c->decider.name);
      if (const auto* first = first_interaction(branches.front())) decider = first->sender.name;
      return choice(decider, std::move(branches));
    }
    if (const auto* l = std::get_if<Loop>(&g.node)) return loop(all(l->body));
    return g;
  }

  std::vector<GlobalType> all(const std::vector<GlobalType>& gs) const {
    std::vector<GlobalType> out;
    for (const auto& g : gs) out.push_back((*this)(g));
    return out;
  }

  static const Interaction* first_interaction(const GlobalType& g) {
    if (const auto* i = std::get_if<Interaction>(&g.node)) return i;
    if (const auto* s = std::get_if<Seq>(&g.node); s && !s->items.empty()) return first_interaction(s->items.front());
    return nullptr;
  }
};

}  // namespace

GlobalType random_global(Rng& rng, const GlobalOptions& o) {
  GlobalGen g{rng, o};
  auto items = g.items(o.depth, 1);
  return items.size() == 1 ? std::move(items.front()) : seq(std::move(items));
}

GlobalType dual_global(const GlobalType& g, const std::string& h, const std::string& k, const std::string& suffix) {
  return Dualizer{h, k, suffix}(g);
}

// ---------------------------------------------------------------------------
// Exhaustive small machines

std::vector<Cfsm> small_machines(const Role& subject, const Role& peer, std::size_t max_states,
                                 std::size_t max_transitions, const std::vector<std::string>& messages) {
  std::vector<Cfsm> out;
  for (std::size_t n = 1; n <= max_states; ++n) {
    struct Edge {
      std::size_t from;
      bool out;
      std::size_t msg;
      std::size_t to;
    };
    std::vector<Edge> all;
    for (std::size_t f = 0; f < n; ++f) {
      for (int d = 0; d < 2; ++d) {
        for (std::size_t m = 0; m < messages.size(); ++m) {
          for (std::size_t t = 0; t < n; ++t) all.push_back({f, d == 0, m, t});
        }
      }
    }
    // canonical key: lexicographically smallest edge list over permutations
    // of the non-initial states
    auto canonical = [&](const std::vector<std::size_t>& chosen) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::tuple<std::size_t, bool, std::size_t, std::size_t>> best;
      do {
        std::vector<std::tuple<std::size_t, bool, std::size_t, std::size_t>> es;
        for (auto i : chosen) es.emplace_back(perm[all[i].from], all[i].out, all[i].msg, perm[all[i].to]);
        std::sort(es.begin(), es.end());
        if (best.empty() || es < best) best = es;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      return best;
    };
    std::set<std::vector<std::tuple<std::size_t, bool, std::size_t, std::size_t>>> seen;
    std::vector<std::vector<std::size_t>> choices{{}};
    for (std::size_t i = 0; i < all.size() && max_transitions >= 1; ++i) {
      choices.push_back({i});
      for (std::size_t j = i + 1; j < all.size() && max_transitions >= 2; ++j) choices.push_back({i, j});
    }
    for (const auto& c : choices) {
      if (!seen.insert(canonical(c)).second) continue;
      std::vector<Transition> ts;
      for (auto i : c) {
        const auto& e = all[i];
        const auto a = e.out ? send(subject.name, peer.name, messages[e.msg])
                             : receive(peer.name, subject.name, messages[e.msg]);
        ts.push_back({std::to_string(e.from), a, std::to_string(e.to)});
      }
      out.emplace_back(subject, numbered(n), "0", std::move(ts));
    }
  }
  return out;
}

}  // namespace gen
