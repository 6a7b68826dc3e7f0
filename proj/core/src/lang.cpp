#include "cfsmkit/lang.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace cfsmkit {

std::string to_string(const ErasedSymbol& s) {
  return std::string(1, direction_symbol(s.direction)) + s.message.label;
}

std::string to_string(const ErasedWord& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += "·";
    out += to_string(w[i]);
  }
  return out;
}

ErasedAutomaton::ErasedAutomaton(std::vector<StateId> states, StateId initial,
                                 std::vector<ErasedTransition> transitions)
    : states_(std::move(states)), initial_(std::move(initial)), transitions_(std::move(transitions)) {
  std::sort(states_.begin(), states_.end());
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  auto known = [&](const StateId& q) { return std::binary_search(states_.begin(), states_.end(), q); };
  if (!known(initial_)) throw StructuralError("automaton initial state '" + initial_ + "' is not declared");
  for (const auto& t : transitions_) {
    if (!known(t.from) || !known(t.to)) {
      throw StructuralError("automaton transition uses undeclared state '" +
                            (known(t.from) ? t.to : t.from) + "'");
    }
  }
}

std::set<ErasedSymbol> ErasedAutomaton::alphabet() const {
  std::set<ErasedSymbol> out;
  for (const auto& t : transitions_) out.insert(t.symbol);
  return out;
}

ErasedAutomaton erase_channels(const Cfsm& m) {
  std::vector<ErasedTransition> ts;
  ts.reserve(m.transitions().size());
  for (const auto& t : m.transitions()) {
    ts.push_back({t.from, ErasedSymbol{t.action.direction, t.action.message}, t.to});
  }
  return ErasedAutomaton(m.states(), m.initial(), std::move(ts));
}

static ErasedSymbol flip(ErasedSymbol s) {
  s.direction = s.direction == Direction::Send ? Direction::Receive : Direction::Send;
  return s;
}

ErasedAutomaton dualize(const ErasedAutomaton& a) {
  std::vector<ErasedTransition> ts;
  ts.reserve(a.transitions().size());
  for (const auto& t : a.transitions()) ts.push_back({t.from, flip(t.symbol), t.to});
  return ErasedAutomaton(a.states(), a.initial(), std::move(ts));
}

ErasedWord dualize(const ErasedWord& w) {
  ErasedWord out;
  out.reserve(w.size());
  for (const auto& s : w) out.push_back(flip(s));
  return out;
}

namespace {

/// Index-based view of an automaton used for on-the-fly subset construction.
class SubsetStepper {
 public:
  using Subset = std::vector<int>;

  explicit SubsetStepper(const ErasedAutomaton& a) {
    std::map<StateId, int> index;
    for (const auto& q : a.states()) index.emplace(q, static_cast<int>(index.size()));
    out_.resize(index.size());
    for (const auto& t : a.transitions()) out_[index.at(t.from)].emplace_back(t.symbol, index.at(t.to));
    initial_ = {index.at(a.initial())};
  }

  const Subset& initial() const { return initial_; }

  std::map<ErasedSymbol, Subset> successors(const Subset& s) const {
    std::map<ErasedSymbol, Subset> next;
    for (int q : s) {
      for (const auto& [sym, to] : out_[q]) next[sym].push_back(to);
    }
    for (auto& [sym, set] : next) {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    return next;
  }

 private:
  std::vector<std::vector<std::pair<ErasedSymbol, int>>> out_;
  Subset initial_;
};

}  // namespace

std::optional<ErasedWord> find_separating_word(const ErasedAutomaton& a, const ErasedAutomaton& b) {
  using Subset = SubsetStepper::Subset;
  const SubsetStepper sa(a), sb(b);

  struct Node {
    Subset left, right;
    int parent;
    std::optional<ErasedSymbol> via;
  };
  std::vector<Node> nodes;
  std::map<std::pair<Subset, Subset>, int> seen;
  std::deque<int> queue;

  auto word_to = [&](int id) {
    ErasedWord w;
    for (; nodes[id].via; id = nodes[id].parent) w.push_back(*nodes[id].via);
    std::reverse(w.begin(), w.end());
    return w;
  };

  nodes.push_back({sa.initial(), sb.initial(), -1, std::nullopt});
  seen.emplace(std::pair{sa.initial(), sb.initial()}, 0);
  queue.push_back(0);

  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    // copies: nodes may reallocate below
    const auto next_a = sa.successors(nodes[id].left);
    const auto next_b = sb.successors(nodes[id].right);

    // Every nonempty subset accepts, so the pair is distinguished exactly
    // when one side has a symbol enabled that the other lacks.
    auto ia = next_a.begin();
    auto ib = next_b.begin();
    while (ia != next_a.end() || ib != next_b.end()) {
      if (ib == next_b.end() || (ia != next_a.end() && ia->first < ib->first)) {
        auto w = word_to(id);
        w.push_back(ia->first);
        return w;
      }
      if (ia == next_a.end() || ib->first < ia->first) {
        auto w = word_to(id);
        w.push_back(ib->first);
        return w;
      }
      auto key = std::pair{ia->second, ib->second};
      if (!seen.contains(key)) {
        const int child = static_cast<int>(nodes.size());
        seen.emplace(key, child);
        nodes.push_back({ia->second, ib->second, id, ia->first});
        queue.push_back(child);
      }
      ++ia;
      ++ib;
    }
  }
  return std::nullopt;
}

bool languages_equal(const ErasedAutomaton& a, const ErasedAutomaton& b) {
  return !find_separating_word(a, b).has_value();
}

bool accepts(const ErasedAutomaton& a, const ErasedWord& w) {
  const SubsetStepper s(a);
  auto current = s.initial();
  for (const auto& sym : w) {
    auto next = s.successors(current);
    auto it = next.find(sym);
    if (it == next.end()) return false;
    current = std::move(it->second);
  }
  return true;
}

}  // namespace cfsmkit
