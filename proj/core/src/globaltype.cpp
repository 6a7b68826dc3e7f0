#include "cfsmkit/globaltype.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "cfsmkit/detail/lexer.hpp"

namespace cfsmkit {

bool Seq::operator==(const Seq& o) const { return items == o.items; }
bool Choice::operator==(const Choice& o) const { return decider == o.decider && branches == o.branches; }
bool Loop::operator==(const Loop& o) const { return body == o.body; }

GlobalType interaction(const std::string& sender, const std::string& receiver, const std::string& msg) {
  if (sender == receiver) throw GlobalTypeError("interaction of role " + sender + " with itself");
  return GlobalType{Interaction{Role{sender}, Role{receiver}, Message{msg}}};
}
GlobalType seq(std::vector<GlobalType> items) { return GlobalType{Seq{std::move(items)}}; }
GlobalType choice(const std::string& decider, std::vector<GlobalType> branches) {
  return GlobalType{Choice{Role{decider}, std::move(branches)}};
}
GlobalType loop(std::vector<GlobalType> body) { return GlobalType{Loop{std::move(body)}}; }
GlobalType brk() { return GlobalType{Break{}}; }
GlobalType end() { return GlobalType{End{}}; }

ProjectionError::ProjectionError(Role role, Role decider, std::size_t branch_a, std::size_t branch_b)
    : std::invalid_argument("role " + role.name + " cannot distinguish branches " + std::to_string(branch_a + 1) +
                            " and " + std::to_string(branch_b + 1) + " of the choice at " + decider.name),
      role_(std::move(role)),
      decider_(std::move(decider)),
      a_(branch_a),
      b_(branch_b) {}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// ---------------------------------------------------------------------------
// Structural checks

namespace {

struct FirstInfo {
  std::vector<Interaction> first;
  bool nullable = true;
};

FirstInfo first_of(const GlobalType& g);

FirstInfo first_of_items(const std::vector<GlobalType>& items) {
  FirstInfo out;
  for (const auto& it : items) {
    auto f = first_of(it);
    out.first.insert(out.first.end(), f.first.begin(), f.first.end());
    if (!f.nullable) {
      out.nullable = false;
      return out;
    }
  }
  return out;
}

FirstInfo first_of(const GlobalType& g) {
  return std::visit(overloaded{
                        [](const Interaction& i) { return FirstInfo{{i}, false}; },
                        [](const Seq& s) { return first_of_items(s.items); },
                        [](const Choice& c) {
                          FirstInfo out;
                          out.nullable = false;
                          for (const auto& b : c.branches) {
                            auto f = first_of(b);
                            out.first.insert(out.first.end(), f.first.begin(), f.first.end());
                            out.nullable = out.nullable || f.nullable;
                          }
                          return out;
                        },
                        [](const Loop& l) { return first_of_items(l.body); },
                        [](const Break&) { return FirstInfo{{}, false}; },
                        [](const End&) { return FirstInfo{{}, true}; },
                    },
                    g.node);
}

void check(const GlobalType& g, int loop_depth) {
  std::visit(overloaded{
                 [](const Interaction& i) {
                   if (i.sender == i.receiver) {
                     throw GlobalTypeError("interaction of role " + i.sender.name + " with itself");
                   }
                 },
                 [&](const Seq& s) {
                   for (const auto& it : s.items) check(it, loop_depth);
                 },
                 [&](const Choice& c) {
                   if (c.branches.size() < 2) {
                     throw GlobalTypeError("choice at " + c.decider.name + " needs at least two branches");
                   }
                   for (std::size_t b = 0; b < c.branches.size(); ++b) {
                     const auto f = first_of(c.branches[b]);
                     if (f.first.empty()) {
                       throw GlobalTypeError("branch " + std::to_string(b + 1) + " of the choice at " +
                                             c.decider.name + " does not start with an interaction");
                     }
                     for (const auto& i : f.first) {
                       if (i.sender != c.decider) {
                         throw GlobalTypeError("branch " + std::to_string(b + 1) + " of the choice at " +
                                               c.decider.name + " starts with a message sent by " + i.sender.name);
                       }
                     }
                     check(c.branches[b], loop_depth);
                   }
                 },
                 [&](const Loop& l) {
                   for (const auto& it : l.body) check(it, loop_depth + 1);
                 },
                 [&](const Break&) {
                   if (loop_depth == 0) throw GlobalTypeError("'break' outside of a loop");
                 },
                 [](const End&) {},
             },
             g.node);
}

}  // namespace

void validate(const GlobalType& g) { check(g, 0); }

// ---------------------------------------------------------------------------
// Parser

namespace {

using detail::Tok;
using detail::TokenStream;

class TypeParser {
 public:
  explicit TypeParser(TokenStream& ts) : ts_(ts) {}

  // seq := item (';' item)* [';']
  GlobalType sequence() {
    std::vector<GlobalType> items;
    while (!ends_sequence()) {
      items.push_back(item());
      if (!ts_.at(Tok::Semi)) break;
      while (ts_.at(Tok::Semi)) ts_.next();
    }
    if (items.size() == 1) return std::move(items.front());
    if (items.empty()) return end();
    return seq(std::move(items));
  }

 private:
  bool ends_sequence() const {
    return ts_.at(Tok::RBrace) || ts_.at(Tok::RParen) || ts_.at(Tok::Eof) ||
           (ts_.at_keyword("or") && ts_.peek(1).kind != Tok::Arrow);
  }

  GlobalType item() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::LParen) {
      ts_.next();
      auto g = sequence();
      ts_.expect(Tok::RParen, "')'");
      return g;
    }
    if (t.kind != Tok::Ident) ts_.fail("expected an interaction, 'choice', 'loop', 'break' or 'end'");
    const bool keyword_use = ts_.peek(1).kind != Tok::Arrow;
    if (keyword_use && t.text == "choice") return parse_choice();
    if (keyword_use && t.text == "loop") return parse_loop();
    if (keyword_use && t.text == "break") {
      if (loop_depth_ == 0) ts_.fail("'break' outside of a loop");
      ts_.next();
      return brk();
    }
    if (keyword_use && t.text == "end") {
      ts_.next();
      return end();
    }
    return parse_interaction();
  }

  GlobalType parse_interaction() {
    const auto sender = ts_.expect(Tok::Ident, "sender role");
    ts_.expect(Tok::Arrow, "'->'");
    const auto receiver = ts_.expect(Tok::Ident, "receiver role");
    ts_.expect(Tok::Colon, "':'");
    const auto msg = ts_.expect(Tok::Ident, "message label");
    if (sender.text == receiver.text) TokenStream::fail_at(sender, "role " + sender.text + " sends to itself");
    return interaction(sender.text, receiver.text, msg.text);
  }

  GlobalType parse_choice() {
    const auto kw = ts_.next();
    ts_.expect_keyword("at");
    const auto decider = ts_.expect(Tok::Ident, "deciding role");
    ts_.expect(Tok::LBrace, "'{'");
    std::vector<GlobalType> branches;
    branches.push_back(sequence());
    while (ts_.at_keyword("or")) {
      ts_.next();
      branches.push_back(sequence());
    }
    ts_.expect(Tok::RBrace, "'}' or 'or'");
    auto g = choice(decider.text, std::move(branches));
    try {
      // loop depth matters for nested breaks only, which the parser checks itself
      check(g, 1);
    } catch (const GlobalTypeError& e) {
      TokenStream::fail_at(kw, e.what());
    }
    return g;
  }

  GlobalType parse_loop() {
    ts_.next();
    ts_.expect(Tok::LBrace, "'{'");
    ++loop_depth_;
    auto body = sequence();
    --loop_depth_;
    ts_.expect(Tok::RBrace, "'}'");
    if (auto* s = std::get_if<Seq>(&body.node)) return loop(std::move(s->items));
    return loop({std::move(body)});
  }

  TokenStream& ts_;
  int loop_depth_ = 0;
};

}  // namespace

GlobalType parse_global_type(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  TypeParser p(ts);
  auto g = p.sequence();
  if (!ts.at(Tok::Eof)) ts.fail("unexpected '" + ts.peek().text + "'");
  return g;
}

// Parser entry point reused by the GTIR reader: parses a sequence and stops
// at the first token that cannot continue it.
namespace detail {
GlobalType parse_global_type_tokens(TokenStream& ts) {
  TypeParser p(ts);
  return p.sequence();
}
}  // namespace detail

namespace {

void print(const GlobalType& g, std::string& out, int indent);

void print_items(const std::vector<GlobalType>& items, std::string& out, int indent) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    print(items[i], out, indent);
    out += i + 1 < items.size() ? ";\n" : "\n";
  }
}

void print(const GlobalType& g, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::visit(overloaded{
                 [&](const Interaction& i) {
                   out += pad + i.sender.name + "->" + i.receiver.name + ":" + i.message.label;
                 },
                 [&](const Seq& s) {
                   if (s.items.empty()) {
                     out += pad + "end";
                     return;
                   }
                   out += pad + "(\n";
                   print_items(s.items, out, indent + 1);
                   out += pad + ")";
                 },
                 [&](const Choice& c) {
                   out += pad + "choice at " + c.decider.name + " {\n";
                   for (std::size_t b = 0; b < c.branches.size(); ++b) {
                     if (b) out += pad + "or\n";
                     const auto* s = std::get_if<Seq>(&c.branches[b].node);
                     if (s && !s->items.empty()) {
                       print_items(s->items, out, indent + 1);
                     } else {
                       print(c.branches[b], out, indent + 1);
                       out += "\n";
                     }
                   }
                   out += pad + "}";
                 },
                 [&](const Loop& l) {
                   out += pad + "loop {\n";
                   print_items(l.body, out, indent + 1);
                   out += pad + "}";
                 },
                 [&](const Break&) { out += pad + "break"; },
                 [&](const End&) { out += pad + "end"; },
             },
             g.node);
}

}  // namespace

std::string to_string(const GlobalType& g) {
  std::string out;
  if (const auto* s = std::get_if<Seq>(&g.node); s && !s->items.empty()) {
    print_items(s->items, out, 0);
  } else {
    print(g, out, 0);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Roles and messages

namespace {

template <class F>
void for_each_interaction(const GlobalType& g, F&& f) {
  std::visit(overloaded{
                 [&](const Interaction& i) { f(i); },
                 [&](const Seq& s) {
                   for (const auto& it : s.items) for_each_interaction(it, f);
                 },
                 [&](const Choice& c) {
                   for (const auto& b : c.branches) for_each_interaction(b, f);
                 },
                 [&](const Loop& l) {
                   for (const auto& it : l.body) for_each_interaction(it, f);
                 },
                 [](const Break&) {},
                 [](const End&) {},
             },
             g.node);
}

}  // namespace

std::set<Role> roles(const GlobalType& g) {
  std::set<Role> out;
  for_each_interaction(g, [&](const Interaction& i) {
    out.insert(i.sender);
    out.insert(i.receiver);
  });
  return out;
}

std::set<Message> messages(const GlobalType& g) {
  std::set<Message> out;
  for_each_interaction(g, [&](const Interaction& i) { out.insert(i.message); });
  return out;
}

// ---------------------------------------------------------------------------
// Projection

namespace {

/// Control-flow graph of a global type: edges carry an interaction or ε.
struct FlowGraph {
  struct Edge {
    int label;  // index into `labels`, -1 for ε
    int to;
  };
  struct ChoiceSite {
    Role decider;
    std::vector<int> entries;
  };

  std::vector<std::vector<Edge>> adj;
  std::vector<Interaction> labels;
  std::vector<ChoiceSite> choices;
  std::vector<int> loop_exits;
  int start = 0;

  int node() {
    adj.emplace_back();
    return static_cast<int>(adj.size()) - 1;
  }
  void edge(int from, int label, int to) { adj[from].push_back({label, to}); }

  int build(const GlobalType& g, int entry) {
    return std::visit(overloaded{
                          [&](const Interaction& i) {
                            labels.push_back(i);
                            const int n = node();
                            edge(entry, static_cast<int>(labels.size()) - 1, n);
                            return n;
                          },
                          [&](const Seq& s) { return build_items(s.items, entry); },
                          [&](const Choice& c) {
                            const int exit = node();
                            ChoiceSite site{c.decider, {}};
                            for (const auto& b : c.branches) {
                              const int e = node();
                              edge(entry, -1, e);
                              site.entries.push_back(e);
                              edge(build(b, e), -1, exit);
                            }
                            choices.push_back(std::move(site));
                            return exit;
                          },
                          [&](const Loop& l) {
                            const int head = node();
                            edge(entry, -1, head);
                            const int exit = node();
                            loop_exits.push_back(exit);
                            edge(build_items(l.body, head), -1, head);
                            loop_exits.pop_back();
                            return exit;
                          },
                          [&](const Break&) {
                            edge(entry, -1, loop_exits.back());
                            return node();  // unreachable continuation
                          },
                          [&](const End&) { return entry; },
                      },
                      g.node);
  }

  int build_items(const std::vector<GlobalType>& items, int entry) {
    for (const auto& it : items) entry = build(it, entry);
    return entry;
  }
};

using NodeSet = std::vector<int>;

/// The flow graph seen by one role: interactions not involving it are ε.
class RoleView {
 public:
  RoleView(const FlowGraph& g, Role r) : g_(g), role_(std::move(r)) {}

  std::optional<Action> visible(int label) const {
    if (label < 0) return std::nullopt;
    const auto& i = g_.labels[static_cast<std::size_t>(label)];
    if (i.sender == role_) return Action{Channel{i.sender, i.receiver}, Direction::Send, i.message};
    if (i.receiver == role_) return Action{Channel{i.sender, i.receiver}, Direction::Receive, i.message};
    return std::nullopt;
  }

  NodeSet closure(NodeSet s) const {
    std::vector<char> in(g_.adj.size(), 0);
    std::vector<int> stack = s;
    for (int n : s) in[n] = 1;
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      for (const auto& e : g_.adj[n]) {
        if (!visible(e.label) && !in[e.to]) {
          in[e.to] = 1;
          s.push_back(e.to);
          stack.push_back(e.to);
        }
      }
    }
    std::sort(s.begin(), s.end());
    return s;
  }

  std::map<Action, NodeSet> moves(const NodeSet& s) const {
    std::map<Action, NodeSet> out;
    for (int n : s) {
      for (const auto& e : g_.adj[n]) {
        if (auto a = visible(e.label)) out[*a].push_back(e.to);
      }
    }
    for (auto& [a, set] : out) set = closure(std::move(set));
    return out;
  }

  /// Language equality of two determinized states (all states accept).
  bool same_language(const NodeSet& a, const NodeSet& b) const {
    std::map<std::pair<NodeSet, NodeSet>, bool> seen;
    std::deque<std::pair<NodeSet, NodeSet>> queue{{a, b}};
    seen[{a, b}] = true;
    while (!queue.empty()) {
      auto [x, y] = queue.front();
      queue.pop_front();
      const auto mx = moves(x), my = moves(y);
      if (mx.size() != my.size()) return false;
      for (auto ix = mx.begin(), iy = my.begin(); ix != mx.end(); ++ix, ++iy) {
        if (ix->first != iy->first) return false;
        std::pair key{ix->second, iy->second};
        if (!seen.contains(key)) {
          seen[key] = true;
          queue.push_back(std::move(key));
        }
      }
    }
    return true;
  }

 private:
  const FlowGraph& g_;
  Role role_;
};

}  // namespace

Cfsm project(const GlobalType& g, const Role& p, AbsentRole absent) {
  validate(g);
  if (absent == AbsentRole::Reject && !roles(g).contains(p)) {
    throw PreconditionError("role " + p.name + " does not occur in the global type");
  }

  FlowGraph fg;
  fg.start = fg.node();
  fg.build(g, fg.start);
  const RoleView view(fg, p);

  // A role that is not the decider must either behave the same in two
  // branches or be able to tell them apart by its first action. Sharing a
  // first send, or having no action at all in one branch, is ambiguous.
  for (const auto& site : fg.choices) {
    if (site.decider == p) continue;
    std::vector<NodeSet> entry;
    for (int e : site.entries) entry.push_back(view.closure({e}));
    for (std::size_t i = 0; i < entry.size(); ++i) {
      for (std::size_t j = i + 1; j < entry.size(); ++j) {
        if (view.same_language(entry[i], entry[j])) continue;
        const auto fi = view.moves(entry[i]), fj = view.moves(entry[j]);
        if (fi.empty() || fj.empty()) throw ProjectionError(p, site.decider, i, j);
        for (const auto& [a, _] : fi) {
          if (a.is_send() && fj.contains(a)) throw ProjectionError(p, site.decider, i, j);
        }
      }
    }
  }

  // Subset construction. Subsets are keyed by their nodes with a visible
  // outgoing edge: those alone determine the future.
  std::map<NodeSet, std::size_t> ids;
  std::vector<NodeSet> order;
  std::vector<std::vector<std::pair<Action, std::size_t>>> delta;
  auto id_of = [&](const NodeSet& s) {
    NodeSet kernel;
    for (int n : s) {
      for (const auto& e : fg.adj[n]) {
        if (view.visible(e.label)) {
          kernel.push_back(n);
          break;
        }
      }
    }
    auto [it, fresh] = ids.try_emplace(kernel, order.size());
    if (fresh) order.push_back(std::move(kernel));
    return it->second;
  };
  id_of(view.closure({fg.start}));
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<std::pair<Action, std::size_t>> out;
    for (auto& [a, target] : view.moves(order[k])) out.emplace_back(a, id_of(target));
    delta.push_back(std::move(out));
  }

  // Every state accepts, so minimization is partition refinement on the
  // transition structure alone.
  std::vector<std::size_t> block(order.size(), 0);
  for (std::size_t blocks = 1;;) {
    std::map<std::vector<std::pair<Action, std::size_t>>, std::size_t> signature;
    std::vector<std::size_t> next(order.size());
    for (std::size_t q = 0; q < order.size(); ++q) {
      std::vector<std::pair<Action, std::size_t>> sig{{Action{}, block[q]}};
      for (const auto& [a, t] : delta[q]) sig.emplace_back(a, block[t]);
      next[q] = signature.try_emplace(std::move(sig), signature.size()).first->second;
    }
    block = std::move(next);
    if (signature.size() == blocks) break;
    blocks = signature.size();
  }

  // Number the blocks breadth-first from the initial one.
  std::map<std::size_t, std::size_t> representative;
  for (std::size_t q = order.size(); q-- > 0;) representative[block[q]] = q;
  std::map<std::size_t, std::string> name;
  std::deque<std::size_t> queue{block[0]};
  name[block[0]] = "1";
  std::vector<Transition> ts;
  std::vector<StateId> states;
  while (!queue.empty()) {
    const auto b = queue.front();
    queue.pop_front();
    states.push_back(name[b]);
    for (const auto& [a, t] : delta[representative[b]]) {
      auto [it, fresh] = name.try_emplace(block[t], std::to_string(name.size() + 1));
      if (fresh) queue.push_back(block[t]);
      ts.push_back({name[b], a, it->second});
    }
  }
  return Cfsm(p, std::move(states), "1", std::move(ts), messages(g));
}

}  // namespace cfsmkit
