#include <doctest.h>

#include <algorithm>

#include "cfsmkit/system.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cfsmkit;

namespace {

CommunicatingSystem ping_pong() {
  return CommunicatingSystem(std::vector<Cfsm>{
      Cfsm(Role{"A"}, {"0", "1"}, "0", {{"0", send("A", "B", "x"), "1"}, {"1", receive("B", "A", "y"), "0"}}),
      Cfsm(Role{"B"}, {"0", "1"}, "0", {{"0", receive("A", "B", "x"), "1"}, {"1", send("B", "A", "y"), "0"}})});
}

CommunicatingSystem producer() {
  return CommunicatingSystem(std::vector<Cfsm>{Cfsm(Role{"A"}, {"0"}, "0", {{"0", send("A", "B", "x"), "0"}}),
                                               Cfsm(Role{"B"}, {"0"}, "0", {})});
}

CommunicatingSystem random_system(gen::Rng& rng) {
  const std::vector<Role> roles{Role{"A"}, Role{"B"}, Role{"C"}};
  std::vector<Cfsm> ms;
  for (const auto& r : roles) {
    std::vector<Role> peers;
    for (const auto& p : roles) {
      if (p != r) peers.push_back(p);
    }
    ms.push_back(gen::random_cfsm(rng, r, peers, 3, 5, {"a", "b"}));
  }
  return CommunicatingSystem(std::move(ms));
}

}  // namespace

TEST_CASE("systems check their roles") {
  const auto a = Cfsm(Role{"A"}, {"0"}, "0", {{"0", send("A", "B", "x"), "0"}});
  CHECK_THROWS_AS(CommunicatingSystem(std::vector<Cfsm>{a}), StructuralError);
  CHECK_THROWS_AS(CommunicatingSystem(std::vector<Cfsm>{a, a, Cfsm(Role{"B"}, {"0"}, "0", {})}), StructuralError);
  std::map<Role, Cfsm> wrong{{Role{"X"}, Cfsm(Role{"B"}, {"0"}, "0", {})}};
  CHECK_THROWS_AS(CommunicatingSystem{wrong}, StructuralError);

  const auto s = ping_pong();
  CHECK(s.size() == 2);
  CHECK(s.roles() == std::vector<Role>{Role{"A"}, Role{"B"}});
  CHECK(s.messages() == std::set<Message>{Message{"x"}, Message{"y"}});
  CHECK_THROWS_AS(s.machine(Role{"Z"}), StructuralError);
}

TEST_CASE("step follows FIFO semantics") {
  const auto s = ping_pong();
  const auto c0 = initial_configuration(s);
  CHECK(c0.control.at(Role{"A"}) == "0");
  CHECK(c0.buffers_empty());
  CHECK(to_string(c0) == "[A=0 B=0 | ε]");

  CHECK(step(s, c0, receive("A", "B", "x")).empty());
  const auto c1 = step(s, c0, send("A", "B", "x"));
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].buffer(Channel{Role{"A"}, Role{"B"}}) == std::vector<Message>{Message{"x"}});
  CHECK(to_string(c1[0]) == "[A=1 B=0 | AB:x]");
  CHECK(enabled_actions(s, c1[0]) == std::set<Action>{receive("A", "B", "x")});

  const auto c2 = step(s, c1[0], receive("A", "B", "x"));
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].buffers_empty());
  CHECK(c2[0].control.at(Role{"B"}) == "1");
}

TEST_CASE("buffer contents keep their order") {
  const Cfsm a(Role{"A"}, {"0", "1", "2"}, "0", {{"0", send("A", "B", "x"), "1"}, {"1", send("A", "B", "y"), "2"}});
  const Cfsm b(Role{"B"}, {"0", "1"}, "0", {{"0", receive("A", "B", "y"), "1"}});
  const CommunicatingSystem s(std::vector<Cfsm>{a, b});
  auto c = step(s, initial_configuration(s), send("A", "B", "x")).at(0);
  c = step(s, c, send("A", "B", "y")).at(0);
  CHECK(to_string(c) == "[A=2 B=0 | AB:x.y]");
  CHECK(step(s, c, receive("A", "B", "y")).empty());
}

TEST_CASE("configuration equality ignores empty buffers and digests are stable") {
  Configuration a{{{Role{"A"}, "0"}}, {}};
  Configuration b{{{Role{"A"}, "0"}}, {{Channel{Role{"A"}, Role{"B"}}, {}}}};
  CHECK(a == b);
  CHECK(digest(a) == digest(b));
  CHECK(digest(a).size() == 16);
  b.buffers[Channel{Role{"A"}, Role{"B"}}].push_back(Message{"x"});
  CHECK_FALSE(a == b);
  CHECK(digest(a) != digest(b));
}

TEST_CASE("step rejects foreign configurations") {
  const auto s = ping_pong();
  Configuration c{{{Role{"A"}, "0"}}, {}};
  CHECK_THROWS_AS(step(s, c, send("A", "B", "x")), StructuralError);
  c = initial_configuration(s);
  c.control[Role{"A"}] = "42";
  CHECK_THROWS_AS(step(s, c, send("A", "B", "x")), StructuralError);
}

TEST_CASE("exploring a ping-pong system") {
  const auto r = explore(ping_pong());
  CHECK(r.size() == 4);
  CHECK(r.complete());
  CHECK(r.edge_count() == 4);
  CHECK(r.edges().size() == 4);
  CHECK(r.configuration(0) == initial_configuration(ping_pong()));
}

TEST_CASE("the buffer bound truncates an unbounded producer") {
  const auto r = explore(producer(), 2, 1000);
  CHECK(r.size() == 3);
  CHECK(r.frontier_truncated());
  CHECK_FALSE(r.budget_exhausted());
  CHECK_FALSE(r.complete());
  for (const auto& c : r.reachable()) CHECK(c.buffer(Channel{Role{"A"}, Role{"B"}}).size() <= 2);
}

TEST_CASE("the state budget stops exploration") {
  const auto r = explore(producer(), 10, 2);
  CHECK(r.size() == 2);
  CHECK(r.budget_exhausted());
  CHECK_FALSE(r.complete());
}

TEST_CASE("bounds below one are rejected") {
  CHECK_THROWS_AS(explore(ping_pong(), 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(explore(ping_pong(), 1, 0), std::invalid_argument);
}

TEST_CASE("exploration invariants on random systems") {
  gen::Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const auto s = random_system(rng);
    ExploreOptions o;
    o.max_buffer_bound = 2;
    o.max_states = 5000;
    const auto r = explore(s, o);

    // ids are distinct configurations
    auto all = r.reachable();
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size() && b < a + 40; ++b) CHECK_FALSE(all[a] == all[b]);
    }
    // every recorded edge is a step of the semantics
    for (const auto& e : r.edges()) {
      const auto succ = step(s, r.configuration(e.from), r.action(e.action));
      CHECK(std::find(succ.begin(), succ.end(), r.configuration(e.to)) != succ.end());
    }
    // traces replay to their configuration
    const std::size_t id = r.size() - 1;
    auto c = initial_configuration(s);
    const auto trace = r.trace_to(id);
    const auto path = r.path_to(id);
    REQUIRE(trace.size() == path.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const auto succ = step(s, c, trace[k]);
      REQUIRE(std::find(succ.begin(), succ.end(), path[k]) != succ.end());
      c = path[k];
    }
    CHECK(c == r.configuration(id));
  }
}

TEST_CASE("parallel exploration numbers configurations like the sequential one") {
  gen::Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    const auto s = random_system(rng);
    ExploreOptions o;
    o.max_buffer_bound = 2;
    o.max_states = 3000;
    const auto seq = explore(s, o);
    o.jobs = 3;
    const auto par = explore(s, o);
    REQUIRE(seq.size() == par.size());
    CHECK(seq.reachable() == par.reachable());
    CHECK(seq.edge_count() == par.edge_count());
    CHECK(seq.frontier_truncated() == par.frontier_truncated());
    CHECK(seq.budget_exhausted() == par.budget_exhausted());
  }
}
