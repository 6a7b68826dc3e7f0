#include <doctest.h>

#include <algorithm>

#include "cfsmkit/io.hpp"
#include "cfsmkit/safety.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfsmkit;

namespace {

CommunicatingSystem two(Cfsm a, Cfsm b) { return CommunicatingSystem(std::vector<Cfsm>{std::move(a), std::move(b)}); }

bool replays(const CommunicatingSystem& s, const Witness& w) {
  auto c = initial_configuration(s);
  for (std::size_t i = 0; i < w.trace.size(); ++i) {
    const auto succ = step(s, c, w.trace[i]);
    if (std::find(succ.begin(), succ.end(), w.path[i]) == succ.end()) return false;
    c = w.path[i];
  }
  return c == w.configuration;
}

}  // namespace

TEST_CASE("mutual wait is a deadlock at the initial configuration") {
  const auto s = system_from_json(fixtures::read_data("mutual_wait.json"));
  const auto r = check_safety(s);
  CHECK(r.deadlock.kind == VerdictKind::Violation);
  REQUIRE(r.deadlock.witness);
  CHECK(r.deadlock.witness->trace.empty());
  CHECK(is_deadlock(s, initial_configuration(s)));
  CHECK(r.orphan_message.kind == VerdictKind::SafeComplete);
  CHECK(r.unspecified_reception.kind == VerdictKind::SafeComplete);
  CHECK(r.any_violation());
}

TEST_CASE("a message left behind is an orphan") {
  const auto s = two(Cfsm(Role{"A"}, {"0", "1"}, "0", {{"0", send("A", "B", "x"), "1"}}), Cfsm(Role{"B"}, {"0"}, "0", {}));
  const auto r = check_safety(s);
  CHECK(r.orphan_message.violated());
  REQUIRE(r.orphan_message.witness);
  CHECK(r.orphan_message.witness->trace == std::vector<Action>{send("A", "B", "x")});
  CHECK(r.deadlock.kind == VerdictKind::SafeComplete);
  CHECK_FALSE(is_orphan_message(s, initial_configuration(s)));
}

TEST_CASE("an unexpected head is an unspecified reception") {
  const auto s = two(Cfsm(Role{"A"}, {"0", "1"}, "0", {{"0", send("A", "B", "y"), "1"}}),
                     Cfsm(Role{"B"}, {"0", "1"}, "0", {{"0", receive("A", "B", "x"), "1"}}));
  const auto r = check_safety(s);
  CHECK(r.unspecified_reception.violated());
  REQUIRE(r.unspecified_reception.witness);
  CHECK(r.unspecified_reception.witness->role == Role{"B"});
  CHECK(unspecified_reception_role(s, r.unspecified_reception.witness->configuration) == Role{"B"});
  // initially B waits on an empty buffer, which is not an unspecified reception
  CHECK_FALSE(is_unspecified_reception(s, initial_configuration(s)));
  CHECK(r.unspecified_reception.witness->trace.size() == 1);
}

TEST_CASE("a receiver is not stuck while some channel it reads is empty") {
  const Cfsm a(Role{"A"}, {"0", "1"}, "0", {{"0", send("A", "C", "y"), "1"}});
  const Cfsm b(Role{"B"}, {"0", "1"}, "0", {{"0", send("B", "C", "y"), "1"}});
  const Cfsm c(Role{"C"}, {"0", "1"}, "0", {{"0", receive("A", "C", "x"), "1"}, {"0", receive("B", "C", "x"), "1"}});
  const CommunicatingSystem s(std::vector<Cfsm>{a, b, c});
  Configuration cfg = initial_configuration(s);
  cfg.control[Role{"A"}] = "1";
  cfg.buffers[Channel{Role{"A"}, Role{"C"}}] = {Message{"y"}};
  CHECK_FALSE(is_unspecified_reception(s, cfg));
  cfg.control[Role{"B"}] = "1";
  cfg.buffers[Channel{Role{"B"}, Role{"C"}}] = {Message{"y"}};
  CHECK(is_unspecified_reception(s, cfg));
  cfg.buffers[Channel{Role{"B"}, Role{"C"}}] = {Message{"x"}};
  CHECK_FALSE(is_unspecified_reception(s, cfg));
}

TEST_CASE("clean finite systems are safe-complete, unbounded ones only within the bound") {
  const auto pp = two(
      Cfsm(Role{"A"}, {"0", "1"}, "0", {{"0", send("A", "B", "x"), "1"}, {"1", receive("B", "A", "y"), "0"}}),
      Cfsm(Role{"B"}, {"0", "1"}, "0", {{"0", receive("A", "B", "x"), "1"}, {"1", send("B", "A", "y"), "0"}}));
  const auto r = check_safety(pp);
  CHECK(r.all_complete());
  CHECK_FALSE(r.any_violation());
  CHECK(r.stats.configurations == 4);
  CHECK(r.stats.max_buffer_bound == 4);

  const auto prod = two(Cfsm(Role{"A"}, {"0"}, "0", {{"0", send("A", "B", "x"), "0"}}),
                        Cfsm(Role{"B"}, {"0", "1"}, "0", {{"0", receive("A", "B", "x"), "1"}}));
  const auto q = check_safety(prod, {2, 100, 1, true});
  CHECK(q.stats.frontier_truncated);
  CHECK(q.deadlock.kind == VerdictKind::SafeWithinBound);
  CHECK_FALSE(q.all_complete());
}

TEST_CASE("verdict and property names") {
  CHECK(std::string(to_string(VerdictKind::Violation)) == "violation");
  CHECK(std::string(to_string(VerdictKind::SafeWithinBound)) == "safe-within-bound");
  CHECK(std::string(to_string(VerdictKind::SafeComplete)) == "safe-complete");
  CHECK(std::string(to_string(Property::UnspecifiedReception)) == "unspecified-reception");
}

TEST_CASE("witnesses replay and agree with the naive enumerator") {
  gen::Rng rng(3);
  for (int i = 0; i < 150; ++i) {
    const Role a{"A"}, b{"B"};
    const auto s = two(gen::random_cfsm(rng, a, {b}, 3, 4, {"x", "y"}), gen::random_cfsm(rng, b, {a}, 3, 4, {"x", "y"}));
    const std::size_t bound = 1 + static_cast<std::size_t>(i % 3);
    const auto r = check_safety(s, {bound, 100000, 1, false});
    const auto n = oracles::naive_safety(s, bound);
    CHECK(r.deadlock.violated() == n.deadlock);
    CHECK(r.orphan_message.violated() == n.orphan);
    CHECK(r.unspecified_reception.violated() == n.unspecified);
    CHECK(r.stats.frontier_truncated == n.truncated);
    CHECK(r.stats.configurations == n.configurations);
    for (auto p : {Property::Deadlock, Property::OrphanMessage, Property::UnspecifiedReception}) {
      if (const auto& w = r.verdict(p).witness) CHECK(replays(s, *w));
    }
    if (r.deadlock.witness) CHECK(is_deadlock(s, r.deadlock.witness->configuration));
    if (r.orphan_message.witness) CHECK(is_orphan_message(s, r.orphan_message.witness->configuration));
    if (r.unspecified_reception.witness) {
      CHECK(is_unspecified_reception(s, r.unspecified_reception.witness->configuration));
    }
  }
}

TEST_CASE("parallel exploration does not change verdicts") {
  gen::Rng rng(9);
  for (int i = 0; i < 40; ++i) {
    const Role a{"A"}, b{"B"};
    const auto s = two(gen::random_cfsm(rng, a, {b}, 3, 5, {"x", "y"}), gen::random_cfsm(rng, b, {a}, 3, 5, {"x", "y"}));
    const auto r1 = check_safety(s, {3, 100000, 1, false});
    const auto r4 = check_safety(s, {3, 100000, 4, false});
    for (auto p : {Property::Deadlock, Property::OrphanMessage, Property::UnspecifiedReception}) {
      CHECK(r1.verdict(p).kind == r4.verdict(p).kind);
      if (r1.verdict(p).witness) CHECK(r1.verdict(p).witness->trace == r4.verdict(p).witness->trace);
    }
  }
}
