#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cfsmkit/compose.hpp"
#include "cfsmkit/gateway.hpp"
#include "cfsmkit/globaltype.hpp"
#include "cfsmkit/gtir.hpp"
#include "cfsmkit/lang.hpp"
#include "cfsmkit/safety.hpp"

using namespace cfsmkit;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CFSMKIT_BENCH_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const CommunicatingSystem& working_system() {
  static const CommunicatingSystem s = [] {
    const auto doc = parse_gtir(slurp("working.gtir"), CFSMKIT_BENCH_DATA);
    return semantics(*doc.expr);
  }();
  return s;
}

/// A ring of n machines passing a token, each also free to send a ping to its
/// successor: the reachable set grows quickly with the bound.
CommunicatingSystem ring(int n) {
  std::vector<Cfsm> ms;
  for (int i = 0; i < n; ++i) {
    const auto me = "r" + std::to_string(i);
    const auto next = "r" + std::to_string((i + 1) % n);
    const auto prev = "r" + std::to_string((i + n - 1) % n);
    std::vector<Transition> ts{{"0", send(me, next, "ping"), "0"}, {"0", receive(prev, me, "ping"), "0"}};
    if (i == 0) {
      ts.push_back({"0", send(me, next, "tok"), "1"});
      ts.push_back({"1", receive(prev, me, "tok"), "0"});
    } else {
      ts.push_back({"0", receive(prev, me, "tok"), "1"});
      ts.push_back({"1", send(me, next, "tok"), "0"});
    }
    ms.emplace_back(Role{me}, std::vector<StateId>{"0", "1"}, "0", ts);
  }
  return CommunicatingSystem(std::move(ms));
}

void BM_ExploreWorkingExample(benchmark::State& state) {
  ExploreOptions o;
  o.max_buffer_bound = static_cast<std::size_t>(state.range(0));
  o.record_edges = false;
  std::size_t n = 0;
  for (auto _ : state) {
    auto r = explore(working_system(), o);
    n = r.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["configurations"] = static_cast<double>(n);
  state.counters["configs/s"] = benchmark::Counter(static_cast<double>(n), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ExploreWorkingExample)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ExploreRing(benchmark::State& state) {
  const auto s = ring(4);
  ExploreOptions o;
  o.max_buffer_bound = 2;
  o.jobs = static_cast<unsigned>(state.range(0));
  o.record_edges = false;
  std::size_t n = 0;
  for (auto _ : state) {
    n = explore(s, o).size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["configurations"] = static_cast<double>(n);
}
BENCHMARK(BM_ExploreRing)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CheckSafetyWorkingExample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_safety(working_system(), {4, 1'000'000, 1, false}));
}
BENCHMARK(BM_CheckSafetyWorkingExample)->Unit(benchmark::kMillisecond);

void BM_ProjectWorkingExample(benchmark::State& state) {
  const auto g = parse_global_type(slurp("fig1.gt"));
  const auto rs = roles(g);
  for (auto _ : state) {
    for (const auto& r : rs) benchmark::DoNotOptimize(project(g, r));
  }
}
BENCHMARK(BM_ProjectWorkingExample);

void BM_LanguagesEqual(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<StateId> qs;
  for (int i = 0; i < n; ++i) qs.push_back(std::to_string(i));
  std::uniform_int_distribution<int> q(0, n - 1), sym(0, 3);
  const ErasedSymbol alphabet[] = {{Direction::Send, Message{"a"}}, {Direction::Receive, Message{"a"}},
                                   {Direction::Send, Message{"b"}}, {Direction::Receive, Message{"b"}}};
  std::vector<ErasedTransition> ts;
  for (int i = 0; i < 3 * n; ++i) ts.push_back({qs[q(rng)], alphabet[sym(rng)], qs[q(rng)]});
  const ErasedAutomaton a(qs, "0", ts);
  for (auto _ : state) benchmark::DoNotOptimize(languages_equal(a, a));
}
BENCHMARK(BM_LanguagesEqual)->RangeMultiplier(2)->Range(4, 64);

void BM_Gateway(benchmark::State& state) {
  std::vector<Transition> ts;
  const int n = static_cast<int>(state.range(0));
  std::vector<StateId> qs;
  for (int i = 0; i < n; ++i) qs.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) {
    ts.push_back({qs[i], send("H", "A", "m" + std::to_string(i)), qs[(i + 1) % n]});
    ts.push_back({qs[i], receive("B", "H", "r" + std::to_string(i)), qs[(i + 2) % n]});
  }
  const Cfsm m(Role{"H"}, qs, "0", ts);
  for (auto _ : state) benchmark::DoNotOptimize(gateway(m, Role{"K"}));
}
BENCHMARK(BM_Gateway)->RangeMultiplier(4)->Range(4, 256);

}  // namespace

BENCHMARK_MAIN();
