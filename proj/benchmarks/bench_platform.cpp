#include <benchmark/benchmark.h>

#include "vetbench/config.hpp"
#include "vetbench/defense.hpp"
#include "vetbench/harness.hpp"
#include "vetbench/iotguard.hpp"
#include "vetbench/testbed.hpp"

using namespace vetbench;

namespace {

const TestbedConfig& shared() {
  static const auto config = load_config(VETBENCH_FIXTURES_DIR "/shared/testbed.cfg");
  return config;
}

void BM_VanillaCascade(benchmark::State& state) {
  auto pair = instantiate(shared(), DefenseKind::None);
  const auto events = gen_random_suite(shared(), 64, 15, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& seq = events.sequences[i++ % events.sequences.size()];
    for (const auto& e : seq.events) benchmark::DoNotOptimize(pair.vanilla().process_event(e));
    pair.reset();
  }
}
BENCHMARK(BM_VanillaCascade);

void BM_Decide(benchmark::State& state) {
  const auto kind = static_cast<DefenseKind>(state.range(0));
  const auto& c = shared();
  auto engine = make_engine(kind, c.compiled_policies(), c.registry());
  PdpRequest req;
  req.app_id = "cool-down";
  req.trigger_device = "LivingRoomTemp";
  req.trigger_value = Value(90);
  req.actions = {{"AC", "On", Value("ON")}};
  for (const auto& d : c.devices) req.state.set(d.id, d.initial);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine->decide(req));
    if (kind == DefenseKind::Iotguard) engine->reset();
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Decide)
    ->Arg(static_cast<int>(DefenseKind::Expat))
    ->Arg(static_cast<int>(DefenseKind::Patriot))
    ->Arg(static_cast<int>(DefenseKind::Iotguard));

void BM_ServerReachability(benchmark::State& state) {
  using namespace iotguard;
  DynamicModel m;
  const auto n = static_cast<int>(state.range(0));
  std::vector<NodeKey> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"D" + std::to_string(i), Value(i), i % 2 ? NodeKind::Action : NodeKind::Event});
    m.add_node(nodes.back(), DeviceTags::physical());
  }
  for (int i = 0; i + 1 < n; ++i) m.add_edge(nodes[i], nodes[i + 1], "true");
  m.commit();
  const std::set<NodeKey> src{nodes.front()}, dst{nodes.back()};
  for (auto _ : state) benchmark::DoNotOptimize(m.reachable(src, dst));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ServerReachability)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_RunTestcase(benchmark::State& state) {
  auto pair = instantiate(shared(), static_cast<DefenseKind>(state.range(0)));
  const auto suite = gen_random_suite(shared(), 64, 15, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_testcase(pair, suite.sequences[i++ % suite.sequences.size()]));
  }
}
BENCHMARK(BM_RunTestcase)
    ->Arg(static_cast<int>(DefenseKind::Expat))
    ->Arg(static_cast<int>(DefenseKind::Patriot))
    ->Arg(static_cast<int>(DefenseKind::Iotguard));

}  // namespace

BENCHMARK_MAIN();
