#include "vetbench/testbed.hpp"

namespace vetbench {

TestbedPair::TestbedPair(Platform vanilla, Platform defended,
                         std::shared_ptr<PolicyDecisionPoint> engine, DefenseKind kind)
    : vanilla_(std::move(vanilla)),
      defended_(std::move(defended)),
      engine_(std::move(engine)),
      kind_(kind) {}

iotguard::Server* TestbedPair::server() {
  auto* e = dynamic_cast<IotguardEngine*>(engine_.get());
  return e == nullptr ? nullptr : e->server();
}

void TestbedPair::reset() {
  vanilla_.reset();
  defended_.reset();
  if (engine_) engine_->reset();
}

TestbedPair instantiate(const TestbedConfig& config, std::optional<DefenseKind> defense) {
  config.validate();
  const DefenseKind kind = defense.value_or(config.defense);

  Platform vanilla(config.chain_limit);
  Platform defended(config.chain_limit);
  for (const auto& d : config.devices) {
    vanilla.install_device(d);
    defended.install_device(d);
  }
  for (const auto& app : config.compiled_apps()) {
    vanilla.install_app(app);
    defended.install_app(kind == DefenseKind::None ? app : instrument(app, kind));
  }

  std::shared_ptr<PolicyDecisionPoint> engine =
      make_engine(kind, config.compiled_policies(), defended.devices(),
                  config.fail_closed ? FailureMode::FailClosed : FailureMode::FailOpen);
  if (engine) {
    defended.set_defense_hook(
        [pdp = engine.get()](const PdpRequest& req) { return pdp->decide(req); });
  }
  return TestbedPair(std::move(vanilla), std::move(defended), std::move(engine), kind);
}

}  // namespace vetbench
