#pragma once

#include <memory>
#include <optional>

#include "vetbench/config.hpp"
#include "vetbench/defense.hpp"
#include "vetbench/platform.hpp"

namespace vetbench {

/// A vanilla platform and a defended platform built from one config. Both
/// have the same devices, apps and initial state; only the defended one has
/// instrumented apps and a decision point.
class TestbedPair {
 public:
  TestbedPair(Platform vanilla, Platform defended,
              std::shared_ptr<PolicyDecisionPoint> engine, DefenseKind kind);

  TestbedPair(TestbedPair&&) noexcept = default;
  TestbedPair& operator=(TestbedPair&&) noexcept = default;
  TestbedPair(const TestbedPair&) = delete;
  TestbedPair& operator=(const TestbedPair&) = delete;

  Platform& vanilla() { return vanilla_; }
  Platform& defended() { return defended_; }
  const Platform& vanilla() const { return vanilla_; }
  const Platform& defended() const { return defended_; }
  DefenseKind defense() const { return kind_; }
  PolicyDecisionPoint* engine() { return engine_.get(); }
  /// The owned server when the defense is IotguardLike.
  iotguard::Server* server();

  /// Both platforms to their initial state; decision point state cleared.
  void reset();

 private:
  Platform vanilla_;
  Platform defended_;
  std::shared_ptr<PolicyDecisionPoint> engine_;
  DefenseKind kind_;
};

/// Builds the pair for `defense` (the config's own defense when absent).
/// Throws ValidationError when a policy cannot be compiled for it.
TestbedPair instantiate(const TestbedConfig& config,
                        std::optional<DefenseKind> defense = std::nullopt);

inline void reset_pair(TestbedPair& pair) { pair.reset(); }

}  // namespace vetbench
