#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vetbench/app.hpp"
#include "vetbench/device.hpp"
#include "vetbench/expr.hpp"
#include "vetbench/iotguard.hpp"
#include "vetbench/pdp.hpp"
#include "vetbench/policy.hpp"

namespace vetbench {

/// Returns `app` with its action block gated by one enforcement hook of
/// `kind`. Trigger, condition and actions are unchanged.
App instrument(App app, DefenseKind kind);

/// A policy decision function. Implementations may keep state between
/// requests; `reset` returns them to their freshly created state.
class PolicyDecisionPoint {
 public:
  virtual ~PolicyDecisionPoint() = default;
  virtual DefenseKind kind() const = 0;
  virtual PdpResponse decide(const PdpRequest& req) = 0;
  virtual void reset() {}
};

/// A policy lowered to a state invariant, keeping its origin for selection.
struct CompiledInvariant {
  std::string id;
  NormalizedFormula formula;
  CondExpr source;
};

/// A guard kept in pre-state form.
struct CompiledGuard {
  std::string id;
  std::string device;
  Value target;
  CondExpr guard;
  GuardMode mode = GuardMode::DenyIf;
};

/// Lowers ActionGuard and Implication policies to invariants over the
/// post-state. Restrict implications become NOT((p1 OR ...) AND (c1 OR ...));
/// allow implications are dropped. Flow and general policies are rejected
/// with ValidationError.
std::vector<CompiledInvariant> compile_post_state(const std::vector<PolicySpec>& policies,
                                                  const DeviceRegistry& devices);

/// Post-state enforcement: simulate the whole action block on a copy of the
/// current state and allow iff every policy holds on the result.
class ExpatEngine final : public PolicyDecisionPoint {
 public:
  ExpatEngine(const std::vector<PolicySpec>& policies, const DeviceRegistry& devices);
  DefenseKind kind() const override { return DefenseKind::Expat; }
  PdpResponse decide(const PdpRequest& req) override;

 private:
  std::vector<CompiledInvariant> invariants_;
};

/// Pre-state enforcement over relevant policies only: guards of the
/// contemplated commands are evaluated on the current state; relevant
/// invariants (and restrict implications) on the simulated post-state.
class PatriotEngine final : public PolicyDecisionPoint {
 public:
  PatriotEngine(const std::vector<PolicySpec>& policies, const DeviceRegistry& devices);
  DefenseKind kind() const override { return DefenseKind::Patriot; }
  PdpResponse decide(const PdpRequest& req) override;

 private:
  std::vector<CompiledGuard> guards_;
  std::vector<CompiledInvariant> invariants_;
  /// The policy each invariant came from, for relevance checks.
  std::vector<PolicySpec> origins_;
};

/// Lowers a policy set into the server's store. Invariants of the shape
/// NOT(P) OR Q and action guards become restrict implications; see
/// docs/formats.md for the exact rules. Throws ValidationError for shapes
/// that have no implication form.
iotguard::ServerPolicyStore compile_server_store(const std::vector<PolicySpec>& policies,
                                                 const DeviceRegistry& devices);

enum class FailureMode { FailOpen, FailClosed };

/// Carries one encoded request to the server and returns the encoded
/// response. Throws on transport failure.
using Transport = std::function<std::string(const std::string&)>;

/// Enforcement-point side of the remote decision function. Only what the
/// instrumented app exports crosses the transport.
class IotguardEngine final : public PolicyDecisionPoint {
 public:
  /// Owns a fresh in-process server reached through `handle_message`.
  IotguardEngine(const std::vector<PolicySpec>& policies, const DeviceRegistry& devices,
                 FailureMode on_failure = FailureMode::FailOpen);
  /// Talks to an external server through `transport`.
  IotguardEngine(Transport transport, FailureMode on_failure = FailureMode::FailOpen);

  DefenseKind kind() const override { return DefenseKind::Iotguard; }
  PdpResponse decide(const PdpRequest& req) override;
  void reset() override;

  /// Null when the engine was built around an external transport.
  iotguard::Server* server() { return server_.get(); }
  const iotguard::Server* server() const { return server_.get(); }
  /// Detach the owned server; later requests fail like an unreachable host.
  void disconnect();

 private:
  std::shared_ptr<iotguard::Server> server_;
  Transport transport_;
  FailureMode on_failure_;
};

/// Builds the decision point for `kind`; null for DefenseKind::None.
std::unique_ptr<PolicyDecisionPoint> make_engine(DefenseKind kind,
                                                 const std::vector<PolicySpec>& policies,
                                                 const DeviceRegistry& devices,
                                                 FailureMode on_failure = FailureMode::FailOpen);

}  // namespace vetbench
