#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vetbench/app.hpp"
#include "vetbench/device.hpp"
#include "vetbench/event.hpp"
#include "vetbench/pdp.hpp"
#include "vetbench/state.hpp"

namespace vetbench {

inline constexpr std::size_t kDefaultChainLimit = 25;

/// One contemplated app action and what happened to it.
struct ActionRecord {
  std::string app_id;
  ContemplatedAction action;
  bool allowed = true;
  std::vector<std::string> violated;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

/// One processed event. `applied` is false when the event carried the
/// device's current value and therefore changed nothing.
struct LoggedEvent {
  Event event;
  Value value;
  bool applied = false;

  friend bool operator==(const LoggedEvent&, const LoggedEvent&) = default;
};

struct ProcessResult {
  std::vector<ActionRecord> actions;
  std::size_t derived_events = 0;
  bool loop_detected = false;
};

/// Deterministic in-process smart-home platform.
///
/// Processing an external event applies it, then delivers it and every
/// event derived from app actions through a FIFO queue. For each delivered
/// event the installed apps are scanned in install order; an app fires when
/// its trigger matches the event's new value and its condition holds on the
/// state at that moment. Instrumented apps consult the defense hook once for
/// the whole action block. Each executed action that changes a value emits
/// a derived status update; more than `chain_limit` derived events for one
/// external event abort the cascade and raise the loop flag.
///
/// External events are never gated: defenses only guard app actions.
class Platform {
 public:
  explicit Platform(std::size_t chain_limit = kDefaultChainLimit);

  /// Throws ValidationError on a duplicate id or invalid spec.
  void install_device(DeviceSpec spec);
  /// Throws ValidationError on a duplicate id or dangling reference.
  void install_app(App app);
  void set_defense_hook(DefenseHook hook) { hook_ = std::move(hook); }
  bool has_defense_hook() const { return static_cast<bool>(hook_); }

  /// Throws ValidationError for a malformed event.
  ProcessResult process_event(const Event& e);

  SystemState snapshot() const { return state_; }
  SystemState initial_state() const;
  /// Every device back to its initial value; log, loop flag and action
  /// record cleared. Devices, apps and the hook stay installed.
  void reset();

  const DeviceRegistry& devices() const { return devices_; }
  const std::vector<App>& apps() const { return apps_; }
  const std::vector<LoggedEvent>& event_log() const { return log_; }
  const std::vector<ActionRecord>& action_record() const { return record_; }
  bool loop_detected() const { return loop_detected_; }
  std::size_t chain_limit() const { return chain_limit_; }

 private:
  std::size_t chain_limit_;
  DeviceRegistry devices_;
  std::vector<App> apps_;
  SystemState state_;
  DefenseHook hook_;
  std::vector<LoggedEvent> log_;
  std::vector<ActionRecord> record_;
  bool loop_detected_ = false;
};

/// Re-applies every applied entry of `log` to `initial`. Used to check that
/// no value changes outside the log.
SystemState replay(const SystemState& initial, const std::vector<LoggedEvent>& log);

}  // namespace vetbench
