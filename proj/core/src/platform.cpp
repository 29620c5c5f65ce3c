#include "vetbench/platform.hpp"

#include <deque>

#include "vetbench/error.hpp"

namespace vetbench {

namespace {

// An event whose value has been applied and now awaits delivery to apps.
struct Pending {
  std::string device;
  Value value;
};

}  // namespace

Platform::Platform(std::size_t chain_limit) : chain_limit_(chain_limit) {
  if (chain_limit_ == 0) throw ValidationError("chain limit must be positive");
}

void Platform::install_device(DeviceSpec spec) {
  auto id = spec.id;
  auto initial = spec.initial;
  devices_.add(std::move(spec));
  state_.set(id, std::move(initial));
}

void Platform::install_app(App app) {
  for (const auto& a : apps_) {
    if (a.id == app.id) throw ValidationError("duplicate app id " + app.id);
  }
  check_app(app, devices_);
  apps_.push_back(std::move(app));
}

SystemState Platform::initial_state() const {
  SystemState s;
  for (const auto& d : devices_.devices()) s.set(d.id, d.initial);
  return s;
}

void Platform::reset() {
  state_ = initial_state();
  log_.clear();
  record_.clear();
  loop_detected_ = false;
}

ProcessResult Platform::process_event(const Event& e) {
  const Value value = resolve_event(e, devices_);
  ProcessResult result;

  const bool changes = !(state_.at(e.device()) == value);
  log_.push_back(LoggedEvent{e, value, changes});
  if (!changes) return result;
  state_.set(e.device(), value);

  std::deque<Pending> queue;
  queue.push_back({e.device(), value});

  while (!queue.empty()) {
    const Pending ev = std::move(queue.front());
    queue.pop_front();

    for (const auto& app : apps_) {
      if (!app.trigger.matches(ev.device, ev.value)) continue;
      if (app.condition && !app.condition->eval(state_)) continue;

      std::vector<ContemplatedAction> contemplated;
      contemplated.reserve(app.actions.size());
      for (const auto& a : app.actions) {
        contemplated.push_back(
            {a.device, a.command, *devices_.at(a.device).resolve_command(a.command)});
      }

      PdpResponse decision = PdpResponse::allow();
      if (app.instrumented() && hook_) {
        decision = hook_(PdpRequest{app.id, ev.device, ev.value, app.condition, contemplated,
                                    state_});
      }

      for (const auto& a : contemplated) {
        ActionRecord rec{app.id, a, decision.allowed(), {}};
        if (!decision.allowed()) rec.violated = decision.violated;
        result.actions.push_back(rec);
        record_.push_back(std::move(rec));
      }
      if (!decision.allowed()) continue;

      for (const auto& a : contemplated) {
        if (state_.at(a.device) == a.target) continue;
        if (result.derived_events == chain_limit_) {
          result.loop_detected = true;
          loop_detected_ = true;
          return result;
        }
        state_.set(a.device, a.target);
        ++result.derived_events;
        Event derived = Event::update(a.device, a.target);
        derived.source_app = app.id;
        log_.push_back(LoggedEvent{std::move(derived), a.target, true});
        queue.push_back({a.device, a.target});
      }
    }
  }
  return result;
}

SystemState replay(const SystemState& initial, const std::vector<LoggedEvent>& log) {
  SystemState s = initial;
  for (const auto& entry : log) {
    if (entry.applied) s.set(entry.event.device(), entry.value);
  }
  return s;
}

}  // namespace vetbench
