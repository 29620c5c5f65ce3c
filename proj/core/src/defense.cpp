#include "vetbench/defense.hpp"

#include <algorithm>
#include <stdexcept>

#include "vetbench/error.hpp"

namespace vetbench {

namespace {

Value guard_target(const ActionGuard& g, const DeviceRegistry& devices) {
  auto target = devices.at(g.device).resolve_command(g.command);
  if (!target) throw ValidationError("device " + g.device + " has no command " + g.command);
  return *target;
}

CondExpr any_of(const std::vector<Atom>& atoms) {
  std::vector<CondExpr> terms;
  for (const auto& a : atoms) terms.push_back(CondExpr::atom(a));
  return CondExpr::disjunction(std::move(terms));
}

/// Post-state invariant for one policy; nullopt when it imposes nothing.
std::optional<CondExpr> lower(const PolicySpec& p, const DeviceRegistry& devices) {
  if (const auto* inv = std::get_if<StateInvariant>(&p.form)) return inv->expr;
  if (const auto* g = std::get_if<ActionGuard>(&p.form)) {
    auto took = CondExpr::atom(Atom{g->device, RelOp::Eq, guard_target(*g, devices)});
    auto when = g->mode == GuardMode::DenyIf ? CondExpr::negation(g->guard) : g->guard;
    return CondExpr::disjunction({CondExpr::negation(took), when});
  }
  if (const auto* imp = std::get_if<Implication>(&p.form)) {
    if (imp->mode == ImplicationMode::Allow) return std::nullopt;
    return CondExpr::negation(CondExpr::conjunction({any_of(imp->premise), any_of(imp->conclusion)}));
  }
  throw ValidationError("policy " + p.id + ": " + std::string(to_string(p.dialect())) +
                        " policies have no state-invariant form");
}

std::vector<std::string> violated_on(const std::vector<CompiledInvariant>& invariants,
                                     const SystemState& s) {
  std::vector<std::string> out;
  for (const auto& inv : invariants) {
    if (!inv.formula.eval(s)) out.push_back(inv.id);
  }
  return out;
}

PdpResponse verdict(std::vector<std::string> violated) {
  return violated.empty() ? PdpResponse::allow() : PdpResponse::deny(std::move(violated));
}

}  // namespace

App instrument(App app, DefenseKind kind) {
  app.gated_by = kind;
  return app;
}

std::vector<CompiledInvariant> compile_post_state(const std::vector<PolicySpec>& policies,
                                                  const DeviceRegistry& devices) {
  std::vector<CompiledInvariant> out;
  for (const auto& p : policies) {
    check_policy(p, devices);
    if (auto expr = lower(p, devices)) out.push_back({p.id, normalize(*expr), *expr});
  }
  return out;
}

ExpatEngine::ExpatEngine(const std::vector<PolicySpec>& policies, const DeviceRegistry& devices)
    : invariants_(compile_post_state(policies, devices)) {}

PdpResponse ExpatEngine::decide(const PdpRequest& req) {
  return verdict(violated_on(invariants_, apply_actions(req.state, req.actions)));
}

PatriotEngine::PatriotEngine(const std::vector<PolicySpec>& policies,
                             const DeviceRegistry& devices) {
  for (const auto& p : policies) {
    check_policy(p, devices);
    if (const auto* g = std::get_if<ActionGuard>(&p.form)) {
      guards_.push_back({p.id, g->device, guard_target(*g, devices), g->guard, g->mode});
      continue;
    }
    if (auto expr = lower(p, devices)) {
      invariants_.push_back({p.id, normalize(*expr), *expr});
      origins_.push_back(p);
    }
  }
}

PdpResponse PatriotEngine::decide(const PdpRequest& req) {
  std::vector<std::string> violated;
  for (const auto& g : guards_) {
    const bool contemplated = std::any_of(req.actions.begin(), req.actions.end(), [&](const auto& a) {
      return a.device == g.device && a.target == g.target;
    });
    if (!contemplated) continue;
    const bool holds = g.guard.eval(req.state);
    if (holds == (g.mode == GuardMode::DenyIf)) violated.push_back(g.id);
  }
  const SystemState post = apply_actions(req.state, req.actions);
  for (std::size_t i = 0; i < invariants_.size(); ++i) {
    const bool applies = std::any_of(req.actions.begin(), req.actions.end(), [&](const auto& a) {
      return relevant(origins_[i], a.device);
    });
    if (applies && !invariants_[i].formula.eval(post)) violated.push_back(invariants_[i].id);
  }
  return verdict(std::move(violated));
}

namespace {

/// Atoms of an atom or a conjunction of atoms.
std::optional<std::vector<Atom>> conjunct_atoms(const CondExpr& e) {
  if (e.kind() == CondExpr::Kind::Atom) return std::vector<Atom>{e.as_atom()};
  if (e.kind() != CondExpr::Kind::And) return std::nullopt;
  std::vector<Atom> out;
  for (const auto& c : e.operands()) {
    if (c.kind() != CondExpr::Kind::Atom) return std::nullopt;
    out.push_back(c.as_atom());
  }
  return out;
}

std::vector<Atom> negated(std::vector<Atom> atoms) {
  for (auto& a : atoms) a = a.negated();
  return atoms;
}

/// NOT(P) OR Q, in either operand order.
std::optional<Implication> invariant_as_implication(const CondExpr& e) {
  if (e.kind() != CondExpr::Kind::Or || e.operands().size() != 2) return std::nullopt;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& lhs = e.operands()[i];
    const auto& rhs = e.operands()[1 - i];
    if (lhs.kind() != CondExpr::Kind::Not) continue;
    auto p = conjunct_atoms(lhs.operands().front());
    auto q = conjunct_atoms(rhs);
    if (p && q) return Implication{*p, negated(*q), ImplicationMode::Restrict};
  }
  return std::nullopt;
}

}  // namespace

iotguard::ServerPolicyStore compile_server_store(const std::vector<PolicySpec>& policies,
                                                 const DeviceRegistry& devices) {
  iotguard::ServerPolicyStore store;
  for (const auto& p : policies) {
    check_policy(p, devices);
    if (const auto* inv = std::get_if<StateInvariant>(&p.form)) {
      auto imp = invariant_as_implication(inv->expr);
      if (!imp) {
        throw ValidationError("policy " + p.id +
                              ": invariant must have the form NOT (P) OR Q over atom conjunctions");
      }
      store.implications.emplace_back(p.id, std::move(*imp));
    } else if (const auto* g = std::get_if<ActionGuard>(&p.form)) {
      auto when = conjunct_atoms(g->guard);
      if (!when) {
        throw ValidationError("policy " + p.id + ": guard must be an atom conjunction");
      }
      Atom took{g->device, RelOp::Eq, guard_target(*g, devices)};
      auto premise = g->mode == GuardMode::DenyIf ? *when : negated(*when);
      store.implications.emplace_back(
          p.id, Implication{std::move(premise), {took}, ImplicationMode::Restrict});
    } else if (const auto* imp = std::get_if<Implication>(&p.form)) {
      if (imp->mode == ImplicationMode::Restrict) store.implications.emplace_back(p.id, *imp);
    } else if (std::holds_alternative<TriggerActionFlow>(p.form)) {
      store.flows.push_back(p.id);
    } else {
      store.generals.push_back(p.id);
    }
  }
  return store;
}

IotguardEngine::IotguardEngine(const std::vector<PolicySpec>& policies,
                               const DeviceRegistry& devices, FailureMode on_failure)
    : on_failure_(on_failure) {
  std::map<std::string, DeviceTags> tags;
  for (const auto& d : devices.devices()) tags.emplace(d.id, d.tags);
  server_ = std::make_shared<iotguard::Server>(compile_server_store(policies, devices),
                                               std::move(tags));
  std::weak_ptr<iotguard::Server> weak = server_;
  transport_ = [weak](const std::string& msg) {
    auto s = weak.lock();
    if (!s) throw std::runtime_error("server unreachable");
    return s->handle_message(msg);
  };
}

IotguardEngine::IotguardEngine(Transport transport, FailureMode on_failure)
    : transport_(std::move(transport)), on_failure_(on_failure) {}

PdpResponse IotguardEngine::decide(const PdpRequest& req) {
  try {
    return iotguard::decode_response(transport_(iotguard::encode_request(req)));
  } catch (const std::exception&) {
    if (on_failure_ == FailureMode::FailClosed) return PdpResponse::deny({"server-unreachable"});
    return PdpResponse::allow();
  }
}

void IotguardEngine::reset() {
  if (server_) {
    server_->reset();
    return;
  }
  try {
    transport_(R"({"type":"reset"})");
  } catch (const std::exception&) {
  }
}

void IotguardEngine::disconnect() { server_.reset(); }

std::unique_ptr<PolicyDecisionPoint> make_engine(DefenseKind kind,
                                                 const std::vector<PolicySpec>& policies,
                                                 const DeviceRegistry& devices,
                                                 FailureMode on_failure) {
  switch (kind) {
    case DefenseKind::None: return nullptr;
    case DefenseKind::Expat: return std::make_unique<ExpatEngine>(policies, devices);
    case DefenseKind::Patriot: return std::make_unique<PatriotEngine>(policies, devices);
    case DefenseKind::Iotguard:
      return std::make_unique<IotguardEngine>(policies, devices, on_failure);
  }
  return nullptr;
}

}  // namespace vetbench
