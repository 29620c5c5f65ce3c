#include "vetbench/policy.hpp"

#include <set>

#include "grammar.hpp"
#include "vetbench/device.hpp"
#include "vetbench/error.hpp"

namespace vetbench {

namespace {

using detail::Tok;
using detail::TokenStream;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_atoms(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i != 0) out += " AND ";
    out += atoms[i].to_string();
  }
  return out;
}

std::vector<Atom> parse_atom_list(TokenStream& ts) {
  std::vector<Atom> out{detail::parse_atom_tokens(ts)};
  while (ts.accept_word("AND") || (ts.peek().kind == Tok::Comma && (ts.next(), true))) {
    out.push_back(detail::parse_atom_tokens(ts));
  }
  return out;
}

PolicySpec parse_body(TokenStream& ts, std::string id, Dialect dialect) {
  PolicySpec p;
  p.id = std::move(id);
  switch (dialect) {
    case Dialect::Invariant:
      p.form = StateInvariant{detail::parse_or(ts)};
      break;
    case Dialect::Guard: {
      ActionGuard g;
      if (ts.accept_word("deny-if")) g.mode = GuardMode::DenyIf;
      else if (ts.accept_word("allow-only-if")) g.mode = GuardMode::AllowOnlyIf;
      else ts.fail("expected 'deny-if' or 'allow-only-if'");
      ts.expect_word("action");
      g.device = ts.expect(Tok::Ident, "a device name").text;
      ts.expect(Tok::Dot, "'.'");
      g.command = ts.expect(Tok::Ident, "a command name").text;
      if (ts.peek().kind == Tok::LParen) {
        ts.next();
        ts.expect(Tok::RParen, "')'");
      }
      ts.expect_word("when");
      g.guard = detail::parse_or(ts);
      p.form = std::move(g);
      break;
    }
    case Dialect::Implication: {
      Implication imp;
      if (ts.accept_word("restrict")) imp.mode = ImplicationMode::Restrict;
      else if (ts.accept_word("allow")) imp.mode = ImplicationMode::Allow;
      else ts.fail("expected 'restrict' or 'allow'");
      ts.expect_word("if");
      imp.premise = parse_atom_list(ts);
      ts.expect_word("then");
      imp.conclusion = parse_atom_list(ts);
      p.form = std::move(imp);
      break;
    }
    case Dialect::Flow:
      ts.expect_word("untrusted-to-trusted");
      p.form = TriggerActionFlow{};
      break;
    case Dialect::General:
      ts.expect_word("no-cycle");
      p.form = GeneralPolicy{GeneralCheck::NoCycle};
      break;
  }
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return p;
}

std::string parse_header(TokenStream& ts) {
  if (ts.at_end()) ts.fail("empty policy");
  auto id = ts.expect(Tok::Ident, "a policy id").text;
  ts.expect(Tok::Colon, "':' after the policy id");
  return id;
}

}  // namespace

std::string_view to_string(Dialect d) {
  switch (d) {
    case Dialect::Invariant: return "invariant";
    case Dialect::Guard: return "guard";
    case Dialect::Implication: return "implication";
    case Dialect::Flow: return "flow";
    case Dialect::General: return "general";
  }
  return "invariant";
}

std::optional<Dialect> parse_dialect(std::string_view text) {
  for (auto d : {Dialect::Invariant, Dialect::Guard, Dialect::Implication, Dialect::Flow,
                 Dialect::General}) {
    if (text == to_string(d)) return d;
  }
  return std::nullopt;
}

Dialect PolicySpec::dialect() const {
  return std::visit(overloaded{
                        [](const StateInvariant&) { return Dialect::Invariant; },
                        [](const ActionGuard&) { return Dialect::Guard; },
                        [](const Implication&) { return Dialect::Implication; },
                        [](const TriggerActionFlow&) { return Dialect::Flow; },
                        [](const GeneralPolicy&) { return Dialect::General; },
                    },
                    form);
}

std::string PolicySpec::to_string() const {
  std::string head = id + ": " + std::string(vetbench::to_string(dialect())) + " ";
  return head + std::visit(overloaded{
                               [](const StateInvariant& inv) { return inv.expr.to_string(); },
                               [](const ActionGuard& g) {
                                 return std::string(g.mode == GuardMode::DenyIf ? "deny-if"
                                                                                : "allow-only-if") +
                                        " action " + g.device + "." + g.command + " when " +
                                        g.guard.to_string();
                               },
                               [](const Implication& imp) {
                                 return std::string(imp.mode == ImplicationMode::Restrict
                                                        ? "restrict"
                                                        : "allow") +
                                        " if " + join_atoms(imp.premise) + " then " +
                                        join_atoms(imp.conclusion);
                               },
                               [](const TriggerActionFlow&) {
                                 return std::string("untrusted-to-trusted");
                               },
                               [](const GeneralPolicy&) { return std::string("no-cycle"); },
                           },
                           form);
}

PolicySpec parse_policy(std::string_view text, Dialect dialect) {
  TokenStream ts(detail::tokenize(text));
  auto id = parse_header(ts);
  if (ts.peek().kind == Tok::Ident) {
    if (auto named = parse_dialect(ts.peek().text)) {
      if (*named != dialect) {
        ts.fail("policy is written in the " + std::string(to_string(dialect)) + " dialect");
      }
      ts.next();
    }
  }
  return parse_body(ts, std::move(id), dialect);
}

PolicySpec parse_policy_line(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  auto id = parse_header(ts);
  if (ts.peek().kind != Tok::Ident) ts.fail("expected a dialect keyword");
  auto dialect = parse_dialect(ts.peek().text);
  if (!dialect) ts.fail("unknown dialect");
  ts.next();
  return parse_body(ts, std::move(id), *dialect);
}

std::vector<PolicySpec> parse_policy_file(std::string_view text) {
  std::vector<PolicySpec> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;
    try {
      out.push_back(parse_policy_line(line));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    }
    if (!ids.insert(out.back().id).second) {
      throw ParseError("duplicate policy id " + out.back().id, line_no, 1);
    }
  }
  return out;
}

void check_policy(const PolicySpec& p, const DeviceRegistry& devices) {
  try {
    std::visit(overloaded{
                   [&](const StateInvariant& inv) { check_condition(inv.expr, devices); },
                   [&](const ActionGuard& g) {
                     const auto& spec = devices.at(g.device);
                     if (!spec.resolve_command(g.command)) {
                       throw ValidationError("device " + g.device + " has no command " +
                                             g.command);
                     }
                     check_condition(g.guard, devices);
                   },
                   [&](const Implication& imp) {
                     for (const auto& a : imp.premise) check_atom(a, devices);
                     for (const auto& a : imp.conclusion) check_atom(a, devices);
                   },
                   [](const TriggerActionFlow&) {},
                   [](const GeneralPolicy&) {},
               },
               p.form);
  } catch (const ValidationError& e) {
    throw ValidationError("policy " + p.id + ": " + e.what());
  }
}

bool relevant(const PolicySpec& policy, std::string_view device, Selection selection) {
  return std::visit(overloaded{
                        [&](const StateInvariant& inv) {
                          return selection == Selection::All ||
                                 inv.expr.devices().count(std::string(device)) != 0;
                        },
                        [&](const ActionGuard& g) { return g.device == device; },
                        [&](const Implication& imp) {
                          for (const auto& a : imp.conclusion) {
                            if (a.device == device) return true;
                          }
                          return false;
                        },
                        [](const TriggerActionFlow&) { return true; },
                        [](const GeneralPolicy&) { return true; },
                    },
                    policy.form);
}

}  // namespace vetbench
