#include "vetbench/expr.hpp"

#include "vetbench/device.hpp"
#include "vetbench/error.hpp"
#include "grammar.hpp"

namespace vetbench {

std::string_view to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "=";
}

RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::Eq: return RelOp::Ne;
    case RelOp::Ne: return RelOp::Eq;
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Le: return RelOp::Gt;
    case RelOp::Gt: return RelOp::Le;
    case RelOp::Ge: return RelOp::Lt;
  }
  return RelOp::Ne;
}

bool apply(RelOp op, const Value& lhs, const Value& rhs) {
  if (op == RelOp::Eq) return lhs == rhs;
  if (op == RelOp::Ne) return !(lhs == rhs);
  if (!lhs.is_integer() || !rhs.is_integer()) {
    throw ValidationError("relational operator " + std::string(to_string(op)) +
                          " needs integer operands");
  }
  const auto a = lhs.as_integer();
  const auto b = rhs.as_integer();
  switch (op) {
    case RelOp::Lt: return a < b;
    case RelOp::Le: return a <= b;
    case RelOp::Gt: return a > b;
    case RelOp::Ge: return a >= b;
    default: return false;
  }
}

std::string Atom::to_string() const {
  return device + " " + std::string(vetbench::to_string(op)) + " " + constant.to_string();
}

struct CondExpr::Node {
  Kind kind = Kind::True;
  Atom atom;
  std::vector<CondExpr> children;
};

namespace {

std::shared_ptr<const CondExpr::Node> make_node(CondExpr::Kind k) {
  auto n = std::make_shared<CondExpr::Node>();
  n->kind = k;
  return n;
}

}  // namespace

CondExpr::CondExpr() : node_(make_node(Kind::True)) {}

CondExpr CondExpr::constant(bool b) { return CondExpr(make_node(b ? Kind::True : Kind::False)); }

CondExpr CondExpr::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return CondExpr(std::move(n));
}

CondExpr CondExpr::negation(CondExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(e));
  return CondExpr(std::move(n));
}

CondExpr CondExpr::conjunction(std::vector<CondExpr> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return std::move(operands.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(operands);
  return CondExpr(std::move(n));
}

CondExpr CondExpr::disjunction(std::vector<CondExpr> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return std::move(operands.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(operands);
  return CondExpr(std::move(n));
}

CondExpr::Kind CondExpr::kind() const { return node_->kind; }

const Atom& CondExpr::as_atom() const {
  if (node_->kind != Kind::Atom) throw Error("expression is not an atom");
  return node_->atom;
}

const std::vector<CondExpr>& CondExpr::operands() const { return node_->children; }

bool CondExpr::eval(const SystemState& s) const {
  switch (node_->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return node_->atom.holds(s.at(node_->atom.device));
    case Kind::Not: return !node_->children.front().eval(s);
    case Kind::And:
      for (const auto& c : node_->children) {
        if (!c.eval(s)) return false;
      }
      return true;
    case Kind::Or:
      for (const auto& c : node_->children) {
        if (c.eval(s)) return true;
      }
      return false;
  }
  return false;
}

std::set<std::string> CondExpr::devices() const {
  std::set<std::string> out;
  for (const auto& a : atoms()) out.insert(a.device);
  return out;
}

std::vector<Atom> CondExpr::atoms() const {
  std::vector<Atom> out;
  if (node_->kind == Kind::Atom) out.push_back(node_->atom);
  for (const auto& c : node_->children) {
    auto sub = c.atoms();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string CondExpr::to_string() const {
  switch (node_->kind) {
    case Kind::True: return "TRUE";
    case Kind::False: return "FALSE";
    case Kind::Atom: return node_->atom.to_string();
    case Kind::Not: return "NOT (" + node_->children.front().to_string() + ")";
    case Kind::And:
    case Kind::Or: {
      const char* sep = node_->kind == Kind::And ? " AND " : " OR ";
      std::string out;
      for (std::size_t i = 0; i < node_->children.size(); ++i) {
        const auto& c = node_->children[i];
        if (i != 0) out += sep;
        const bool wrap = c.kind() == Kind::And || c.kind() == Kind::Or;
        out += wrap ? "(" + c.to_string() + ")" : c.to_string();
      }
      return out;
    }
  }
  return "TRUE";
}

bool operator==(const CondExpr& a, const CondExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == CondExpr::Kind::Atom) return a.node_->atom == b.node_->atom;
  return a.node_->children == b.node_->children;
}

namespace {

using detail::Tok;
using detail::TokenStream;

RelOp parse_relop(TokenStream& ts) {
  const auto& t = ts.peek();
  if (t.kind != Tok::Op) ts.fail("expected a relational operator");
  RelOp op;
  if (t.text == "=" || t.text == "==") op = RelOp::Eq;
  else if (t.text == "!=" || t.text == "<>") op = RelOp::Ne;
  else if (t.text == "<") op = RelOp::Lt;
  else if (t.text == "<=") op = RelOp::Le;
  else if (t.text == ">") op = RelOp::Gt;
  else op = RelOp::Ge;
  ts.next();
  return op;
}

bool is_keyword(const std::string& w) {
  return w == "AND" || w == "OR" || w == "NOT" || w == "TRUE" || w == "FALSE";
}

}  // namespace

namespace detail {

Atom parse_atom_tokens(TokenStream& ts) {
  const auto& dev = ts.peek();
  if (dev.kind != Tok::Ident || is_keyword(dev.text)) ts.fail("expected a device name");
  Atom a;
  a.device = ts.next().text;
  a.op = parse_relop(ts);
  const auto& val = ts.peek();
  if (val.kind == Tok::Number) {
    a.constant = *Value::parse(val.text);
  } else if (val.kind == Tok::Ident && !is_keyword(val.text)) {
    a.constant = Value(val.text);
  } else {
    ts.fail("expected a value");
  }
  ts.next();
  return a;
}

CondExpr parse_or(TokenStream& ts);

CondExpr parse_unary(TokenStream& ts) {
  if (ts.accept_word("NOT")) return CondExpr::negation(parse_unary(ts));
  if (ts.accept_word("TRUE")) return CondExpr::constant(true);
  if (ts.accept_word("FALSE")) return CondExpr::constant(false);
  if (ts.peek().kind == Tok::LParen) {
    ts.next();
    auto e = parse_or(ts);
    ts.expect(Tok::RParen, "')'");
    return e;
  }
  return CondExpr::atom(parse_atom_tokens(ts));
}

CondExpr parse_and(TokenStream& ts) {
  std::vector<CondExpr> terms{parse_unary(ts)};
  while (ts.accept_word("AND")) terms.push_back(parse_unary(ts));
  return CondExpr::conjunction(std::move(terms));
}

CondExpr parse_or(TokenStream& ts) {
  std::vector<CondExpr> terms{parse_and(ts)};
  while (ts.accept_word("OR")) terms.push_back(parse_and(ts));
  return CondExpr::disjunction(std::move(terms));
}

}  // namespace detail

CondExpr parse_condition(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  if (ts.at_end()) ts.fail("empty condition");
  auto e = detail::parse_or(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return e;
}

Atom parse_atom(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  auto a = detail::parse_atom_tokens(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return a;
}

void check_atom(const Atom& a, const DeviceRegistry& devices) {
  const auto* spec = devices.find(a.device);
  if (spec == nullptr) throw ValidationError("unknown device " + a.device);
  if (spec->domain.is_integer()) {
    if (!a.constant.is_integer()) {
      throw ValidationError("type mismatch: " + a.device + " is integer-valued, got " +
                            a.constant.to_string());
    }
    return;
  }
  if (a.op != RelOp::Eq && a.op != RelOp::Ne) {
    throw ValidationError("type mismatch: operator " + std::string(to_string(a.op)) +
                          " on enumerated device " + a.device);
  }
  if (!spec->domain.contains(a.constant)) {
    throw ValidationError("type mismatch: " + a.constant.to_string() + " is not a value of " +
                          a.device);
  }
}

void check_condition(const CondExpr& e, const DeviceRegistry& devices) {
  for (const auto& a : e.atoms()) check_atom(a, devices);
}

namespace {

using Clauses = std::vector<std::vector<Atom>>;

Clauses product(const Clauses& a, const Clauses& b) {
  Clauses out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      auto clause = x;
      clause.insert(clause.end(), y.begin(), y.end());
      out.push_back(std::move(clause));
    }
  }
  return out;
}

Clauses to_dnf(const CondExpr& e, bool negated) {
  using K = CondExpr::Kind;
  switch (e.kind()) {
    case K::True: return negated ? Clauses{} : Clauses{{}};
    case K::False: return negated ? Clauses{{}} : Clauses{};
    case K::Atom: return {{negated ? e.as_atom().negated() : e.as_atom()}};
    case K::Not: return to_dnf(e.operands().front(), !negated);
    case K::And:
    case K::Or: {
      const bool conjunctive = (e.kind() == K::And) != negated;
      if (conjunctive) {
        Clauses acc{{}};
        for (const auto& c : e.operands()) acc = product(acc, to_dnf(c, negated));
        return acc;
      }
      Clauses acc;
      for (const auto& c : e.operands()) {
        auto sub = to_dnf(c, negated);
        acc.insert(acc.end(), sub.begin(), sub.end());
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

NormalizedFormula normalize(const CondExpr& e) { return NormalizedFormula{to_dnf(e, false)}; }

bool NormalizedFormula::eval(const SystemState& s) const {
  for (const auto& clause : clauses) {
    bool all = true;
    for (const auto& a : clause) {
      if (!a.holds(s.at(a.device))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::string NormalizedFormula::to_string() const {
  if (clauses.empty()) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i != 0) out += " OR ";
    const auto& c = clauses[i];
    if (c.empty()) {
      out += "TRUE";
      continue;
    }
    out += "(";
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j != 0) out += " AND ";
      out += c[j].to_string();
    }
    out += ")";
  }
  return out;
}

}  // namespace vetbench
