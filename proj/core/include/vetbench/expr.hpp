#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/state.hpp"
#include "vetbench/value.hpp"

namespace vetbench {

class DeviceRegistry;

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(RelOp op);
RelOp negate(RelOp op);
bool apply(RelOp op, const Value& lhs, const Value& rhs);

/// `device op constant`.
struct Atom {
  std::string device;
  RelOp op = RelOp::Eq;
  Value constant;

  bool holds(const Value& device_value) const { return apply(op, device_value, constant); }
  Atom negated() const { return Atom{device, negate(op), constant}; }
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.device != b.device) return a.device < b.device;
    if (a.op != b.op) return a.op < b.op;
    return a.constant < b.constant;
  }
};

/// Quantifier-free boolean condition over device values. Immutable and
/// cheap to copy; nodes are shared.
class CondExpr {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  CondExpr();  // true

  static CondExpr constant(bool b);
  static CondExpr atom(Atom a);
  static CondExpr negation(CondExpr e);
  /// n-ary conjunction; a single operand is returned unchanged.
  static CondExpr conjunction(std::vector<CondExpr> operands);
  static CondExpr disjunction(std::vector<CondExpr> operands);

  Kind kind() const;
  const Atom& as_atom() const;
  const std::vector<CondExpr>& operands() const;

  /// Throws ValidationError when a referenced device is missing from `s`.
  bool eval(const SystemState& s) const;

  std::set<std::string> devices() const;
  /// All atoms, left to right.
  std::vector<Atom> atoms() const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  friend bool operator==(const CondExpr& a, const CondExpr& b);

  struct Node;

 private:
  explicit CondExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// expr := or ; or := and ('OR' and)* ; and := unary ('AND' unary)* ;
/// unary := 'NOT' unary | '(' expr ')' | 'TRUE' | 'FALSE' | atom
/// Throws ParseError carrying the column of the offending token.
CondExpr parse_condition(std::string_view text);
Atom parse_atom(std::string_view text);

/// Checks device existence and constant/operator compatibility with each
/// device's domain. Throws ValidationError.
void check_condition(const CondExpr& e, const DeviceRegistry& devices);
void check_atom(const Atom& a, const DeviceRegistry& devices);

/// Disjunction of conjunctions of atoms; negation is pushed into the
/// relational operators. An empty disjunction is false, an empty clause true.
struct NormalizedFormula {
  std::vector<std::vector<Atom>> clauses;

  bool eval(const SystemState& s) const;
  std::string to_string() const;
};

NormalizedFormula normalize(const CondExpr& e);

}  // namespace vetbench
