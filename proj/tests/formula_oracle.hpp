#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "vetbench/state.hpp"

namespace vbtest {

// Independent model of boolean formulas over binary devices, with its own
// printer and evaluator. The library sees only the printed text.
struct Formula {
  enum Kind { Lit, Not, And, Or, Const } kind;
  std::string device;
  bool want_on = true;
  bool equal = true;  // `=` or `!=`
  bool value = true;  // for Const
  std::vector<std::shared_ptr<Formula>> kids;
};
using FormulaPtr = std::shared_ptr<Formula>;

inline FormulaPtr random_formula(std::mt19937_64& rng, const std::vector<std::string>& devices,
                          int depth) {
  auto f = std::make_shared<Formula>();
  const int pick = depth == 0 ? 0 : static_cast<int>(rng() % 5);
  switch (pick) {
    case 0:
    case 4:
      if (rng() % 10 == 0) {
        f->kind = Formula::Const;
        f->value = rng() % 2;
        break;
      }
      f->kind = Formula::Lit;
      f->device = devices[rng() % devices.size()];
      f->want_on = rng() % 2;
      f->equal = rng() % 3 != 0;
      break;
    case 1:
      f->kind = Formula::Not;
      f->kids.push_back(random_formula(rng, devices, depth - 1));
      break;
    default:
      f->kind = pick == 2 ? Formula::And : Formula::Or;
      for (int i = 0, n = 2 + static_cast<int>(rng() % 2); i < n; ++i) {
        f->kids.push_back(random_formula(rng, devices, depth - 1));
      }
  }
  return f;
}

inline std::string print(const Formula& f) {
  switch (f.kind) {
    case Formula::Const: return f.value ? "TRUE" : "FALSE";
    case Formula::Lit:
      return f.device + (f.equal ? " = " : " != ") + (f.want_on ? "ON" : "OFF");
    case Formula::Not: return "NOT (" + print(*f.kids[0]) + ")";
    default: {
      std::string out;
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += f.kind == Formula::And ? " AND " : " OR ";
        out += "(" + print(*f.kids[i]) + ")";
      }
      return out;
    }
  }
}

inline bool truth(const Formula& f, const std::map<std::string, bool>& on) {
  switch (f.kind) {
    case Formula::Const: return f.value;
    case Formula::Lit: return (on.at(f.device) == f.want_on) == f.equal;
    case Formula::Not: return !truth(*f.kids[0], on);
    case Formula::And:
      for (const auto& k : f.kids) {
        if (!truth(*k, on)) return false;
      }
      return true;
    case Formula::Or:
      for (const auto& k : f.kids) {
        if (truth(*k, on)) return true;
      }
      return false;
  }
  return false;
}

inline std::map<std::string, bool> as_bits(const vetbench::SystemState& s) {
  std::map<std::string, bool> out;
  for (const auto& [d, v] : s) out[d] = v == vetbench::Value("ON");
  return out;
}

}  // namespace vbtest
