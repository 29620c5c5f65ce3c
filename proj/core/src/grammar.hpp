#pragma once

// Recursive-descent entry points shared by the condition, policy and app
// parsers.

#include "text.hpp"
#include "vetbench/expr.hpp"

namespace vetbench::detail {

Atom parse_atom_tokens(TokenStream& ts);
CondExpr parse_or(TokenStream& ts);

}  // namespace vetbench::detail
