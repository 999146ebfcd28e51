#pragma once

#include <string>

#include "splice/lang/ast.hpp"

namespace splice {

// Canonical source text. Re-parses to a structurally equal tree; holes print
// as `??` (statement holes as `??;`).
std::string pretty_print(const Program& p);
std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);

// Rewrites every `for` into `{ init; while (cond) { body; step; } }`. Leaves
// everything else, including holes, untouched.
Program desugar(const Program& p);
StmtPtr desugar(const StmtPtr& s);

}  // namespace splice
