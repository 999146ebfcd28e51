#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splice/lang/typecheck.hpp"

namespace splice {

// A name a codelet uses without declaring it. Variables carry their type in
// the donor; a function reference is a call to the donor itself.
struct FreeRef {
  std::string name;
  Type type;
  bool is_function = false;
  FunctionSig sig;  // functions only

  bool operator==(const FreeRef&) const = default;
};

struct CodeletOrigin {
  uint32_t source = 0;  // corpus entry id
  NodeId first = 0;
  NodeId last = 0;
};

struct ExprCodelet {
  ExprPtr expr;
  Type type;
  Role role;
  size_t size = 0;      // AST nodes
  size_t position = 0;  // pre-order position in the donor
  CodeletOrigin origin;
  std::vector<FreeRef> free;  // first-occurrence order
  std::string text;
};

struct StmtCodelet {
  std::vector<StmtPtr> stmts;
  size_t size = 0;
  int depth = 0;        // nesting depth of the enclosing block; the body is 0
  size_t position = 0;  // pre-order position of the first statement
  CodeletOrigin origin;
  std::vector<FreeRef> free;
  std::vector<Binding> declares;  // top-level declarations of the window
  std::string text;
};

// Every expression node of a desugared, type-checked donor, sorted by size
// then position.
std::vector<ExprCodelet> extract_expr_codelets(const Program& donor, const TypeInfo& info, uint32_t source = 0);

// Every contiguous window of 1..maxLen statements of every block, sorted by
// size, then depth, then position. Loop bodies and branches that are single
// statements count as one-statement blocks.
std::vector<StmtCodelet> extract_stmt_codelets(const Program& donor, const TypeInfo& info, size_t max_len,
                                               uint32_t source = 0);

// `c` followed by the variants that replace one integer literal of `c` by one
// of `literals` (draft constants) or `int_vars` (draft variables of type int),
// literal by literal in pre-order, at most `budget` results in total.
std::vector<ExprCodelet> adapt_constants(const ExprCodelet& c, const std::vector<int64_t>& literals,
                                         const std::vector<std::string>& int_vars, size_t budget);
std::vector<StmtCodelet> adapt_constants(const StmtCodelet& c, const std::vector<int64_t>& literals,
                                         const std::vector<std::string>& int_vars, size_t budget);

// Renames the free occurrences of a codelet's references. Occurrences bound
// inside the codelet are left alone. Returns nullopt when a new name would be
// captured by a declaration inside the codelet.
struct Renaming {
  std::map<std::string, std::string> vars;
  std::optional<std::string> function;  // new callee for calls to the donor itself
};
std::optional<ExprPtr> rename_free(const ExprCodelet& c, const Renaming& r);
std::optional<std::vector<StmtPtr>> rename_free(const StmtCodelet& c, const Renaming& r);

// Distinct integer literals of a program, in order of first appearance.
std::vector<int64_t> integer_literals(const Program& p);

}  // namespace splice
