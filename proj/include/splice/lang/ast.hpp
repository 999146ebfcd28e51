#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splice/errors.hpp"
#include "splice/lang/type.hpp"

namespace splice {

using NodeId = uint32_t;
using HoleId = uint32_t;

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not, Inc, Dec };

const char* to_string(BinOp op);
const char* to_string(UnOp op);

namespace ast {

struct Var {
  std::string name;
};
struct IntLit {
  int64_t value;
};
struct BoolLit {
  bool value;
};
struct StrLit {
  std::string value;
};
struct Binary {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Unary {
  UnOp op;
  ExprPtr operand;
};
struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};
struct Assign {
  ExprPtr target;
  ExprPtr value;
};
struct Index {
  ExprPtr base;
  std::vector<ExprPtr> indices;
};
// `new T[a]` or `new T[a][b]`; `element` is the scalar/opaque element type.
struct NewArray {
  Type element;
  std::vector<ExprPtr> sizes;
};
// `{e1, e2, ...}`; nested literals build 2-d arrays.
struct ArrayLit {
  std::vector<ExprPtr> elems;
};
// `a.length` on a 1-d array.
struct Length {
  ExprPtr base;
};
struct ExprHole {
  HoleId hole;
};

struct Let {
  std::string name;
  Type type;
  ExprPtr init;
};
struct ExprStmt {
  ExprPtr expr;
};
struct If {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // may be null
};
struct While {
  ExprPtr cond;
  StmtPtr body;
};
// Surface sugar; `init` and `step` may be null.
struct For {
  StmtPtr init;
  ExprPtr cond;
  ExprPtr step;
  StmtPtr body;
};
struct Block {
  std::vector<StmtPtr> stmts;
};
struct Return {
  ExprPtr value;  // may be null
};
struct StmtHole {
  HoleId hole;
};

}  // namespace ast

struct Expr {
  using Node = std::variant<ast::Var, ast::IntLit, ast::BoolLit, ast::StrLit, ast::Binary, ast::Unary,
                            ast::Call, ast::Assign, ast::Index, ast::NewArray, ast::ArrayLit,
                            ast::Length, ast::ExprHole>;
  Node node;
  Span span;
  NodeId id = 0;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

struct Stmt {
  using Node = std::variant<ast::Let, ast::ExprStmt, ast::If, ast::While, ast::For, ast::Block,
                            ast::Return, ast::StmtHole>;
  Node node;
  Span span;
  NodeId id = 0;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

inline ExprPtr make_expr(Expr::Node node, Span span = {}, NodeId id = 0) {
  return std::make_shared<const Expr>(Expr{std::move(node), span, id});
}
inline StmtPtr make_stmt(Stmt::Node node, Span span = {}, NodeId id = 0) {
  return std::make_shared<const Stmt>(Stmt{std::move(node), span, id});
}

struct Param {
  std::string name;
  Type type;
  bool operator==(const Param&) const = default;
};

struct Program {
  std::string name;
  std::vector<Param> params;
  Type return_type;
  StmtPtr body;  // always a Block
  Span span;
};

// Parent-derived syntactic position of an expression.
enum class RoleKind {
  AssignRhs,
  AssignTarget,
  LetInit,
  IfGuard,
  WhileGuard,
  CallArg,
  IndexPos,
  IndexBase,
  BinopOperand,
  UnopOperand,
  ReturnValue,
  ExprStmt,
  ArraySize,
  ArrayElem,
  LengthBase,
};

struct Role {
  RoleKind kind = RoleKind::ExprStmt;
  int position = 0;  // CallArg: argument index; BinopOperand: 0 = lhs, 1 = rhs

  bool operator==(const Role&) const = default;
  std::string str() const;
};

// Structural equality ignoring spans and node ids.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Program& a, const Program& b);

// Number of AST nodes in a subtree.
size_t node_count(const Expr& e);
size_t node_count(const Stmt& s);

// Rebuilds a tree with some nodes replaced. A callback that returns non-null
// supplies the replacement and its subtree is not visited; subtrees without
// replacements are shared with the input.
struct Rewriter {
  std::function<ExprPtr(const ExprPtr&)> on_expr;
  std::function<StmtPtr(const StmtPtr&)> on_stmt;
};
ExprPtr rewrite(const ExprPtr& e, const Rewriter& r);
StmtPtr rewrite(const StmtPtr& s, const Rewriter& r);

// Hole ids in source order.
void collect_holes(const Stmt& s, std::vector<HoleId>& expr_holes, std::vector<HoleId>& stmt_holes);
bool has_holes(const Program& p);

}  // namespace splice
