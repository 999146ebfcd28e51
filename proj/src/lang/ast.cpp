#include "splice/lang/ast.hpp"

#include "overloaded.hpp"

namespace splice {

namespace {

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool eq(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

template <class P>
bool eq(const std::vector<P>& a, const std::vector<P>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

}  // namespace

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

const char* to_string(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "!";
    case UnOp::Inc: return "++";
    case UnOp::Dec: return "--";
  }
  return "?";
}

std::string Role::str() const {
  switch (kind) {
    case RoleKind::AssignRhs: return "AssignRhs";
    case RoleKind::AssignTarget: return "AssignTarget";
    case RoleKind::LetInit: return "LetInit";
    case RoleKind::IfGuard: return "IfGuard";
    case RoleKind::WhileGuard: return "WhileGuard";
    case RoleKind::CallArg: return "CallArg(" + std::to_string(position) + ")";
    case RoleKind::IndexPos: return "IndexPos";
    case RoleKind::IndexBase: return "IndexBase";
    case RoleKind::BinopOperand: return position == 0 ? "BinopOperand(lhs)" : "BinopOperand(rhs)";
    case RoleKind::UnopOperand: return "UnopOperand";
    case RoleKind::ReturnValue: return "ReturnValue";
    case RoleKind::ExprStmt: return "ExprStmt";
    case RoleKind::ArraySize: return "ArraySize";
    case RoleKind::ArrayElem: return "ArrayElem";
    case RoleKind::LengthBase: return "LengthBase";
  }
  return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ast::Var& x) { return x.name == b.as<ast::Var>()->name; },
          [&](const ast::IntLit& x) { return x.value == b.as<ast::IntLit>()->value; },
          [&](const ast::BoolLit& x) { return x.value == b.as<ast::BoolLit>()->value; },
          [&](const ast::StrLit& x) { return x.value == b.as<ast::StrLit>()->value; },
          [&](const ast::Binary& x) {
            auto& y = *b.as<ast::Binary>();
            return x.op == y.op && eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
          },
          [&](const ast::Unary& x) {
            auto& y = *b.as<ast::Unary>();
            return x.op == y.op && eq(x.operand, y.operand);
          },
          [&](const ast::Call& x) {
            auto& y = *b.as<ast::Call>();
            return x.callee == y.callee && eq(x.args, y.args);
          },
          [&](const ast::Assign& x) {
            auto& y = *b.as<ast::Assign>();
            return eq(x.target, y.target) && eq(x.value, y.value);
          },
          [&](const ast::Index& x) {
            auto& y = *b.as<ast::Index>();
            return eq(x.base, y.base) && eq(x.indices, y.indices);
          },
          [&](const ast::NewArray& x) {
            auto& y = *b.as<ast::NewArray>();
            return x.element == y.element && eq(x.sizes, y.sizes);
          },
          [&](const ast::ArrayLit& x) { return eq(x.elems, b.as<ast::ArrayLit>()->elems); },
          [&](const ast::Length& x) { return eq(x.base, b.as<ast::Length>()->base); },
          [&](const ast::ExprHole& x) { return x.hole == b.as<ast::ExprHole>()->hole; },
      },
      a.node);
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ast::Let& x) {
            auto& y = *b.as<ast::Let>();
            return x.name == y.name && x.type == y.type && eq(x.init, y.init);
          },
          [&](const ast::ExprStmt& x) { return eq(x.expr, b.as<ast::ExprStmt>()->expr); },
          [&](const ast::If& x) {
            auto& y = *b.as<ast::If>();
            return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) &&
                   eq(x.else_branch, y.else_branch);
          },
          [&](const ast::While& x) {
            auto& y = *b.as<ast::While>();
            return eq(x.cond, y.cond) && eq(x.body, y.body);
          },
          [&](const ast::For& x) {
            auto& y = *b.as<ast::For>();
            return eq(x.init, y.init) && eq(x.cond, y.cond) && eq(x.step, y.step) &&
                   eq(x.body, y.body);
          },
          [&](const ast::Block& x) { return eq(x.stmts, b.as<ast::Block>()->stmts); },
          [&](const ast::Return& x) { return eq(x.value, b.as<ast::Return>()->value); },
          [&](const ast::StmtHole& x) { return x.hole == b.as<ast::StmtHole>()->hole; },
      },
      a.node);
}

bool structurally_equal(const Program& a, const Program& b) {
  return a.name == b.name && a.params == b.params && a.return_type == b.return_type &&
         eq(a.body, b.body);
}

size_t node_count(const Expr& e) {
  auto sum = [](const std::vector<ExprPtr>& v) {
    size_t n = 0;
    for (auto& x : v) n += node_count(*x);
    return n;
  };
  return 1 + std::visit(overloaded{
                            [](const ast::Binary& x) { return node_count(*x.lhs) + node_count(*x.rhs); },
                            [](const ast::Unary& x) { return node_count(*x.operand); },
                            [&](const ast::Call& x) { return sum(x.args); },
                            [](const ast::Assign& x) { return node_count(*x.target) + node_count(*x.value); },
                            [&](const ast::Index& x) { return node_count(*x.base) + sum(x.indices); },
                            [&](const ast::NewArray& x) { return sum(x.sizes); },
                            [&](const ast::ArrayLit& x) { return sum(x.elems); },
                            [](const ast::Length& x) { return node_count(*x.base); },
                            [](const auto&) { return size_t{0}; },
                        },
                        e.node);
}

size_t node_count(const Stmt& s) {
  auto opt = [](const auto& p) -> size_t { return p ? node_count(*p) : 0; };
  return 1 + std::visit(overloaded{
                            [&](const ast::Let& x) { return node_count(*x.init); },
                            [&](const ast::ExprStmt& x) { return node_count(*x.expr); },
                            [&](const ast::If& x) {
                              return node_count(*x.cond) + node_count(*x.then_branch) + opt(x.else_branch);
                            },
                            [&](const ast::While& x) { return node_count(*x.cond) + node_count(*x.body); },
                            [&](const ast::For& x) {
                              return opt(x.init) + node_count(*x.cond) + opt(x.step) + node_count(*x.body);
                            },
                            [&](const ast::Block& x) {
                              size_t n = 0;
                              for (auto& st : x.stmts) n += node_count(*st);
                              return n;
                            },
                            [&](const ast::Return& x) { return opt(x.value); },
                            [](const ast::StmtHole&) { return size_t{0}; },
                        },
                        s.node);
}

namespace {

void collect_expr_holes(const Expr& e, std::vector<HoleId>& out) {
  std::visit(overloaded{
                 [&](const ast::ExprHole& x) { out.push_back(x.hole); },
                 [&](const ast::Binary& x) {
                   collect_expr_holes(*x.lhs, out);
                   collect_expr_holes(*x.rhs, out);
                 },
                 [&](const ast::Unary& x) { collect_expr_holes(*x.operand, out); },
                 [&](const ast::Call& x) {
                   for (auto& a : x.args) collect_expr_holes(*a, out);
                 },
                 [&](const ast::Assign& x) {
                   collect_expr_holes(*x.target, out);
                   collect_expr_holes(*x.value, out);
                 },
                 [&](const ast::Index& x) {
                   collect_expr_holes(*x.base, out);
                   for (auto& a : x.indices) collect_expr_holes(*a, out);
                 },
                 [&](const ast::NewArray& x) {
                   for (auto& a : x.sizes) collect_expr_holes(*a, out);
                 },
                 [&](const ast::ArrayLit& x) {
                   for (auto& a : x.elems) collect_expr_holes(*a, out);
                 },
                 [&](const ast::Length& x) { collect_expr_holes(*x.base, out); },
                 [](const auto&) {},
             },
             e.node);
}

}  // namespace

void collect_holes(const Stmt& s, std::vector<HoleId>& expr_holes, std::vector<HoleId>& stmt_holes) {
  auto ex = [&](const ExprPtr& e) {
    if (e) collect_expr_holes(*e, expr_holes);
  };
  auto st = [&](const StmtPtr& p) {
    if (p) collect_holes(*p, expr_holes, stmt_holes);
  };
  std::visit(overloaded{
                 [&](const ast::Let& x) { ex(x.init); },
                 [&](const ast::ExprStmt& x) { ex(x.expr); },
                 [&](const ast::If& x) {
                   ex(x.cond);
                   st(x.then_branch);
                   st(x.else_branch);
                 },
                 [&](const ast::While& x) {
                   ex(x.cond);
                   st(x.body);
                 },
                 [&](const ast::For& x) {
                   st(x.init);
                   ex(x.cond);
                   ex(x.step);
                   st(x.body);
                 },
                 [&](const ast::Block& x) {
                   for (auto& p : x.stmts) st(p);
                 },
                 [&](const ast::Return& x) { ex(x.value); },
                 [&](const ast::StmtHole& x) { stmt_holes.push_back(x.hole); },
             },
             s.node);
}

bool has_holes(const Program& p) {
  std::vector<HoleId> e, s;
  collect_holes(*p.body, e, s);
  return !e.empty() || !s.empty();
}

}  // namespace splice

namespace splice {

namespace {

template <class P>
bool rewrite_all(const std::vector<P>& in, std::vector<P>& out, const Rewriter& r) {
  bool changed = false;
  out.reserve(in.size());
  for (auto& x : in) {
    out.push_back(rewrite(x, r));
    changed |= out.back() != x;
  }
  return changed;
}

}  // namespace

ExprPtr rewrite(const ExprPtr& e, const Rewriter& r) {
  if (!e) return e;
  if (r.on_expr)
    if (auto repl = r.on_expr(e)) return repl;
  auto rebuild = [&](Expr::Node n) { return make_expr(std::move(n), e->span, e->id); };
  return std::visit(overloaded{
                        [&](const ast::Binary& x) -> ExprPtr {
                          auto l = rewrite(x.lhs, r), rr = rewrite(x.rhs, r);
                          if (l == x.lhs && rr == x.rhs) return e;
                          return rebuild(ast::Binary{x.op, l, rr});
                        },
                        [&](const ast::Unary& x) -> ExprPtr {
                          auto o = rewrite(x.operand, r);
                          if (o == x.operand) return e;
                          return rebuild(ast::Unary{x.op, o});
                        },
                        [&](const ast::Call& x) -> ExprPtr {
                          std::vector<ExprPtr> args;
                          if (!rewrite_all(x.args, args, r)) return e;
                          return rebuild(ast::Call{x.callee, std::move(args)});
                        },
                        [&](const ast::Assign& x) -> ExprPtr {
                          auto t = rewrite(x.target, r), v = rewrite(x.value, r);
                          if (t == x.target && v == x.value) return e;
                          return rebuild(ast::Assign{t, v});
                        },
                        [&](const ast::Index& x) -> ExprPtr {
                          auto b = rewrite(x.base, r);
                          std::vector<ExprPtr> idx;
                          if (!rewrite_all(x.indices, idx, r) && b == x.base) return e;
                          return rebuild(ast::Index{b, std::move(idx)});
                        },
                        [&](const ast::NewArray& x) -> ExprPtr {
                          std::vector<ExprPtr> sizes;
                          if (!rewrite_all(x.sizes, sizes, r)) return e;
                          return rebuild(ast::NewArray{x.element, std::move(sizes)});
                        },
                        [&](const ast::ArrayLit& x) -> ExprPtr {
                          std::vector<ExprPtr> elems;
                          if (!rewrite_all(x.elems, elems, r)) return e;
                          return rebuild(ast::ArrayLit{std::move(elems)});
                        },
                        [&](const ast::Length& x) -> ExprPtr {
                          auto b = rewrite(x.base, r);
                          if (b == x.base) return e;
                          return rebuild(ast::Length{b});
                        },
                        [&](const auto&) { return e; },
                    },
                    e->node);
}

StmtPtr rewrite(const StmtPtr& s, const Rewriter& r) {
  if (!s) return s;
  if (r.on_stmt)
    if (auto repl = r.on_stmt(s)) return repl;
  auto rebuild = [&](Stmt::Node n) { return make_stmt(std::move(n), s->span, s->id); };
  return std::visit(overloaded{
                        [&](const ast::Let& x) -> StmtPtr {
                          auto i = rewrite(x.init, r);
                          if (i == x.init) return s;
                          return rebuild(ast::Let{x.name, x.type, i});
                        },
                        [&](const ast::ExprStmt& x) -> StmtPtr {
                          auto v = rewrite(x.expr, r);
                          if (v == x.expr) return s;
                          return rebuild(ast::ExprStmt{v});
                        },
                        [&](const ast::If& x) -> StmtPtr {
                          auto c = rewrite(x.cond, r);
                          auto t = rewrite(x.then_branch, r), el = rewrite(x.else_branch, r);
                          if (c == x.cond && t == x.then_branch && el == x.else_branch) return s;
                          return rebuild(ast::If{c, t, el});
                        },
                        [&](const ast::While& x) -> StmtPtr {
                          auto c = rewrite(x.cond, r);
                          auto b = rewrite(x.body, r);
                          if (c == x.cond && b == x.body) return s;
                          return rebuild(ast::While{c, b});
                        },
                        [&](const ast::For& x) -> StmtPtr {
                          auto i = rewrite(x.init, r);
                          auto c = rewrite(x.cond, r), st = rewrite(x.step, r);
                          auto b = rewrite(x.body, r);
                          if (i == x.init && c == x.cond && st == x.step && b == x.body) return s;
                          return rebuild(ast::For{i, c, st, b});
                        },
                        [&](const ast::Block& x) -> StmtPtr {
                          std::vector<StmtPtr> stmts;
                          if (!rewrite_all(x.stmts, stmts, r)) return s;
                          return rebuild(ast::Block{std::move(stmts)});
                        },
                        [&](const ast::Return& x) -> StmtPtr {
                          auto v = rewrite(x.value, r);
                          if (v == x.value) return s;
                          return rebuild(ast::Return{v});
                        },
                        [&](const ast::StmtHole&) { return s; },
                    },
                    s->node);
}

}  // namespace splice
