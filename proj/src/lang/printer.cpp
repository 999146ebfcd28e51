#include "splice/lang/printer.hpp"

#include "overloaded.hpp"

namespace splice {

namespace {

int precedence(const Expr& e) {
  if (auto b = e.as<ast::Binary>()) {
    switch (b->op) {
      case BinOp::Or: return 2;
      case BinOp::And: return 3;
      case BinOp::Eq:
      case BinOp::Ne: return 4;
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge: return 5;
      case BinOp::Add:
      case BinOp::Sub: return 6;
      default: return 7;
    }
  }
  if (e.is<ast::Assign>()) return 1;
  if (auto u = e.as<ast::Unary>()) return (u->op == UnOp::Inc || u->op == UnOp::Dec) ? 9 : 8;
  if (e.is<ast::Index>() || e.is<ast::Length>()) return 9;
  return 10;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print(const Expr& e, int min_prec, std::string& out);

void print_list(const std::vector<ExprPtr>& xs, std::string& out) {
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    print(*xs[i], 0, out);
  }
}

void print(const Expr& e, int min_prec, std::string& out) {
  int prec = precedence(e);
  bool paren = prec < min_prec;
  if (paren) out += '(';
  std::visit(overloaded{
                 [&](const ast::Var& x) { out += x.name; },
                 [&](const ast::IntLit& x) { out += std::to_string(x.value); },
                 [&](const ast::BoolLit& x) { out += x.value ? "true" : "false"; },
                 [&](const ast::StrLit& x) { out += quote(x.value); },
                 [&](const ast::Binary& x) {
                   print(*x.lhs, prec, out);
                   out += ' ';
                   out += to_string(x.op);
                   out += ' ';
                   print(*x.rhs, prec + 1, out);
                 },
                 [&](const ast::Unary& x) {
                   if (x.op == UnOp::Inc || x.op == UnOp::Dec) {
                     print(*x.operand, 9, out);
                     out += to_string(x.op);
                     return;
                   }
                   out += to_string(x.op);
                   std::string inner;
                   print(*x.operand, 8, inner);
                   if (!inner.empty() && (inner[0] == '-' || inner[0] == '!') && x.op == UnOp::Neg) out += ' ';
                   out += inner;
                 },
                 [&](const ast::Call& x) {
                   out += x.callee;
                   out += '(';
                   print_list(x.args, out);
                   out += ')';
                 },
                 [&](const ast::Assign& x) {
                   print(*x.target, 9, out);
                   out += " = ";
                   print(*x.value, 1, out);
                 },
                 [&](const ast::Index& x) {
                   // A nested Index base needs parentheses or it would re-parse merged.
                   print(*x.base, x.base->is<ast::Index>() ? 10 : 9, out);
                   for (auto& i : x.indices) {
                     out += '[';
                     print(*i, 0, out);
                     out += ']';
                   }
                 },
                 [&](const ast::NewArray& x) {
                   out += "new ";
                   out += x.element.str();
                   for (auto& s : x.sizes) {
                     out += '[';
                     print(*s, 0, out);
                     out += ']';
                   }
                 },
                 [&](const ast::ArrayLit& x) {
                   out += '{';
                   print_list(x.elems, out);
                   out += '}';
                 },
                 [&](const ast::Length& x) {
                   print(*x.base, 9, out);
                   out += ".length";
                 },
                 [&](const ast::ExprHole&) { out += "??"; },
             },
             e.node);
  if (paren) out += ')';
}

void indent_to(int n, std::string& out) { out.append(static_cast<size_t>(n) * 2, ' '); }

void print_stmt_into(const Stmt& s, int indent, std::string& out);

// Body of if/while/for: blocks stay on the header line, others go on their own.
void print_body(const Stmt& body, int indent, std::string& out) {
  if (auto b = body.as<ast::Block>()) {
    out += " {\n";
    for (auto& st : b->stmts) print_stmt_into(*st, indent + 1, out);
    indent_to(indent, out);
    out += "}";
  } else {
    out += '\n';
    print_stmt_into(body, indent + 1, out);
    out.pop_back();  // the caller terminates the line
  }
}

std::string for_init(const Stmt& s) {
  if (auto let = s.as<ast::Let>()) return let->type.str() + " " + let->name + " = " + print_expr(*let->init);
  if (auto es = s.as<ast::ExprStmt>()) return print_expr(*es->expr);
  if (auto b = s.as<ast::Block>()) {
    std::string out;
    for (size_t i = 0; i < b->stmts.size(); ++i) {
      auto let = b->stmts[i]->as<ast::Let>();
      if (i == 0) out += let->type.str() + " ";
      else out += ", ";
      out += let->name + " = " + print_expr(*let->init);
    }
    return out;
  }
  return "";
}

void print_stmt_into(const Stmt& s, int indent, std::string& out) {
  indent_to(indent, out);
  std::visit(overloaded{
                 [&](const ast::Let& x) {
                   out += x.type.str() + " " + x.name + " = " + print_expr(*x.init) + ";";
                 },
                 [&](const ast::ExprStmt& x) { out += print_expr(*x.expr) + ";"; },
                 [&](const ast::If& x) {
                   out += "if (" + print_expr(*x.cond) + ")";
                   print_body(*x.then_branch, indent, out);
                   if (x.else_branch) {
                     out += x.then_branch->is<ast::Block>() ? " else" : "\n" + std::string(indent * 2, ' ') + "else";
                     if (x.else_branch->is<ast::If>()) {
                       out += ' ';
                       std::string nested;
                       print_stmt_into(*x.else_branch, indent, nested);
                       out += nested.substr(static_cast<size_t>(indent) * 2);
                       out.pop_back();
                     } else {
                       print_body(*x.else_branch, indent, out);
                     }
                   }
                 },
                 [&](const ast::While& x) {
                   out += "while (" + print_expr(*x.cond) + ")";
                   print_body(*x.body, indent, out);
                 },
                 [&](const ast::For& x) {
                   out += "for (";
                   if (x.init) out += for_init(*x.init);
                   out += "; " + print_expr(*x.cond) + ";";
                   if (x.step) out += " " + print_expr(*x.step);
                   out += ")";
                   print_body(*x.body, indent, out);
                 },
                 [&](const ast::Block& x) {
                   out += "{\n";
                   for (auto& st : x.stmts) print_stmt_into(*st, indent + 1, out);
                   indent_to(indent, out);
                   out += "}";
                 },
                 [&](const ast::Return& x) {
                   out += x.value ? "return " + print_expr(*x.value) + ";" : "return;";
                 },
                 [&](const ast::StmtHole&) { out += "??;"; },
             },
             s.node);
  out += '\n';
}

NodeId max_id(const Expr& e);
NodeId max_id(const Stmt& s);

NodeId max_ids(const std::vector<ExprPtr>& v) {
  NodeId m = 0;
  for (auto& x : v) m = std::max(m, max_id(*x));
  return m;
}

NodeId max_id(const Expr& e) {
  NodeId m = e.id;
  std::visit(overloaded{
                 [&](const ast::Binary& x) { m = std::max({m, max_id(*x.lhs), max_id(*x.rhs)}); },
                 [&](const ast::Unary& x) { m = std::max(m, max_id(*x.operand)); },
                 [&](const ast::Call& x) { m = std::max(m, max_ids(x.args)); },
                 [&](const ast::Assign& x) { m = std::max({m, max_id(*x.target), max_id(*x.value)}); },
                 [&](const ast::Index& x) { m = std::max({m, max_id(*x.base), max_ids(x.indices)}); },
                 [&](const ast::NewArray& x) { m = std::max(m, max_ids(x.sizes)); },
                 [&](const ast::ArrayLit& x) { m = std::max(m, max_ids(x.elems)); },
                 [&](const ast::Length& x) { m = std::max(m, max_id(*x.base)); },
                 [](const auto&) {},
             },
             e.node);
  return m;
}

NodeId max_id(const Stmt& s) {
  NodeId m = s.id;
  auto ex = [&](const ExprPtr& e) {
    if (e) m = std::max(m, max_id(*e));
  };
  auto st = [&](const StmtPtr& p) {
    if (p) m = std::max(m, max_id(*p));
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
                 [](const ast::StmtHole&) {},
             },
             s.node);
  return m;
}

class Desugarer {
 public:
  explicit Desugarer(NodeId next) : next_(next) {}

  StmtPtr run(const StmtPtr& s) {
    if (!s) return s;
    return std::visit(
        overloaded{
            [&](const ast::If& x) -> StmtPtr {
              auto t = run(x.then_branch);
              auto e = run(x.else_branch);
              if (t == x.then_branch && e == x.else_branch) return s;
              return make_stmt(ast::If{x.cond, t, e}, s->span, s->id);
            },
            [&](const ast::While& x) -> StmtPtr {
              auto b = run(x.body);
              if (b == x.body) return s;
              return make_stmt(ast::While{x.cond, b}, s->span, s->id);
            },
            [&](const ast::Block& x) -> StmtPtr {
              std::vector<StmtPtr> out;
              bool changed = false;
              for (auto& st : x.stmts) {
                out.push_back(run(st));
                changed |= out.back() != st;
              }
              if (!changed) return s;
              return make_stmt(ast::Block{std::move(out)}, s->span, s->id);
            },
            [&](const ast::For& x) -> StmtPtr {
              std::vector<StmtPtr> outer;
              if (x.init) {
                if (auto b = x.init->as<ast::Block>()) outer.insert(outer.end(), b->stmts.begin(), b->stmts.end());
                else outer.push_back(x.init);
              }
              std::vector<StmtPtr> inner;
              StmtPtr body = run(x.body);
              if (auto b = body->as<ast::Block>()) inner = b->stmts;
              else inner.push_back(body);
              if (x.step) inner.push_back(make_stmt(ast::ExprStmt{x.step}, x.step->span, next_++));
              StmtPtr loop_body = make_stmt(ast::Block{std::move(inner)}, x.body->span, next_++);
              outer.push_back(make_stmt(ast::While{x.cond, loop_body}, s->span, next_++));
              return make_stmt(ast::Block{std::move(outer)}, s->span, s->id);
            },
            [&](const auto&) -> StmtPtr { return s; },
        },
        s->node);
  }

 private:
  NodeId next_;
};

}  // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

std::string print_stmt(const Stmt& s, int indent) {
  std::string out;
  print_stmt_into(s, indent, out);
  return out;
}

std::string pretty_print(const Program& p) {
  std::string out = p.return_type.str() + " " + p.name + "(";
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) out += ", ";
    out += p.params[i].type.str() + " " + p.params[i].name;
  }
  out += ") {\n";
  for (auto& st : p.body->as<ast::Block>()->stmts) print_stmt_into(*st, 1, out);
  out += "}\n";
  return out;
}

StmtPtr desugar(const StmtPtr& s) { return Desugarer(max_id(*s) + 1).run(s); }

Program desugar(const Program& p) {
  Program out = p;
  out.body = desugar(p.body);
  return out;
}

}  // namespace splice
