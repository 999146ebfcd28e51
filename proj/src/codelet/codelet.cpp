#include "splice/codelet/codelet.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "overloaded.hpp"
#include "splice/lang/printer.hpp"

namespace splice {

namespace {

// Walks a codelet with its own scope frames. In collect mode it records the
// references that are not declared inside the codelet; in rename mode it also
// rebuilds the tree with those references renamed.
class ScopeWalker {
 public:
  ScopeWalker(const TypeInfo* info, const FunctionSig* self, const Renaming* renaming)
      : info_(info), self_(self), renaming_(renaming) {
    frames_.emplace_back();
  }

  std::vector<FreeRef> free;
  bool captured = false;
  std::map<std::string, Type> fallback_types;  // for variables introduced after type checking

  ExprPtr expr(const ExprPtr& e) {
    return rewrite(e, Rewriter{[this](const ExprPtr& x) { return on_expr(x); }, nullptr});
  }

  StmtPtr stmt(const StmtPtr& s) {
    auto scoped = [&](const StmtPtr& body) {
      frames_.emplace_back();
      auto out = stmt(body);
      frames_.pop_back();
      return out;
    };
    auto rebuild = [&](Stmt::Node n) { return make_stmt(std::move(n), s->span, s->id); };
    return std::visit(overloaded{
                          [&](const ast::Let& x) -> StmtPtr {
                            auto init = expr(x.init);
                            frames_.back().insert(x.name);
                            if (init == x.init) return s;
                            return rebuild(ast::Let{x.name, x.type, init});
                          },
                          [&](const ast::ExprStmt& x) -> StmtPtr {
                            auto v = expr(x.expr);
                            if (v == x.expr) return s;
                            return rebuild(ast::ExprStmt{v});
                          },
                          [&](const ast::If& x) -> StmtPtr {
                            auto c = expr(x.cond);
                            auto t = scoped(x.then_branch);
                            StmtPtr el = x.else_branch ? scoped(x.else_branch) : nullptr;
                            if (c == x.cond && t == x.then_branch && el == x.else_branch) return s;
                            return rebuild(ast::If{c, t, el});
                          },
                          [&](const ast::While& x) -> StmtPtr {
                            auto c = expr(x.cond);
                            auto b = scoped(x.body);
                            if (c == x.cond && b == x.body) return s;
                            return rebuild(ast::While{c, b});
                          },
                          [&](const ast::For& x) -> StmtPtr {
                            frames_.emplace_back();
                            StmtPtr init = x.init ? stmt(x.init) : nullptr;
                            auto c = expr(x.cond);
                            ExprPtr step = x.step ? expr(x.step) : nullptr;
                            auto b = scoped(x.body);
                            frames_.pop_back();
                            if (init == x.init && c == x.cond && step == x.step && b == x.body) return s;
                            return rebuild(ast::For{init, c, step, b});
                          },
                          [&](const ast::Block& x) -> StmtPtr {
                            frames_.emplace_back();
                            std::vector<StmtPtr> out;
                            bool changed = false;
                            for (auto& st : x.stmts) {
                              out.push_back(stmt(st));
                              changed |= out.back() != st;
                            }
                            frames_.pop_back();
                            if (!changed) return s;
                            return rebuild(ast::Block{std::move(out)});
                          },
                          [&](const ast::Return& x) -> StmtPtr {
                            if (!x.value) return s;
                            auto v = expr(x.value);
                            if (v == x.value) return s;
                            return rebuild(ast::Return{v});
                          },
                          [&](const ast::StmtHole&) { return s; },
                      },
                      s->node);
  }

 private:
  bool bound(const std::string& name) const {
    for (auto& f : frames_)
      if (f.count(name)) return true;
    return false;
  }

  void note(FreeRef ref) {
    for (auto& f : free)
      if (f.name == ref.name && f.is_function == ref.is_function) return;
    free.push_back(std::move(ref));
  }

  // Returns a replacement only for renamed leaves; everything else is
  // rebuilt by the rewriter from its children.
  ExprPtr on_expr(const ExprPtr& e) {
    if (auto v = e->as<ast::Var>()) {
      if (bound(v->name)) return nullptr;
      Type t;
      if (info_) {
        auto it = info_->types.find(e.get());
        if (it != info_->types.end()) t = it->second;
        else if (auto fb = fallback_types.find(v->name); fb != fallback_types.end()) t = fb->second;
      }
      note({v->name, t, false, {}});
      if (!renaming_) return nullptr;
      auto r = renaming_->vars.find(v->name);
      if (r == renaming_->vars.end()) return nullptr;
      if (bound(r->second)) captured = true;
      return make_expr(ast::Var{r->second}, e->span, e->id);
    }
    if (auto c = e->as<ast::Call>(); c && self_ && c->callee == self_->name) {
      note({self_->name, self_->ret, true, *self_});
      if (!renaming_ || !renaming_->function) return nullptr;
      std::vector<ExprPtr> args;
      for (auto& a : c->args) args.push_back(expr(a));
      return make_expr(ast::Call{*renaming_->function, std::move(args)}, e->span, e->id);
    }
    return nullptr;
  }

  const TypeInfo* info_;
  const FunctionSig* self_;
  const Renaming* renaming_;
  std::vector<std::set<std::string>> frames_;
};

// Pre-order positions of every statement and expression of a program.
class Numbering {
 public:
  std::unordered_map<const void*, size_t> pos;

  void stmt(const Stmt& s) {
    pos[&s] = next_++;
    std::visit(overloaded{
                   [&](const ast::Let& x) { expr(*x.init); },
                   [&](const ast::ExprStmt& x) { expr(*x.expr); },
                   [&](const ast::If& x) {
                     expr(*x.cond);
                     stmt(*x.then_branch);
                     if (x.else_branch) stmt(*x.else_branch);
                   },
                   [&](const ast::While& x) {
                     expr(*x.cond);
                     stmt(*x.body);
                   },
                   [&](const ast::For& x) {
                     if (x.init) stmt(*x.init);
                     expr(*x.cond);
                     if (x.step) expr(*x.step);
                     stmt(*x.body);
                   },
                   [&](const ast::Block& x) {
                     for (auto& st : x.stmts) stmt(*st);
                   },
                   [&](const ast::Return& x) {
                     if (x.value) expr(*x.value);
                   },
                   [](const ast::StmtHole&) {},
               },
               s.node);
  }

  void expr(const Expr& e) {
    pos[&e] = next_++;
    for_each_child(e, [&](const Expr& c) { expr(c); });
  }

  template <class F>
  static void for_each_child(const Expr& e, F&& f) {
    std::visit(overloaded{
                   [&](const ast::Binary& x) {
                     f(*x.lhs);
                     f(*x.rhs);
                   },
                   [&](const ast::Unary& x) { f(*x.operand); },
                   [&](const ast::Call& x) {
                     for (auto& a : x.args) f(*a);
                   },
                   [&](const ast::Assign& x) {
                     f(*x.target);
                     f(*x.value);
                   },
                   [&](const ast::Index& x) {
                     f(*x.base);
                     for (auto& i : x.indices) f(*i);
                   },
                   [&](const ast::NewArray& x) {
                     for (auto& s : x.sizes) f(*s);
                   },
                   [&](const ast::ArrayLit& x) {
                     for (auto& el : x.elems) f(*el);
                   },
                   [&](const ast::Length& x) { f(*x.base); },
                   [](const auto&) {},
               },
               e.node);
  }

 private:
  size_t next_ = 0;
};

// Calls f(expr_ptr) for every expression of a statement, in pre-order.
template <class F>
void each_expr(const StmtPtr& s, F&& f);

template <class F>
void each_expr(const ExprPtr& e, F&& f) {
  f(e);
  std::visit(overloaded{
                 [&](const ast::Binary& x) {
                   each_expr(x.lhs, f);
                   each_expr(x.rhs, f);
                 },
                 [&](const ast::Unary& x) { each_expr(x.operand, f); },
                 [&](const ast::Call& x) {
                   for (auto& a : x.args) each_expr(a, f);
                 },
                 [&](const ast::Assign& x) {
                   each_expr(x.target, f);
                   each_expr(x.value, f);
                 },
                 [&](const ast::Index& x) {
                   each_expr(x.base, f);
                   for (auto& i : x.indices) each_expr(i, f);
                 },
                 [&](const ast::NewArray& x) {
                   for (auto& s : x.sizes) each_expr(s, f);
                 },
                 [&](const ast::ArrayLit& x) {
                   for (auto& el : x.elems) each_expr(el, f);
                 },
                 [&](const ast::Length& x) { each_expr(x.base, f); },
                 [](const auto&) {},
             },
             e->node);
}

template <class F>
void each_expr(const StmtPtr& s, F&& f) {
  std::visit(overloaded{
                 [&](const ast::Let& x) { each_expr(x.init, f); },
                 [&](const ast::ExprStmt& x) { each_expr(x.expr, f); },
                 [&](const ast::If& x) {
                   each_expr(x.cond, f);
                   each_expr(x.then_branch, f);
                   if (x.else_branch) each_expr(x.else_branch, f);
                 },
                 [&](const ast::While& x) {
                   each_expr(x.cond, f);
                   each_expr(x.body, f);
                 },
                 [&](const ast::For& x) {
                   if (x.init) each_expr(x.init, f);
                   each_expr(x.cond, f);
                   if (x.step) each_expr(x.step, f);
                   each_expr(x.body, f);
                 },
                 [&](const ast::Block& x) {
                   for (auto& st : x.stmts) each_expr(st, f);
                 },
                 [&](const ast::Return& x) {
                   if (x.value) each_expr(x.value, f);
                 },
                 [](const ast::StmtHole&) {},
             },
             s->node);
}

std::string window_text(const std::vector<StmtPtr>& stmts) {
  std::string out;
  for (auto& s : stmts) out += print_stmt(*s);
  return out;
}

struct WindowCollector {
  const Program& donor;
  const TypeInfo& info;
  const FunctionSig& self;
  const Numbering& numbering;
  size_t max_len;
  uint32_t source;
  std::vector<StmtCodelet> out;

  void sequence(const std::vector<StmtPtr>& stmts, int depth) {
    size_t n = stmts.size();
    for (size_t len = 1; len <= std::min(max_len, n); ++len) {
      for (size_t i = 0; i + len <= n; ++i) {
        StmtCodelet c;
        c.stmts.assign(stmts.begin() + static_cast<long>(i), stmts.begin() + static_cast<long>(i + len));
        for (auto& s : c.stmts) {
          c.size += node_count(*s);
          if (auto let = s->as<ast::Let>()) c.declares.push_back({let->name, let->type});
        }
        c.depth = depth;
        c.position = numbering.pos.at(stmts[i].get());
        c.origin = {source, c.stmts.front()->id, c.stmts.back()->id};
        ScopeWalker w(&info, &self, nullptr);
        for (auto& s : c.stmts) w.stmt(s);
        c.free = std::move(w.free);
        c.text = window_text(c.stmts);
        out.push_back(std::move(c));
      }
    }
    for (auto& s : stmts) nested(s, depth + 1);
  }

  // A loop body or branch that is not a block is a one-statement sequence.
  void body(const StmtPtr& s, int depth) {
    if (auto b = s->as<ast::Block>()) sequence(b->stmts, depth);
    else sequence({s}, depth);
  }

  void nested(const StmtPtr& s, int depth) {
    std::visit(overloaded{
                   [&](const ast::If& x) {
                     body(x.then_branch, depth);
                     if (x.else_branch) body(x.else_branch, depth);
                   },
                   [&](const ast::While& x) { body(x.body, depth); },
                   [&](const ast::For& x) { body(x.body, depth); },
                   [&](const ast::Block& x) { sequence(x.stmts, depth); },
                   [](const auto&) {},
               },
               s->node);
  }
};

template <class C>
void sort_by(std::vector<C>& v) {
  std::stable_sort(v.begin(), v.end(), [](const C& a, const C& b) {
    if (a.size != b.size) return a.size < b.size;
    if constexpr (requires { a.depth; }) {
      if (a.depth != b.depth) return a.depth < b.depth;
    }
    return a.position < b.position;
  });
}

const FunctionSig* self_of(const std::vector<FreeRef>& free) {
  for (auto& f : free)
    if (f.is_function) return &f.sig;
  return nullptr;
}

// Integer literal nodes in pre-order.
std::vector<const Expr*> literal_nodes(const std::vector<StmtPtr>& stmts) {
  std::vector<const Expr*> out;
  for (auto& s : stmts)
    each_expr(s, [&](const ExprPtr& e) {
      if (e->is<ast::IntLit>()) out.push_back(e.get());
    });
  return out;
}

std::vector<const Expr*> literal_nodes(const ExprPtr& e) {
  std::vector<const Expr*> out;
  each_expr(e, [&](const ExprPtr& x) {
    if (x->is<ast::IntLit>()) out.push_back(x.get());
  });
  return out;
}

std::vector<ExprPtr> replacements(const std::vector<int64_t>& literals, const std::vector<std::string>& int_vars) {
  std::vector<ExprPtr> out;
  for (auto v : literals) out.push_back(make_expr(ast::IntLit{v}));
  for (auto& n : int_vars) out.push_back(make_expr(ast::Var{n}));
  return out;
}

Rewriter replace_node(const Expr* target, const ExprPtr& with) {
  return Rewriter{[target, with](const ExprPtr& e) { return e.get() == target ? with : nullptr; }, nullptr};
}

}  // namespace

std::vector<ExprCodelet> extract_expr_codelets(const Program& donor, const TypeInfo& info, uint32_t source) {
  Numbering numbering;
  numbering.stmt(*donor.body);
  FunctionSig self = signature_of(donor);
  std::vector<ExprCodelet> out;
  each_expr(donor.body, [&](const ExprPtr& e) {
    ExprCodelet c;
    c.expr = e;
    c.type = info.types.at(e.get());
    c.role = info.roles.at(e.get());
    c.size = node_count(*e);
    c.position = numbering.pos.at(e.get());
    c.origin = {source, e->id, e->id};
    ScopeWalker w(&info, &self, nullptr);
    w.expr(e);
    c.free = std::move(w.free);
    c.text = print_expr(*e);
    out.push_back(std::move(c));
  });
  sort_by(out);
  return out;
}

std::vector<StmtCodelet> extract_stmt_codelets(const Program& donor, const TypeInfo& info, size_t max_len,
                                               uint32_t source) {
  Numbering numbering;
  numbering.stmt(*donor.body);
  FunctionSig self = signature_of(donor);
  WindowCollector wc{donor, info, self, numbering, max_len, source, {}};
  if (max_len > 0) wc.sequence(donor.body->as<ast::Block>()->stmts, 0);
  sort_by(wc.out);
  return std::move(wc.out);
}

std::vector<ExprCodelet> adapt_constants(const ExprCodelet& c, const std::vector<int64_t>& literals,
                                         const std::vector<std::string>& int_vars, size_t budget) {
  std::vector<ExprCodelet> out{c};
  auto repl = replacements(literals, int_vars);
  for (auto* lit : literal_nodes(c.expr)) {
    for (auto& r : repl) {
      if (out.size() >= budget) return out;
      ExprCodelet v = c;
      v.expr = rewrite(c.expr, replace_node(lit, r));
      if (auto var = r->as<ast::Var>(); var && !std::any_of(v.free.begin(), v.free.end(), [&](const FreeRef& f) {
            return !f.is_function && f.name == var->name;
          }))
        v.free.push_back({var->name, Type::integer(), false, {}});
      v.text = print_expr(*v.expr);
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<StmtCodelet> adapt_constants(const StmtCodelet& c, const std::vector<int64_t>& literals,
                                         const std::vector<std::string>& int_vars, size_t budget) {
  std::vector<StmtCodelet> out{c};
  auto repl = replacements(literals, int_vars);
  std::map<std::string, Type> known;
  for (auto& f : c.free)
    if (!f.is_function) known[f.name] = f.type;
  for (auto& n : int_vars) known.emplace(n, Type::integer());
  TypeInfo none;
  for (auto* lit : literal_nodes(c.stmts)) {
    for (auto& r : repl) {
      if (out.size() >= budget) return out;
      StmtCodelet v = c;
      auto rw = replace_node(lit, r);
      for (auto& s : v.stmts) s = rewrite(s, rw);
      // A substituted variable may be captured by a declaration of the window.
      ScopeWalker w(&none, self_of(c.free), nullptr);
      w.fallback_types = known;
      for (auto& s : v.stmts) w.stmt(s);
      v.free = std::move(w.free);
      v.text = window_text(v.stmts);
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::optional<ExprPtr> rename_free(const ExprCodelet& c, const Renaming& r) {
  ScopeWalker w(nullptr, self_of(c.free), &r);
  ExprPtr out = w.expr(c.expr);
  if (w.captured) return std::nullopt;
  return out;
}

std::optional<std::vector<StmtPtr>> rename_free(const StmtCodelet& c, const Renaming& r) {
  ScopeWalker w(nullptr, self_of(c.free), &r);
  std::vector<StmtPtr> out;
  for (auto& s : c.stmts) out.push_back(w.stmt(s));
  if (w.captured) return std::nullopt;
  return out;
}

std::vector<int64_t> integer_literals(const Program& p) {
  std::vector<int64_t> out;
  each_expr(p.body, [&](const ExprPtr& e) {
    if (auto lit = e->as<ast::IntLit>())
      if (std::find(out.begin(), out.end(), lit->value) == out.end()) out.push_back(lit->value);
  });
  return out;
}

}  // namespace splice
