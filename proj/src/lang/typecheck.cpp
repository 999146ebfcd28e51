#include "splice/lang/typecheck.hpp"

#include <optional>

#include "overloaded.hpp"

namespace splice {

FunctionSig signature_of(const Program& p) {
  FunctionSig sig{p.name, {}, p.return_type};
  for (auto& param : p.params) sig.params.push_back(param.type);
  return sig;
}

namespace {

// Can control fall off the end of `s`? Holes are assumed not to.
bool completes_normally(const Stmt& s) {
  return std::visit(overloaded{
                        [](const ast::Return&) { return false; },
                        [](const ast::StmtHole&) { return false; },
                        [](const ast::Block& b) {
                          for (auto& st : b.stmts)
                            if (!completes_normally(*st)) return false;
                          return true;
                        },
                        [](const ast::If& x) {
                          if (!x.else_branch) return true;
                          return completes_normally(*x.then_branch) || completes_normally(*x.else_branch);
                        },
                        [](const ast::While& x) {
                          auto lit = x.cond->as<ast::BoolLit>();
                          return !(lit && lit->value);
                        },
                        [](const ast::For& x) {
                          auto lit = x.cond->as<ast::BoolLit>();
                          return !(lit && lit->value);
                        },
                        [](const auto&) { return true; },
                    },
                    s.node);
}

class Checker {
 public:
  Checker(const SignatureTable& apis, std::vector<FunctionSig> extra, Type ret)
      : apis_(apis), extra_(std::move(extra)), ret_(std::move(ret)) {}

  TypeInfo run_function(const Program& p) {
    frames_.emplace_back();
    for (auto& param : p.params) {
      check_declared_type(param.type, p.span);
      declare(param.name, param.type, p.span);
    }
    check_function_return(p.return_type, p.span);
    // The body block shares the parameters' scope.
    for (auto& st : p.body->as<ast::Block>()->stmts) stmt(*st);
    if (ret_.kind != TypeKind::Unit && completes_normally(*p.body))
      throw TypeError(p.span, ret_.str(), "no return", "function " + p.name + " may end without returning a value");
    return std::move(info_);
  }

  TypeInfo run_body(const ast::Block& body, Span where) {
    frames_.emplace_back();
    for (auto& st : body.stmts) stmt(*st);
    for (auto& st : body.stmts)
      if (!completes_normally(*st)) return std::move(info_);
    if (ret_.kind != TypeKind::Unit) throw TypeError(where, ret_.str(), "no return", "test block must return a value");
    return std::move(info_);
  }

 private:
  void check_function_return(const Type& t, Span where) {
    if (t.kind == TypeKind::Unit) return;
    check_declared_type(t, where);
  }

  void check_declared_type(const Type& t, Span where) {
    if (t.kind == TypeKind::Unit) throw TypeError(where, "a value type", "void");
    bool opaque = t.kind == TypeKind::Opaque || (t.is_array() && t.elem == TypeKind::Opaque);
    if (opaque && !apis_.has_opaque_type(t.name))
      throw TypeError(where, "a registered type", t.name, "unknown type " + t.name);
  }

  void declare(const std::string& name, const Type& t, Span where) {
    for (auto& b : frames_.back())
      if (b.name == name) throw TypeError(where, "a fresh name", name, "redeclaration of " + name);
    frames_.back().push_back({name, t});
  }

  const Binding* lookup(const std::string& name) const {
    for (auto f = frames_.rbegin(); f != frames_.rend(); ++f)
      for (auto b = f->rbegin(); b != f->rend(); ++b)
        if (b->name == name) return &*b;
    return nullptr;
  }

  std::vector<Binding> visible() const {
    std::vector<Binding> out;
    for (size_t i = 0; i < frames_.size(); ++i) {
      for (auto& b : frames_[i]) {
        bool shadowed = false;
        for (size_t j = i + 1; j < frames_.size() && !shadowed; ++j)
          for (auto& c : frames_[j]) shadowed |= c.name == b.name;
        if (!shadowed) out.push_back(b);
      }
    }
    return out;
  }

  const FunctionSig* find_function(const std::string& name) const {
    for (auto& f : extra_)
      if (f.name == name) return &f;
    return apis_.find_function(name);
  }

  void scoped(const Stmt& s) {
    frames_.emplace_back();
    stmt(s);
    frames_.pop_back();
  }

  void stmt(const Stmt& s) {
    std::visit(overloaded{
                   [&](const ast::Let& x) {
                     check_declared_type(x.type, s.span);
                     expr(*x.init, x.type, {RoleKind::LetInit});
                     declare(x.name, x.type, s.span);
                   },
                   [&](const ast::ExprStmt& x) { expr(*x.expr, std::nullopt, {RoleKind::ExprStmt}); },
                   [&](const ast::If& x) {
                     expr(*x.cond, Type::boolean(), {RoleKind::IfGuard});
                     scoped(*x.then_branch);
                     if (x.else_branch) scoped(*x.else_branch);
                   },
                   [&](const ast::While& x) {
                     expr(*x.cond, Type::boolean(), {RoleKind::WhileGuard});
                     scoped(*x.body);
                   },
                   [&](const ast::For& x) {
                     frames_.emplace_back();
                     if (x.init) {
                       if (auto b = x.init->as<ast::Block>()) {
                         for (auto& st : b->stmts) stmt(*st);
                       } else {
                         stmt(*x.init);
                       }
                     }
                     expr(*x.cond, Type::boolean(), {RoleKind::WhileGuard});
                     if (x.step) expr(*x.step, std::nullopt, {RoleKind::ExprStmt});
                     scoped(*x.body);
                     frames_.pop_back();
                   },
                   [&](const ast::Block& x) {
                     frames_.emplace_back();
                     for (auto& st : x.stmts) stmt(*st);
                     frames_.pop_back();
                   },
                   [&](const ast::Return& x) {
                     if (!x.value) {
                       if (ret_.kind != TypeKind::Unit) throw TypeError(s.span, ret_.str(), "void");
                       return;
                     }
                     if (ret_.kind == TypeKind::Unit)
                       throw TypeError(s.span, "void", "a value", "void function returns a value");
                     expr(*x.value, ret_, {RoleKind::ReturnValue});
                   },
                   [&](const ast::StmtHole& x) {
                     HoleInfo h;
                     h.id = x.hole;
                     h.is_expr = false;
                     h.scope = visible();
                     info_.holes[x.hole] = std::move(h);
                   },
               },
               s.node);
  }

  static bool is_hole(const Expr& e) { return e.is<ast::ExprHole>(); }

  Type expect(const Expr& e, const Type& got, const std::optional<Type>& want) {
    if (want && *want != got) throw TypeError(e.span, want->str(), got.str());
    return got;
  }

  Type expr(const Expr& e, const std::optional<Type>& want, Role role) {
    info_.roles[&e] = role;
    Type t = synth(e, want, role);
    info_.types[&e] = t;
    return t;
  }

  Type synth(const Expr& e, const std::optional<Type>& want, Role role) {
    return std::visit(
        overloaded{
            [&](const ast::Var& x) -> Type {
              const Binding* b = lookup(x.name);
              if (!b) throw TypeError(e.span, "a declared variable", x.name, "undefined variable " + x.name);
              return expect(e, b->type, want);
            },
            [&](const ast::IntLit&) { return expect(e, Type::integer(), want); },
            [&](const ast::BoolLit&) { return expect(e, Type::boolean(), want); },
            [&](const ast::StrLit&) { return expect(e, Type::string(), want); },
            [&](const ast::ExprHole& x) -> Type {
              if (!want) throw AmbiguousType(e.span);
              HoleInfo h;
              h.id = x.hole;
              h.is_expr = true;
              h.type = *want;
              h.role = role;
              h.scope = visible();
              info_.holes[x.hole] = std::move(h);
              return *want;
            },
            [&](const ast::Binary& x) -> Type {
              Role l{RoleKind::BinopOperand, 0}, r{RoleKind::BinopOperand, 1};
              switch (x.op) {
                case BinOp::Add:
                case BinOp::Sub:
                case BinOp::Mul:
                case BinOp::Div:
                case BinOp::Mod:
                  expr(*x.lhs, Type::integer(), l);
                  expr(*x.rhs, Type::integer(), r);
                  return expect(e, Type::integer(), want);
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge:
                  expr(*x.lhs, Type::integer(), l);
                  expr(*x.rhs, Type::integer(), r);
                  return expect(e, Type::boolean(), want);
                case BinOp::And:
                case BinOp::Or:
                  expr(*x.lhs, Type::boolean(), l);
                  expr(*x.rhs, Type::boolean(), r);
                  return expect(e, Type::boolean(), want);
                case BinOp::Eq:
                case BinOp::Ne: {
                  Type operand;
                  if (is_hole(*x.lhs)) {
                    operand = expr(*x.rhs, std::nullopt, r);
                    expr(*x.lhs, operand, l);
                  } else {
                    operand = expr(*x.lhs, std::nullopt, l);
                    expr(*x.rhs, operand, r);
                  }
                  if (!operand.is_scalar())
                    throw TypeError(e.span, "int, boolean or String", operand.str(), "cannot compare " + operand.str());
                  return expect(e, Type::boolean(), want);
                }
              }
              return Type::unit();
            },
            [&](const ast::Unary& x) -> Type {
              Role r{RoleKind::UnopOperand};
              if (x.op == UnOp::Not) {
                expr(*x.operand, Type::boolean(), r);
                return expect(e, Type::boolean(), want);
              }
              expr(*x.operand, Type::integer(), r);
              return expect(e, Type::integer(), want);
            },
            [&](const ast::Call& x) -> Type {
              const FunctionSig* sig = find_function(x.callee);
              if (!sig) throw TypeError(e.span, "a known function", x.callee, "unknown function " + x.callee);
              if (sig->params.size() != x.args.size())
                throw TypeError(e.span, std::to_string(sig->params.size()) + " arguments",
                                std::to_string(x.args.size()), "wrong number of arguments to " + x.callee);
              for (size_t i = 0; i < x.args.size(); ++i)
                expr(*x.args[i], sig->params[i], {RoleKind::CallArg, static_cast<int>(i)});
              return expect(e, sig->ret, want);
            },
            [&](const ast::Assign& x) -> Type {
              if (is_hole(*x.target)) throw AmbiguousType(x.target->span);
              Type t = expr(*x.target, std::nullopt, {RoleKind::AssignTarget});
              expr(*x.value, t, {RoleKind::AssignRhs});
              return expect(e, t, want);
            },
            [&](const ast::Index& x) -> Type {
              if (is_hole(*x.base)) throw AmbiguousType(x.base->span);
              Type t = expr(*x.base, std::nullopt, {RoleKind::IndexBase});
              if (!t.is_array()) throw TypeError(x.base->span, "an array", t.str());
              if (x.indices.size() > static_cast<size_t>(t.dims))
                throw TypeError(e.span, t.str(), "too many indices", "too many indices for " + t.str());
              for (auto& i : x.indices) {
                expr(*i, Type::integer(), {RoleKind::IndexPos});
                t = t.indexed();
              }
              return expect(e, t, want);
            },
            [&](const ast::NewArray& x) -> Type {
              Type elem = x.element;
              if (!elem.is_scalar()) check_declared_type(elem, e.span);
              for (auto& s : x.sizes) expr(*s, Type::integer(), {RoleKind::ArraySize});
              return expect(e, Type::array(elem, static_cast<int>(x.sizes.size())), want);
            },
            [&](const ast::ArrayLit& x) -> Type {
              Role r{RoleKind::ArrayElem};
              if (want) {
                if (!want->is_array()) throw TypeError(e.span, want->str(), "an array literal");
                for (auto& el : x.elems) expr(*el, want->indexed(), r);
                return *want;
              }
              if (x.elems.empty() || is_hole(*x.elems[0])) throw AmbiguousType(e.span);
              Type first = expr(*x.elems[0], std::nullopt, r);
              for (size_t i = 1; i < x.elems.size(); ++i) expr(*x.elems[i], first, r);
              if (first.is_array()) {
                if (first.dims != 1) throw TypeError(e.span, "at most 2 dimensions", "3");
                return Type{TypeKind::Array, first.elem, 2, first.name};
              }
              if (first.kind == TypeKind::Unit) throw TypeError(e.span, "a value", "void");
              return Type::array(first, 1);
            },
            [&](const ast::Length& x) -> Type {
              if (is_hole(*x.base)) throw AmbiguousType(x.base->span);
              Type t = expr(*x.base, std::nullopt, {RoleKind::LengthBase});
              if (!t.is_array()) throw TypeError(x.base->span, "an array", t.str());
              return expect(e, Type::integer(), want);
            },
        },
        e.node);
  }

  const SignatureTable& apis_;
  std::vector<FunctionSig> extra_;
  Type ret_;
  std::vector<std::vector<Binding>> frames_;
  TypeInfo info_;
};

}  // namespace

TypeInfo typecheck(const Program& p, const SignatureTable& apis) {
  Checker c(apis, {signature_of(p)}, p.return_type);
  return c.run_function(p);
}

TypeInfo typecheck_body(const ast::Block& body, const Type& ret, const SignatureTable& apis,
                        const std::vector<FunctionSig>& extra) {
  Checker c(apis, extra, ret);
  return c.run_body(body, body.stmts.empty() ? Span{} : body.stmts.front()->span);
}

Program parse_program(std::string_view text, const SignatureTable& apis) {
  Program p = parse_program_syntax(text);
  typecheck(p, apis);
  return p;
}

}  // namespace splice
