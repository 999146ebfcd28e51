#include "splice/interp/interpreter.hpp"

#include <limits>

#include "overloaded.hpp"

namespace splice {

namespace {

// Lowered form: variables resolved to frame slots and calls to their targets.
enum class XOp : uint8_t {
  Const,
  Local,
  Binary,
  And,
  Or,
  Neg,
  Not,
  IncLocal,
  IncIndex,
  SetLocal,
  SetIndex,
  Index,
  CallUser,
  CallApi,
  NewArray,
  ArrayLit,
  Length,
};

struct XNode {
  XOp op = XOp::Const;
  BinOp bop = BinOp::Add;
  int slot = -1;  // Local/IncLocal/SetLocal slot, CallUser target
  int delta = 0;
  Value constant;  // Const value, NewArray element default
  const ApiEntry* api = nullptr;
  std::vector<XNode> kids;
};

enum class SOp : uint8_t { Let, Expr, If, While, For, Block, Return };

struct SNode {
  SOp op = SOp::Block;
  int slot = -1;
  bool flag = false;  // If: has else; For: has step; Return: has value
  std::vector<XNode> exprs;
  std::vector<SNode> kids;
};

struct Function {
  int params = 0;
  int slots = 0;
  SNode body;
};

Value default_value(const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return Value::integer(0);
    case TypeKind::Bool: return Value::boolean(false);
    case TypeKind::Str: return Value::null_of(ValueKind::Str);
    default: return Value::null_of(ValueKind::Opaque);
  }
}

class Lowerer {
 public:
  Lowerer(const ApiRegistry& apis, const std::vector<std::string>& user_fns) : apis_(apis), user_fns_(user_fns) {}

  Function lower(const std::vector<Param>& params, const Stmt& body) {
    scopes_.assign(1, {});
    next_ = 0;
    for (auto& p : params) declare(p.name);
    Function f;
    f.params = static_cast<int>(params.size());
    f.body.op = SOp::Block;
    for (auto& s : body.as<ast::Block>()->stmts) f.body.kids.push_back(stmt(*s));
    f.slots = next_;
    return f;
  }

 private:
  int declare(const std::string& name) {
    scopes_.back().emplace_back(name, next_);
    return next_++;
  }

  int resolve(const std::string& name) const {
    for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s)
      for (auto b = s->rbegin(); b != s->rend(); ++b)
        if (b->first == name) return b->second;
    throw Error("interpreter: unresolved variable " + name);
  }

  SNode scoped(const Stmt& s) {
    scopes_.emplace_back();
    SNode n = stmt(s);
    scopes_.pop_back();
    return n;
  }

  SNode stmt(const Stmt& s) {
    SNode n;
    std::visit(overloaded{
                   [&](const ast::Let& x) {
                     n.op = SOp::Let;
                     n.exprs.push_back(expr(*x.init));
                     n.slot = declare(x.name);
                   },
                   [&](const ast::ExprStmt& x) {
                     n.op = SOp::Expr;
                     n.exprs.push_back(expr(*x.expr));
                   },
                   [&](const ast::If& x) {
                     n.op = SOp::If;
                     n.exprs.push_back(expr(*x.cond));
                     n.kids.push_back(scoped(*x.then_branch));
                     if (x.else_branch) {
                       n.flag = true;
                       n.kids.push_back(scoped(*x.else_branch));
                     }
                   },
                   [&](const ast::While& x) {
                     n.op = SOp::While;
                     n.exprs.push_back(expr(*x.cond));
                     n.kids.push_back(scoped(*x.body));
                   },
                   [&](const ast::For& x) {
                     n.op = SOp::For;
                     scopes_.emplace_back();
                     SNode init;
                     if (x.init) {
                       if (auto b = x.init->as<ast::Block>()) {
                         for (auto& st : b->stmts) init.kids.push_back(stmt(*st));
                       } else {
                         init.kids.push_back(stmt(*x.init));
                       }
                     }
                     n.kids.push_back(std::move(init));
                     n.exprs.push_back(expr(*x.cond));
                     if (x.step) {
                       n.flag = true;
                       n.exprs.push_back(expr(*x.step));
                     }
                     n.kids.push_back(scoped(*x.body));
                     scopes_.pop_back();
                   },
                   [&](const ast::Block& x) {
                     scopes_.emplace_back();
                     for (auto& st : x.stmts) n.kids.push_back(stmt(*st));
                     scopes_.pop_back();
                   },
                   [&](const ast::Return& x) {
                     n.op = SOp::Return;
                     if (x.value) {
                       n.flag = true;
                       n.exprs.push_back(expr(*x.value));
                     }
                   },
                   [&](const ast::StmtHole&) { throw Error("interpreter: program has a hole"); },
               },
               s.node);
    return n;
  }

  XNode expr(const Expr& e) {
    XNode n;
    std::visit(overloaded{
                   [&](const ast::Var& x) {
                     n.op = XOp::Local;
                     n.slot = resolve(x.name);
                   },
                   [&](const ast::IntLit& x) { n.constant = Value::integer(x.value); },
                   [&](const ast::BoolLit& x) { n.constant = Value::boolean(x.value); },
                   [&](const ast::StrLit& x) { n.constant = Value::string(x.value); },
                   [&](const ast::Binary& x) {
                     n.op = x.op == BinOp::And ? XOp::And : x.op == BinOp::Or ? XOp::Or : XOp::Binary;
                     n.bop = x.op;
                     n.kids.push_back(expr(*x.lhs));
                     n.kids.push_back(expr(*x.rhs));
                   },
                   [&](const ast::Unary& x) {
                     if (x.op == UnOp::Neg || x.op == UnOp::Not) {
                       n.op = x.op == UnOp::Neg ? XOp::Neg : XOp::Not;
                       n.kids.push_back(expr(*x.operand));
                       return;
                     }
                     n.delta = x.op == UnOp::Inc ? 1 : -1;
                     if (auto v = x.operand->as<ast::Var>()) {
                       n.op = XOp::IncLocal;
                       n.slot = resolve(v->name);
                     } else {
                       n.op = XOp::IncIndex;
                       index_parts(*x.operand->as<ast::Index>(), n);
                     }
                   },
                   [&](const ast::Call& x) {
                     for (size_t i = 0; i < user_fns_.size(); ++i)
                       if (user_fns_[i] == x.callee) {
                         n.op = XOp::CallUser;
                         n.slot = static_cast<int>(i);
                       }
                     if (n.op != XOp::CallUser) {
                       n.op = XOp::CallApi;
                       n.api = apis_.find(x.callee);
                       if (!n.api) throw Error("interpreter: unknown function " + x.callee);
                     }
                     for (auto& a : x.args) n.kids.push_back(expr(*a));
                   },
                   [&](const ast::Assign& x) {
                     if (auto v = x.target->as<ast::Var>()) {
                       n.op = XOp::SetLocal;
                       n.slot = resolve(v->name);
                     } else {
                       n.op = XOp::SetIndex;
                       index_parts(*x.target->as<ast::Index>(), n);
                     }
                     n.kids.push_back(expr(*x.value));
                   },
                   [&](const ast::Index& x) {
                     n.op = XOp::Index;
                     index_parts(x, n);
                   },
                   [&](const ast::NewArray& x) {
                     n.op = XOp::NewArray;
                     n.constant = default_value(x.element);
                     for (auto& s : x.sizes) n.kids.push_back(expr(*s));
                   },
                   [&](const ast::ArrayLit& x) {
                     n.op = XOp::ArrayLit;
                     for (auto& el : x.elems) n.kids.push_back(expr(*el));
                   },
                   [&](const ast::Length& x) {
                     n.op = XOp::Length;
                     n.kids.push_back(expr(*x.base));
                   },
                   [&](const ast::ExprHole&) { throw Error("interpreter: program has a hole"); },
               },
               e.node);
    return n;
  }

  void index_parts(const ast::Index& x, XNode& n) {
    n.kids.push_back(expr(*x.base));
    for (auto& i : x.indices) n.kids.push_back(expr(*i));
    n.slot = static_cast<int>(x.indices.size());
  }

  const ApiRegistry& apis_;
  const std::vector<std::string>& user_fns_;
  std::vector<std::vector<std::pair<std::string, int>>> scopes_;
  int next_ = 0;
};

struct TimedOut {};

constexpr uint64_t kMaxCells = uint64_t{1} << 22;
constexpr int kMaxDepth = 1000;

int64_t wrap(int64_t v) { return static_cast<int32_t>(static_cast<uint32_t>(v)); }

class Machine {
 public:
  Machine(const std::vector<Function>& fns, const VirtualFS& fs, const Limits& limits, std::vector<ApiEvent>& trace)
      : fns_(fns),
        ctx_{fs, {}},
        fuel_(limits.step_fuel),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(limits.wall_clock)),
        trace_(trace) {}

  Value call(int fn, std::vector<Value> args) {
    if (++depth_ > kMaxDepth) throw RuntimeError(RuntimeErrorKind::StackOverflow, "recursion too deep");
    const Function& f = fns_[static_cast<size_t>(fn)];
    std::vector<Value> frame(static_cast<size_t>(f.slots));
    for (size_t i = 0; i < args.size(); ++i) frame[i] = std::move(args[i]);
    std::vector<Value>* saved = frame_;
    frame_ = &frame;
    Value result;
    if (exec(f.body) == Flow::Return) result = std::move(ret_);
    frame_ = saved;
    --depth_;
    return result;
  }

  uint64_t fuel() const { return fuel_; }
  std::map<std::string, std::string>& written() { return ctx_.written; }

 private:
  enum class Flow { Next, Return };

  void tick() {
    if (fuel_ == 0) throw TimedOut{};
    --fuel_;
    if ((fuel_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) throw TimedOut{};
  }

  void charge_cells(int64_t n) {
    cells_ += static_cast<uint64_t>(n);
    if (cells_ > kMaxCells) throw RuntimeError(RuntimeErrorKind::OutOfMemory, "array allocation limit exceeded");
  }

  Flow exec(const SNode& s) {
    tick();
    switch (s.op) {
      case SOp::Let:
        (*frame_)[static_cast<size_t>(s.slot)] = eval(s.exprs[0]);
        return Flow::Next;
      case SOp::Expr:
        eval(s.exprs[0]);
        return Flow::Next;
      case SOp::If:
        if (eval(s.exprs[0]).i) return exec(s.kids[0]);
        if (s.flag) return exec(s.kids[1]);
        return Flow::Next;
      case SOp::While:
        while (eval(s.exprs[0]).i)
          if (exec(s.kids[0]) == Flow::Return) return Flow::Return;
        return Flow::Next;
      case SOp::For:
        if (exec(s.kids[0]) == Flow::Return) return Flow::Return;
        while (eval(s.exprs[0]).i) {
          if (exec(s.kids[1]) == Flow::Return) return Flow::Return;
          if (s.flag) eval(s.exprs[1]);
        }
        return Flow::Next;
      case SOp::Block:
        for (auto& k : s.kids)
          if (exec(k) == Flow::Return) return Flow::Return;
        return Flow::Next;
      case SOp::Return:
        ret_ = s.flag ? eval(s.exprs[0]) : Value::unit();
        return Flow::Return;
    }
    return Flow::Next;
  }

  // Evaluates base[i1]...[in] (Java order: each access is checked before the
  // next index is evaluated) and returns the addressed cell. `holder` keeps
  // the containing array alive.
  Value* locate(const XNode& x, Value& holder) {
    holder = eval(x.kids[0]);
    Value* cell = nullptr;
    for (int k = 1; k <= x.slot; ++k) {
      int64_t i = eval(x.kids[static_cast<size_t>(k)]).i;
      if (cell) holder = *cell;
      if (holder.is_null()) throw RuntimeError(RuntimeErrorKind::NullRead, "indexing a null array");
      auto& elems = holder.array().elems;
      if (i < 0 || i >= static_cast<int64_t>(elems.size()))
        throw RuntimeError(RuntimeErrorKind::IndexOutOfBounds,
                           "index " + std::to_string(i) + " out of bounds for length " + std::to_string(elems.size()));
      cell = &elems[static_cast<size_t>(i)];
    }
    return cell;
  }

  static bool equal(const Value& a, const Value& b) {
    if (a.kind == ValueKind::Str) {
      if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
      return a.str() == b.str();
    }
    if (a.kind == ValueKind::Int || a.kind == ValueKind::Bool) return a.i == b.i;
    return a.ref == b.ref;
  }

  static Value binary(BinOp op, const Value& a, const Value& b) {
    switch (op) {
      case BinOp::Add: return Value::integer(wrap(a.i + b.i));
      case BinOp::Sub: return Value::integer(wrap(a.i - b.i));
      case BinOp::Mul: return Value::integer(wrap(a.i * b.i));
      case BinOp::Div:
        if (b.i == 0) throw RuntimeError(RuntimeErrorKind::DivByZero, "division by zero");
        return Value::integer(wrap(a.i / b.i));
      case BinOp::Mod:
        if (b.i == 0) throw RuntimeError(RuntimeErrorKind::DivByZero, "remainder by zero");
        return Value::integer(wrap(a.i % b.i));
      case BinOp::Eq: return Value::boolean(equal(a, b));
      case BinOp::Ne: return Value::boolean(!equal(a, b));
      case BinOp::Lt: return Value::boolean(a.i < b.i);
      case BinOp::Le: return Value::boolean(a.i <= b.i);
      case BinOp::Gt: return Value::boolean(a.i > b.i);
      case BinOp::Ge: return Value::boolean(a.i >= b.i);
      default: return Value::unit();
    }
  }

  Value new_array(const XNode& x, size_t dim) {
    int64_t n = eval(x.kids[dim]).i;
    if (n < 0) throw RuntimeError(RuntimeErrorKind::IndexOutOfBounds, "negative array size " + std::to_string(n));
    charge_cells(n);
    std::vector<Value> elems;
    if (dim + 1 < x.kids.size()) {
      int64_t m = eval(x.kids[dim + 1]).i;
      if (m < 0) throw RuntimeError(RuntimeErrorKind::IndexOutOfBounds, "negative array size " + std::to_string(m));
      charge_cells(n * m);
      elems.reserve(static_cast<size_t>(n));
      for (int64_t r = 0; r < n; ++r)
        elems.push_back(make_array(std::vector<Value>(static_cast<size_t>(m), x.constant), 1));
      return make_array(std::move(elems), 2);
    }
    return make_array(std::vector<Value>(static_cast<size_t>(n), x.constant), 1);
  }

  Value eval(const XNode& x) {
    tick();
    switch (x.op) {
      case XOp::Const: return x.constant;
      case XOp::Local: return (*frame_)[static_cast<size_t>(x.slot)];
      case XOp::Binary: {
        Value a = eval(x.kids[0]);
        Value b = eval(x.kids[1]);
        return binary(x.bop, a, b);
      }
      case XOp::And: return Value::boolean(eval(x.kids[0]).i && eval(x.kids[1]).i);
      case XOp::Or: return Value::boolean(eval(x.kids[0]).i || eval(x.kids[1]).i);
      case XOp::Neg: return Value::integer(wrap(-eval(x.kids[0]).i));
      case XOp::Not: return Value::boolean(!eval(x.kids[0]).i);
      case XOp::IncLocal: {
        Value& v = (*frame_)[static_cast<size_t>(x.slot)];
        v.i = wrap(v.i + x.delta);
        return v;
      }
      case XOp::IncIndex: {
        Value holder;
        Value* cell = locate(x, holder);
        cell->i = wrap(cell->i + x.delta);
        return *cell;
      }
      case XOp::SetLocal: {
        Value v = eval(x.kids[0]);
        (*frame_)[static_cast<size_t>(x.slot)] = v;
        return v;
      }
      case XOp::SetIndex: {
        Value holder;
        Value* cell = locate(x, holder);
        Value v = eval(x.kids.back());
        *cell = v;
        return v;
      }
      case XOp::Index: {
        Value holder;
        return *locate(x, holder);
      }
      case XOp::CallUser: {
        std::vector<Value> args;
        args.reserve(x.kids.size());
        for (auto& k : x.kids) args.push_back(eval(k));
        return call(x.slot, std::move(args));
      }
      case XOp::CallApi: {
        std::vector<Value> args;
        args.reserve(x.kids.size());
        for (auto& k : x.kids) args.push_back(eval(k));
        ApiEvent ev{x.api->sig.name, x.api->sig.params, std::nullopt, trace_.size()};
        if (!ev.arg_types.empty() && ev.arg_types[0].kind == TypeKind::Opaque) ev.receiver = ev.arg_types[0].name;
        trace_.push_back(std::move(ev));
        Value r = x.api->behavior(args, ctx_);
        if (r.kind == ValueKind::Array) charge_cells(static_cast<int64_t>(r.array().elems.size()));
        return r;
      }
      case XOp::NewArray: return new_array(x, 0);
      case XOp::ArrayLit: {
        std::vector<Value> elems;
        elems.reserve(x.kids.size());
        for (auto& k : x.kids) elems.push_back(eval(k));
        charge_cells(static_cast<int64_t>(elems.size()));
        int dims = !elems.empty() && elems[0].kind == ValueKind::Array ? 2 : 1;
        return make_array(std::move(elems), dims);
      }
      case XOp::Length: {
        Value a = eval(x.kids[0]);
        if (a.is_null()) throw RuntimeError(RuntimeErrorKind::NullRead, "length of a null array");
        return Value::integer(static_cast<int64_t>(a.array().elems.size()));
      }
    }
    return Value::unit();
  }

  const std::vector<Function>& fns_;
  ApiContext ctx_;
  uint64_t fuel_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<ApiEvent>& trace_;
  std::vector<Value>* frame_ = nullptr;
  Value ret_;
  uint64_t cells_ = 0;
  int depth_ = 0;
};

EvalOutcome run(const std::vector<Function>& fns, int entry, std::vector<Value> args, const VirtualFS& fs,
                const Limits& limits) {
  EvalOutcome out;
  Machine m(fns, fs, limits, out.trace);
  try {
    out.value = m.call(entry, std::move(args));
  } catch (const TimedOut&) {
    out.status = EvalStatus::Timeout;
    out.message = "timeout";
  } catch (const RuntimeError& e) {
    out.status = EvalStatus::Failed;
    out.error = e.kind();
    out.message = e.what();
  } catch (const std::bad_alloc&) {
    out.status = EvalStatus::Failed;
    out.error = RuntimeErrorKind::OutOfMemory;
    out.message = "out of memory";
  }
  out.steps = limits.step_fuel - m.fuel();
  out.written = std::move(m.written());
  return out;
}

}  // namespace

EvalOutcome eval(const Program& p, const std::vector<Value>& args, const ApiRegistry& apis, const VirtualFS& fs,
                 const Limits& limits) {
  std::vector<std::string> names{p.name};
  Lowerer lower(apis, names);
  std::vector<Function> fns{lower.lower(p.params, *p.body)};
  std::vector<Value> copies;
  for (auto& a : args) copies.push_back(deep_copy(a));
  return run(fns, 0, std::move(copies), fs, limits);
}

EvalOutcome eval_tests(const Program& candidate, const TestsRequirement& tests, const ApiRegistry& apis,
                       const VirtualFS& fs, const Limits& limits) {
  std::vector<std::string> names{candidate.name};
  Lowerer lower(apis, names);
  std::vector<Function> fns{lower.lower(candidate.params, *candidate.body)};
  StmtPtr block = expand_solution(tests, candidate);
  fns.push_back(lower.lower({}, *block));
  return run(fns, 1, {}, fs, limits);
}

bool run_tests(const Program& candidate, const TestsRequirement& tests, const ApiRegistry& apis, const VirtualFS& fs,
               const Limits& limits) {
  EvalOutcome r = eval_tests(candidate, tests, apis, fs, limits);
  return r.ok() && r.value.kind == ValueKind::Bool && r.value.i;
}

bool satisfies(const Program& candidate, const Requirement& req, const ApiRegistry& apis, const VirtualFS& fs,
               const Limits& limits, uint64_t* steps) {
  EvalOutcome r = std::visit(overloaded{
                                 [&](const TestsRequirement& t) { return eval_tests(candidate, t, apis, fs, limits); },
                                 [&](const AutomatonRequirement&) { return eval(candidate, {}, apis, fs, limits); },
                             },
                             req);
  if (steps) *steps = r.steps;
  if (!r.ok()) return false;
  if (auto a = std::get_if<AutomatonRequirement>(&req)) return check_automaton(r.trace, a->automaton);
  return r.value.kind == ValueKind::Bool && r.value.i;
}

}  // namespace splice
