#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"

using namespace splice;
using testing::apis;

namespace {

Program parse(const std::string& text) { return parse_program(text, apis()); }

Draft draft_of(const std::string& text) {
  return parse_draft(text, apis(), [](const std::string& p) { return testing::slurp(testing::drafts_dir() / p); });
}

const ast::Block& body(const Program& p) { return *p.body->as<ast::Block>(); }

size_t count_holes_in_source(const std::string& text) {
  size_t n = 0;
  for (size_t at = text.find("??"); at != std::string::npos; at = text.find("??", at + 2)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse the sieve donor") {
  Program p = parse(testing::kSieveDonor);
  CHECK(p.name == "sieve");
  REQUIRE(p.params.size() == 1);
  CHECK(p.params[0].type == Type::array(Type::boolean(), 1));
  CHECK(p.return_type == Type::unit());
  auto& stmts = body(p).stmts;
  REQUIRE(stmts.size() == 4);
  auto first = stmts[0]->as<ast::ExprStmt>();
  REQUIRE(first);
  CHECK(first->expr->is<ast::Assign>());
  auto second = stmts[1]->as<ast::Let>();
  REQUIRE(second);
  CHECK(second->name == "l");
  CHECK(stmts[2]->is<ast::For>());
  CHECK(stmts[3]->is<ast::For>());
}

TEST_CASE("minimal program") {
  Program p = parse("int f() { return 0; }");
  CHECK(p.name == "f");
  CHECK(p.params.empty());
  REQUIRE(body(p).stmts.size() == 1);
  auto ret = body(p).stmts[0]->as<ast::Return>();
  REQUIRE(ret);
  REQUIRE(ret->value->as<ast::IntLit>());
  CHECK(ret->value->as<ast::IntLit>()->value == 0);
}

TEST_CASE("syntax error points at the offending token") {
  try {
    parse("int f() { return }");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.where().line == 1);
    CHECK(e.where().column == 18);
  }
}

TEST_CASE("type errors in hole-free code") {
  CHECK_THROWS_AS(parse("int f() { return true; }"), TypeError);
  CHECK_THROWS_AS(parse("int f(int x) { if (x) { return 1; } return 0; }"), TypeError);
  CHECK_THROWS_AS(parse("Widget f() { return null; }"), Error);
  CHECK_NOTHROW(parse("Mat f(String s) { return imread(s); }"));
}

TEST_CASE("every node gets a distinct id") {
  Program p = parse(testing::kSieveDonor);
  std::vector<NodeId> ids;
  Rewriter walker{[&](const ExprPtr& e) -> ExprPtr {
                    ids.push_back(e->id);
                    return nullptr;
                  },
                  [&](const StmtPtr& s) -> StmtPtr {
                    ids.push_back(s->id);
                    return nullptr;
                  }};
  rewrite(p.body, walker);
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  CHECK(ids.size() == node_count(*p.body));
}

TEST_CASE("sieve draft") {
  Draft d = draft_of(testing::kSieveDraft);
  CHECK(d.expr_holes.size() == 2);
  CHECK(d.stmt_holes.size() == 1);
  CHECK(d.comment.find("sieve") != std::string::npos);
  CHECK(d.comment.find("eratosthenes") != std::string::npos);
  CHECK(d.comment.find("primality") != std::string::npos);
  auto* tests = std::get_if<TestsRequirement>(&d.requirement);
  REQUIRE(tests);
  CHECK(tests->marker.has_value());
  auto& stmts = tests->block->as<ast::Block>()->stmts;
  REQUIRE(stmts.size() == 1);
  auto ret = stmts[0]->as<ast::Return>();
  REQUIRE(ret);
  size_t conjuncts = 1;
  for (const Expr* e = ret->value.get(); e->is<ast::Binary>() && e->as<ast::Binary>()->op == BinOp::And;
       e = e->as<ast::Binary>()->lhs.get())
    ++conjuncts;
  CHECK(conjuncts == 3);
}

TEST_CASE("hole-free draft") {
  Draft d = draft_of("/* TEST:\n return f() == 1; */\nint f() { return 1; }");
  CHECK(d.expr_holes.empty());
  CHECK(d.stmt_holes.empty());
  CHECK(d.holes.empty());
}

TEST_CASE("automaton-checked draft") {
  Draft d = testing::load_draft("face");
  auto* a = std::get_if<AutomatonRequirement>(&d.requirement);
  REQUIRE(a);
  CHECK(a->path == "face.aut");
  CHECK(a->automaton.accepting.size() == 1);
  CHECK(d.expr_holes.size() == 1);
  CHECK(d.stmt_holes.size() == 1);
}

TEST_CASE("draft requirement errors") {
  CHECK_THROWS_AS(draft_of("/* COMMENT: nothing to check */\nint f() { return ??; }"), MissingRequirement);
  CHECK_THROWS_AS(draft_of("int f() { return ??; }"), MissingRequirement);
  CHECK_THROWS_AS(draft_of("/* TEST:\n __solution__\n __solution__\n return true; */\nint f() { return ??; }"),
                  DuplicateSolutionMarker);
}

TEST_CASE("hole types come from context") {
  Draft d = draft_of(testing::kSieveDraft);
  CHECK(infer_hole_type(d, d.expr_holes[0]) == Type::integer());
  CHECK(infer_hole_type(d, d.expr_holes[1]) == Type::boolean());
  CHECK_THROWS_AS(infer_hole_type(d, d.stmt_holes[0]), NotAnExprHole);
  CHECK_THROWS_AS(infer_hole_type(d, 99), NotAnExprHole);

  Draft guard = draft_of("/* TEST:\n return f(1) == 1; */\nint f(int x) { if (??) { return 1; } return 0; }");
  CHECK(infer_hole_type(guard, guard.expr_holes[0]) == Type::boolean());
  Draft index = draft_of("/* TEST:\n return f() == 0; */\nint f() { int[] x = new int[3]; return x[??]; }");
  CHECK(infer_hole_type(index, index.expr_holes[0]) == Type::integer());
  Draft arg = draft_of("/* TEST:\n return f() == 0; */\nint f() { return parseInt(??); }");
  CHECK(infer_hole_type(arg, arg.expr_holes[0]) == Type::string());
  Draft arith = draft_of("/* TEST:\n return f(1) == 1; */\nint f(int x) { return x * ??; }");
  CHECK(infer_hole_type(arith, arith.expr_holes[0]) == Type::integer());
}

TEST_CASE("a hole with no forcing context is rejected") {
  CHECK_THROWS_AS(draft_of("/* TEST:\n return f(); */\nboolean f() { return ?? == ??; }"), AmbiguousType);
}

TEST_CASE("hole typing ignores the other holes") {
  Draft a = draft_of("/* TEST:\n return f(1) == 1; */\nint f(int x) { int y = ??; return y + ??; }");
  Draft b = draft_of("/* TEST:\n return f(1) == 1; */\nint f(int x) { int y = 3; return y + ??; }");
  CHECK(infer_hole_type(a, a.expr_holes[1]) == infer_hole_type(b, b.expr_holes[0]));
  CHECK(a.holes.at(a.expr_holes[1]).role == b.holes.at(b.expr_holes[0]).role);
}

TEST_CASE("pretty printing round-trips the completed sieve") {
  Program p = parse(testing::kSieveCompleted);
  Program q = parse(pretty_print(p));
  CHECK(structurally_equal(p, q));
  CHECK(pretty_print(q) == pretty_print(p));
}

TEST_CASE("a statement hole prints as ??;") {
  Draft d = draft_of("/* TEST:\n return f() == 0; */\nint f() { int x = 0; ??; return x; }");
  std::string text = pretty_print(d.program);
  CHECK(count_holes_in_source(text) == 1);
  CHECK(text.find("??;") != std::string::npos);
}

TEST_CASE("every bundled corpus function round-trips") {
  auto& idx = testing::bundled_index();
  REQUIRE(idx.entries.size() >= 50);
  for (auto& e : idx.entries) {
    Program again = parse(pretty_print(e.program));
    CHECK_MESSAGE(structurally_equal(e.program, again), e.program.name);
  }
}

TEST_CASE("random programs round-trip") {
  for (uint32_t seed = 0; seed < 300; ++seed) {
    testing::ProgramGen gen(seed);
    std::string text = gen.program();
    Program p = parse(text);
    CHECK_MESSAGE(structurally_equal(p, parse(pretty_print(p))), text);
  }
}

TEST_CASE("desugaring a for loop") {
  Program p = parse("int f(int n) { int s = 0; for (int i = 2; i <= n; i++) s = s + i; return s; }");
  Program d = desugar(p);
  Program want = parse("int f(int n) { int s = 0; { int i = 2; while (i <= n) { s = s + i; i++; } } return s; }");
  CHECK(structurally_equal(d, want));
}

TEST_CASE("desugaring without loops is the identity") {
  Program p = parse("int f(int n) { if (n > 0) { return n; } return -n; }");
  CHECK(structurally_equal(desugar(p), p));
}

TEST_CASE("desugaring keeps holes and their ids") {
  Draft d = draft_of(testing::kSieveDraft);
  Program s = desugar(d.program);
  std::vector<HoleId> e, st;
  collect_holes(*s.body, e, st);
  CHECK(e == d.expr_holes);
  CHECK(st == d.stmt_holes);
}

TEST_CASE("desugared sieve marks the same table") {
  Program loops = parse(testing::kSieveDonor);
  Program whiles = desugar(loops);
  std::optional<size_t> marker;
  // the oracle fingerprint: which of 0..29 end up marked
  std::string check = "boolean[] p = new boolean[30]; sieve(p); return ";
  for (int n = 2; n < 30; ++n) {
    if (n > 2) check += " && ";
    check += "p[" + std::to_string(n) + "] == " + (testing::is_prime(n) ? "true" : "false");
  }
  check += ";";
  TestsRequirement t{make_stmt(parse_test_block(check, marker)), marker};
  for (const Program* prog : {&loops, &whiles}) {
    EvalOutcome out = eval_tests(*prog, t, apis(), {});
    REQUIRE(out.ok());
    CHECK(out.value.i == 1);
  }
}

TEST_CASE("desugaring is idempotent and preserves evaluation") {
  for (uint32_t seed = 0; seed < 200; ++seed) {
    testing::ProgramGen gen(seed);
    std::string text = gen.program();
    Program p = parse(text);
    Program once = desugar(p);
    CHECK(structurally_equal(desugar(once), once));
    std::vector<Value> args{Value::integer(seed % 7), Value::integer(3)};
    EvalOutcome a = eval(p, args, apis(), {});
    EvalOutcome b = eval(once, args, apis(), {});
    // generated programs only index in bounds and never divide
    REQUIRE_MESSAGE(a.ok(), text);
    REQUIRE(b.ok());
    CHECK(a.value.i == b.value.i);
  }
}

TEST_CASE("hole census matches the ?? tokens of every bundled draft") {
  for (auto& entry : std::filesystem::directory_iterator(testing::drafts_dir())) {
    if (entry.path().extension() != ".spl") continue;
    std::string text = testing::slurp(entry.path());
    Draft d = testing::load_draft(entry.path().stem().string());
    CHECK_MESSAGE(d.expr_holes.size() + d.stmt_holes.size() == count_holes_in_source(text), entry.path());
  }
}
