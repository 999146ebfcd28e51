#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "overloaded.hpp"

using namespace splice;
using testing::apis;

namespace {

struct Extracted {
  Program program;
  TypeInfo info;
  std::vector<ExprCodelet> exprs;
  std::vector<StmtCodelet> windows;
};

Extracted extract(const std::string& text, size_t max_len = 8) {
  Extracted x;
  x.program = desugar(parse_program(text, apis()));
  x.info = typecheck(x.program, apis());
  x.exprs = extract_expr_codelets(x.program, x.info);
  x.windows = extract_stmt_codelets(x.program, x.info, max_len);
  return x;
}

// Independent walkers over the tree.
size_t count_exprs(const Expr& e);
size_t count_exprs(const Stmt& s);

size_t count_all(const std::vector<ExprPtr>& es) {
  size_t n = 0;
  for (auto& e : es) n += count_exprs(*e);
  return n;
}

size_t count_exprs(const Expr& e) {
  return 1 + std::visit(overloaded{
                            [](const ast::Binary& b) { return count_exprs(*b.lhs) + count_exprs(*b.rhs); },
                            [](const ast::Unary& u) { return count_exprs(*u.operand); },
                            [](const ast::Call& c) { return count_all(c.args); },
                            [](const ast::Assign& a) { return count_exprs(*a.target) + count_exprs(*a.value); },
                            [](const ast::Index& i) { return count_exprs(*i.base) + count_all(i.indices); },
                            [](const ast::NewArray& n) { return count_all(n.sizes); },
                            [](const ast::ArrayLit& l) { return count_all(l.elems); },
                            [](const ast::Length& l) { return count_exprs(*l.base); },
                            [](const auto&) { return size_t{0}; },
                        },
                        e.node);
}

size_t count_exprs(const Stmt& s) {
  return std::visit(overloaded{
                        [](const ast::Let& l) { return count_exprs(*l.init); },
                        [](const ast::ExprStmt& e) { return count_exprs(*e.expr); },
                        [](const ast::If& i) {
                          return count_exprs(*i.cond) + count_exprs(*i.then_branch) +
                                 (i.else_branch ? count_exprs(*i.else_branch) : 0);
                        },
                        [](const ast::While& w) { return count_exprs(*w.cond) + count_exprs(*w.body); },
                        [](const ast::Block& b) {
                          size_t n = 0;
                          for (auto& s : b.stmts) n += count_exprs(*s);
                          return n;
                        },
                        [](const ast::Return& r) { return r.value ? count_exprs(*r.value) : 0; },
                        [](const auto&) { return size_t{0}; },
                    },
                    s.node);
}

size_t windows_of(size_t n, size_t max_len) {
  size_t total = 0;
  for (size_t len = 1; len <= std::min(max_len, n); ++len) total += n - len + 1;
  return total;
}

// Sum over every statement sequence: blocks, plus loop bodies and branches
// that are a single statement.
size_t closed_form(const Stmt& s, size_t max_len, bool as_sequence) {
  size_t own = (as_sequence && !s.is<ast::Block>()) ? 1 : 0;
  return own + std::visit(overloaded{
                              [&](const ast::Block& b) {
                                size_t n = windows_of(b.stmts.size(), max_len);
                                for (auto& c : b.stmts) n += closed_form(*c, max_len, false);
                                return n;
                              },
                              [&](const ast::If& i) {
                                size_t n = closed_form(*i.then_branch, max_len, true);
                                if (i.else_branch) n += closed_form(*i.else_branch, max_len, true);
                                return n;
                              },
                              [&](const ast::While& w) { return closed_form(*w.body, max_len, true); },
                              [&](const auto&) { return size_t{0}; },
                          },
                          s.node);
}

size_t closed_form_program(const Program& p, size_t max_len) { return closed_form(*p.body, max_len, false); }

ExprCodelet find_expr(const std::vector<ExprCodelet>& cs, const std::string& text) {
  for (auto& c : cs)
    if (c.text == text) return c;
  FAIL("no codelet " << text);
  return {};
}

}  // namespace

TEST_CASE("the sieve donor supplies both boolean constants as assignment values") {
  Extracted x = extract(testing::kSieveDonor);
  bool has_true = false, has_false = false;
  for (auto& c : x.exprs) {
    auto b = c.expr->as<ast::BoolLit>();
    if (!b || c.type != Type::boolean() || c.role.kind != RoleKind::AssignRhs) continue;
    (b->value ? has_true : has_false) = true;
  }
  CHECK(has_true);
  CHECK(has_false);
}

TEST_CASE("a one-expression body has exactly one codelet") {
  Extracted x = extract("int f() { return 0; }");
  REQUIRE(x.exprs.size() == 1);
  CHECK(x.exprs[0].expr->as<ast::IntLit>()->value == 0);
  CHECK(x.exprs[0].role.kind == RoleKind::ReturnValue);
  CHECK(x.exprs[0].type == Type::integer());
  CHECK(x.exprs[0].size == 1);
}

TEST_CASE("one codelet per expression node") {
  for (auto& e : testing::bundled_index().entries) {
    Extracted x = extract(pretty_print(e.program));
    CHECK_MESSAGE(x.exprs.size() == count_exprs(*x.program.body), e.program.name);
  }
  for (uint32_t seed = 0; seed < 100; ++seed) {
    testing::ProgramGen gen(seed);
    Extracted x = extract(gen.program());
    CHECK(x.exprs.size() == count_exprs(*x.program.body));
  }
}

TEST_CASE("codelets come smallest first, ties in source order") {
  for (auto& e : testing::bundled_index().entries) {
    Extracted x = extract(pretty_print(e.program));
    for (size_t i = 1; i < x.exprs.size(); ++i) {
      auto& a = x.exprs[i - 1];
      auto& b = x.exprs[i];
      CHECK((a.size < b.size || (a.size == b.size && a.position < b.position)));
    }
    for (size_t i = 1; i < x.windows.size(); ++i) {
      auto& a = x.windows[i - 1];
      auto& b = x.windows[i];
      bool ordered = a.size < b.size || (a.size == b.size && (a.depth < b.depth || (a.depth == b.depth &&
                                                                                      a.position <= b.position)));
      CHECK(ordered);
    }
  }
}

TEST_CASE("window counting on a flat block") {
  Extracted x = extract("int f(int x) { x = 1; x = 2; return x; }", 2);
  CHECK(x.windows.size() == 5);
  size_t pairs = std::count_if(x.windows.begin(), x.windows.end(), [](auto& w) { return w.stmts.size() == 2; });
  CHECK(pairs == 2);
}

TEST_CASE("the sieve donor has the init-and-mark window") {
  Extracted x = extract(testing::kSieveDonor);
  bool found = false;
  for (auto& w : x.windows) {
    if (w.stmts.size() != 2 || w.depth != 0) continue;
    if (w.text.find("p[i] = true") != std::string::npos && w.text.find("p[i * j] = false") != std::string::npos &&
        w.text.find("p[1]") == std::string::npos && w.text.find("p.length") == std::string::npos) {
      found = true;
      std::vector<std::string> free;
      for (auto& f : w.free) free.push_back(f.name);
      CHECK(free == std::vector<std::string>{"l", "p"});
      CHECK(w.declares.empty());
    }
  }
  CHECK(found);
}

TEST_CASE("window counts follow the closed form") {
  for (uint32_t seed = 0; seed < 200; ++seed) {
    testing::ProgramGen gen(seed);
    size_t max_len = 1 + seed % 4;
    Extracted x = extract(gen.program(), max_len);
    CHECK(x.windows.size() == closed_form_program(x.program, max_len));
  }
  for (auto& e : testing::bundled_index().entries) {
    Extracted x = extract(pretty_print(e.program));
    CHECK_MESSAGE(x.windows.size() == closed_form_program(x.program, 8), e.program.name);
  }
}

TEST_CASE("extraction is pure") {
  Extracted a = extract(testing::kSieveDonor);
  Extracted b = extract(testing::kSieveDonor);
  REQUIRE(a.exprs.size() == b.exprs.size());
  REQUIRE(a.windows.size() == b.windows.size());
  for (size_t i = 0; i < a.exprs.size(); ++i) {
    CHECK(a.exprs[i].text == b.exprs[i].text);
    CHECK(a.exprs[i].position == b.exprs[i].position);
  }
  for (size_t i = 0; i < a.windows.size(); ++i) CHECK(a.windows[i].text == b.windows[i].text);
}

TEST_CASE("codelets re-type-check on their own") {
  for (auto& e : testing::bundled_index().entries) {
    Extracted x = extract(pretty_print(e.program));
    auto params_of = [](const std::vector<FreeRef>& free, bool& self_call) {
      std::string ps;
      for (auto& f : free) {
        if (f.is_function) {
          self_call = true;
          continue;
        }
        ps += (ps.empty() ? "" : ", ") + f.type.str() + " " + f.name;
      }
      return ps;
    };
    for (auto& c : x.exprs) {
      bool self = false;
      std::string ps = params_of(c.free, self);
      std::string name = self ? x.program.name : "codeletCheck";
      std::string text;
      if (c.type == Type::unit()) text = "void " + name + "(" + ps + ") { " + c.text + "; }";
      else text = c.type.str() + " " + name + "(" + ps + ") { return " + c.text + "; }";
      if (self) continue;  // a self call needs the donor's signature, checked with the windows below
      CHECK_NOTHROW_MESSAGE(parse_program(text, apis()), text);
    }
    for (auto& w : x.windows) {
      bool self = false;
      std::string ps = params_of(w.free, self);
      if (self) continue;
      std::string tail = x.program.return_type == Type::unit() ? "" : " return " + std::string(
          x.program.return_type == Type::boolean() ? "false" : x.program.return_type == Type::integer() ? "0" : "null") + ";";
      auto rt = x.program.return_type;
      if (!(rt == Type::unit() || rt == Type::boolean() || rt == Type::integer())) continue;
      std::string text = x.program.return_type.str() + " windowCheck(" + ps + ") {\n" + w.text + tail + "\n}";
      CHECK_NOTHROW_MESSAGE(parse_program(text, apis()), text);
    }
  }
}

TEST_CASE("constant adaptation") {
  Extracted x = extract("int f(int n) { int i = 0; while (i <= 100) { i++; } return i; }");
  ExprCodelet c = find_expr(x.exprs, "i <= 100");
  auto variants = adapt_constants(c, {99}, {}, 16);
  REQUIRE(variants.size() == 2);
  CHECK(variants[0].text == "i <= 100");
  CHECK(variants[1].text == "i <= 99");
  CHECK(variants[1].type == c.type);
  CHECK(variants[1].role == c.role);

  ExprCodelet plain = find_expr(x.exprs, "i");
  auto same = adapt_constants(plain, {1, 2, 3}, {"n"}, 16);
  REQUIRE(same.size() == 1);
  CHECK(same[0].text == "i");

  auto with_var = adapt_constants(c, {}, {"num"}, 16);
  REQUIRE(with_var.size() == 2);
  CHECK(with_var[1].text == "i <= num");
  CHECK(std::any_of(with_var[1].free.begin(), with_var[1].free.end(), [](auto& f) { return f.name == "num"; }));
}

TEST_CASE("variant counts are 1 + literals x replacements, clipped at the budget") {
  std::mt19937 rng(3);
  Extracted x = extract(testing::kSieveDonor);
  for (int trial = 0; trial < 200; ++trial) {
    auto& c = x.exprs[std::uniform_int_distribution<size_t>(0, x.exprs.size() - 1)(rng)];
    size_t m = 0;
    for (size_t at = 0; at < c.text.size(); ++at)
      if (std::isdigit(static_cast<unsigned char>(c.text[at])) && (at == 0 || !std::isalnum(static_cast<unsigned char>(c.text[at - 1]))))
        ++m;
    std::vector<int64_t> lits;
    std::vector<std::string> vars;
    int nl = std::uniform_int_distribution<int>(0, 4)(rng), nv = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < nl; ++i) lits.push_back(50 + i);
    for (int i = 0; i < nv; ++i) vars.push_back("v" + std::to_string(i));
    size_t budget = std::uniform_int_distribution<size_t>(1, 20)(rng);
    size_t d = lits.size() + vars.size();
    CHECK(adapt_constants(c, lits, vars, budget).size() == std::min(budget, 1 + m * d));
  }
  for (auto& w : x.windows) {
    size_t m = 0;
    for (size_t at = 0; at < w.text.size(); ++at)
      if (std::isdigit(static_cast<unsigned char>(w.text[at])) && (at == 0 || !std::isalnum(static_cast<unsigned char>(w.text[at - 1]))))
        ++m;
    CHECK(adapt_constants(w, {7, 8}, {"num"}, 1000).size() == 1 + m * 3);
  }
}

TEST_CASE("renaming free references") {
  Extracted x = extract(testing::kSieveDonor);
  ExprCodelet c = find_expr(x.exprs, "p[i * j] = false");
  Renaming r;
  r.vars = {{"p", "prime"}, {"i", "a"}, {"j", "b"}};
  auto renamed = rename_free(c, r);
  REQUIRE(renamed);
  CHECK(print_expr(**renamed) == "prime[a * b] = false");

  // `i` is declared inside the window, so only the free `l` and `p` change
  for (auto& w : x.windows) {
    if (w.text.rfind("{\n  int i = 2;", 0) != 0 || w.stmts.size() != 1 || w.text.find("true") == std::string::npos)
      continue;
    Renaming rn;
    rn.vars = {{"p", "prime"}, {"l", "num"}, {"i", "zzz"}};
    auto out = rename_free(w, rn);
    REQUIRE(out);
    std::string text;
    for (auto& s : *out) text += print_stmt(*s);
    CHECK(text.find("prime[i] = true") != std::string::npos);
    CHECK(text.find("i <= num") != std::string::npos);

    Renaming capture;
    capture.vars = {{"l", "i"}};
    CHECK_FALSE(rename_free(w, capture).has_value());
  }
}

TEST_CASE("self calls are function references") {
  Extracted x = extract("int fact(int n) { if (n <= 1) { return 1; } return n * fact(n - 1); }");
  ExprCodelet c = find_expr(x.exprs, "fact(n - 1)");
  REQUIRE(c.free.size() == 2);
  CHECK(c.free[0].is_function);
  CHECK(c.free[0].name == "fact");
  CHECK(c.free[0].sig == signature_of(x.program));
  Renaming r;
  r.function = "factorial";
  r.vars = {{"n", "k"}};
  CHECK(print_expr(**rename_free(c, r)) == "factorial(k - 1)");
}

TEST_CASE("integer literals of a program") {
  Program p = parse_program("int f(int n) { int a = 3; int b = 7; return a + 3 * n - 7 + 11; }", apis());
  CHECK(integer_literals(p) == std::vector<int64_t>{3, 7, 11});
}
