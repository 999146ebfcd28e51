#include "splice/lang/draft.hpp"

#include <sstream>

namespace splice {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Drops the ` * ` decoration that starts each line of a javadoc-style comment.
std::string undecorate(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t");
    if (b != std::string::npos && line[b] == '*') {
      line = line.substr(b + 1);
      if (!line.empty() && line[0] == ' ') line.erase(0, 1);
    }
    out += line;
    out += '\n';
  }
  return out;
}

bool is_header(const Comment& c) {
  return c.block && (c.text.find("COMMENT:") != std::string::npos || c.text.find("TEST:") != std::string::npos ||
                     c.text.find("API_cons") != std::string::npos);
}

std::string automaton_path(const std::string& header, size_t at) {
  size_t open = header.find('(', at);
  size_t q1 = header.find('"', open);
  size_t q2 = q1 == std::string::npos ? q1 : header.find('"', q1 + 1);
  if (open == std::string::npos || q1 == std::string::npos || q2 == std::string::npos)
    throw Error("API_cons expects a quoted automaton file path");
  return header.substr(q1 + 1, q2 - q1 - 1);
}

}  // namespace

StmtPtr expand_solution(const TestsRequirement& tests, const Program& fn) {
  auto& stmts = tests.block->as<ast::Block>()->stmts;
  if (!tests.marker) return tests.block;
  size_t at = *tests.marker;
  std::vector<StmtPtr> out(stmts.begin(), stmts.begin() + static_cast<long>(at));
  bool bound = true;
  for (auto& p : fn.params) {
    bool found = false;
    for (auto& s : out)
      if (auto let = s->as<ast::Let>(); let && let->name == p.name) found = true;
    bound &= found;
  }
  if (bound) {
    std::vector<ExprPtr> args;
    for (auto& p : fn.params) args.push_back(make_expr(ast::Var{p.name}));
    ExprPtr call = make_expr(ast::Call{fn.name, std::move(args)});
    if (fn.return_type.kind == TypeKind::Unit) out.push_back(make_stmt(ast::ExprStmt{call}));
    else out.push_back(make_stmt(ast::Let{"__result__", fn.return_type, call}));
  }
  out.insert(out.end(), stmts.begin() + static_cast<long>(at), stmts.end());
  return make_stmt(ast::Block{std::move(out)}, tests.block->span, tests.block->id);
}

Draft parse_draft(std::string_view text, const SignatureTable& apis, const FileLoader& load) {
  std::vector<Comment> comments;
  Draft d{parse_program_syntax(text, comments), {}, {}, TestsRequirement{}, {}, {}, {}};

  const Comment* header = nullptr;
  for (auto& c : comments) {
    if (c.span.begin >= d.program.span.begin) d.inner_comments.push_back(c);
    else if (!header && is_header(c)) header = &c;
  }
  if (!header) throw MissingRequirement();

  std::string h = undecorate(header->text);
  size_t comment_at = h.find("COMMENT:");
  size_t test_at = h.find("TEST:");
  size_t api_at = h.find("API_cons");
  auto section_end = [&](size_t from) {
    size_t end = h.size();
    for (size_t p : {comment_at, test_at, api_at})
      if (p != std::string::npos && p > from && p < end) end = p;
    return end;
  };
  if (comment_at != std::string::npos) {
    size_t b = comment_at + 8;
    d.comment = trim(std::string_view(h).substr(b, section_end(b) - b));
  }

  TypeInfo info = typecheck(d.program, apis);
  d.holes = std::move(info.holes);
  collect_holes(*d.program.body, d.expr_holes, d.stmt_holes);

  if (test_at != std::string::npos && api_at != std::string::npos)
    throw Error("draft has both a TEST section and an API_cons reference");
  if (test_at != std::string::npos) {
    size_t b = test_at + 5;
    TestsRequirement t;
    t.block = make_stmt(parse_test_block(std::string_view(h).substr(b, section_end(b) - b), t.marker));
    StmtPtr expanded = expand_solution(t, d.program);
    typecheck_body(*expanded->as<ast::Block>(), Type::boolean(), apis, {signature_of(d.program)});
    d.requirement = std::move(t);
  } else if (api_at != std::string::npos) {
    if (!d.program.params.empty())
      throw Error("a draft checked by API_cons must take no parameters");
    AutomatonRequirement a;
    a.path = automaton_path(h, api_at);
    a.automaton = parse_automaton(load(a.path));
    d.requirement = std::move(a);
  } else {
    throw MissingRequirement();
  }
  return d;
}

Type infer_hole_type(const Draft& d, HoleId hole) {
  auto it = d.holes.find(hole);
  if (it == d.holes.end() || !it->second.is_expr) throw NotAnExprHole(hole);
  return it->second.type;
}

}  // namespace splice
