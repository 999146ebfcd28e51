#include "splice/lang/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace splice {

namespace {

enum class Tok {
  Ident,
  Int,
  Str,
  Hole,
  KwInt,
  KwBoolean,
  KwString,
  KwVoid,
  KwIf,
  KwElse,
  KwWhile,
  KwFor,
  KwReturn,
  KwNew,
  KwTrue,
  KwFalse,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Dot,
  Assign,
  PlusAssign,
  MinusAssign,
  StarAssign,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  PlusPlus,
  MinusMinus,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
  Bang,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run(std::vector<Comment>* comments) {
    std::vector<Token> out;
    for (;;) {
      skip_space(comments);
      Span s = here();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", s});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        std::string word(src_.substr(b, pos_ - b));
        out.push_back({keyword(word), word, finish(s)});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t b = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        out.push_back({Tok::Int, std::string(src_.substr(b, pos_ - b)), finish(s)});
      } else if (c == '"') {
        advance();
        std::string value;
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') throw SyntaxError(s, "unterminated string literal");
          char d = src_[pos_];
          advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) throw SyntaxError(s, "unterminated string literal");
            char e = src_[pos_];
            advance();
            switch (e) {
              case 'n': value += '\n'; break;
              case 't': value += '\t'; break;
              case '\\': value += '\\'; break;
              case '"': value += '"'; break;
              default: throw SyntaxError(s, std::string("unknown escape \\") + e);
            }
          } else {
            value += d;
          }
        }
        out.push_back({Tok::Str, value, finish(s)});
      } else {
        out.push_back(punct(s));
      }
    }
  }

 private:
  Span here() const { return {static_cast<uint32_t>(pos_), static_cast<uint32_t>(pos_), line_, col_}; }
  Span finish(Span s) const {
    s.end = static_cast<uint32_t>(pos_);
    return s;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool starts(std::string_view p) const { return src_.substr(pos_, p.size()) == p; }

  void skip_space(std::vector<Comment>* comments) {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (starts("//")) {
        Span s = here();
        size_t b = pos_ + 2;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        if (comments) comments->push_back({std::string(src_.substr(b, pos_ - b)), finish(s), false});
      } else if (starts("/*")) {
        Span s = here();
        size_t b = pos_ + 2;
        advance();
        advance();
        while (pos_ < src_.size() && !starts("*/")) advance();
        if (pos_ >= src_.size()) throw SyntaxError(s, "unterminated block comment");
        size_t e = pos_;
        advance();
        advance();
        if (comments) comments->push_back({std::string(src_.substr(b, e - b)), finish(s), true});
      } else {
        return;
      }
    }
  }

  static Tok keyword(const std::string& w) {
    if (w == "int") return Tok::KwInt;
    if (w == "boolean") return Tok::KwBoolean;
    if (w == "String") return Tok::KwString;
    if (w == "void") return Tok::KwVoid;
    if (w == "if") return Tok::KwIf;
    if (w == "else") return Tok::KwElse;
    if (w == "while") return Tok::KwWhile;
    if (w == "for") return Tok::KwFor;
    if (w == "return") return Tok::KwReturn;
    if (w == "new") return Tok::KwNew;
    if (w == "true") return Tok::KwTrue;
    if (w == "false") return Tok::KwFalse;
    return Tok::Ident;
  }

  Token punct(Span s) {
    static const std::pair<std::string_view, Tok> table[] = {
        {"??", Tok::Hole},       {"++", Tok::PlusPlus},  {"--", Tok::MinusMinus}, {"+=", Tok::PlusAssign},
        {"-=", Tok::MinusAssign}, {"*=", Tok::StarAssign}, {"==", Tok::EqEq},      {"!=", Tok::NotEq},
        {"<=", Tok::Le},         {">=", Tok::Ge},        {"&&", Tok::AndAnd},     {"||", Tok::OrOr},
        {"(", Tok::LParen},      {")", Tok::RParen},     {"{", Tok::LBrace},      {"}", Tok::RBrace},
        {"[", Tok::LBracket},    {"]", Tok::RBracket},   {";", Tok::Semi},        {",", Tok::Comma},
        {".", Tok::Dot},         {"=", Tok::Assign},     {"+", Tok::Plus},        {"-", Tok::Minus},
        {"*", Tok::Star},        {"/", Tok::Slash},      {"%", Tok::Percent},     {"<", Tok::Lt},
        {">", Tok::Gt},          {"!", Tok::Bang},
    };
    for (auto& [text, kind] : table) {
      if (starts(text)) {
        for (size_t i = 0; i < text.size(); ++i) advance();
        return {kind, std::string(text), finish(s)};
      }
    }
    throw SyntaxError(s, std::string("unexpected character '") + src_[pos_] + "'");
  }

  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, bool allow_holes) : toks_(std::move(toks)), allow_holes_(allow_holes) {}

  Program program() {
    Program p;
    p.span = peek().span;
    p.return_type = type();
    p.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      do {
        Param param;
        param.type = type();
        param.name = expect(Tok::Ident, "parameter name").text;
        p.params.push_back(std::move(param));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (!at(Tok::LBrace)) fail("expected '{' to open function body");
    p.body = block();
    if (!at(Tok::End)) fail("unexpected text after function body");
    p.span.end = toks_[pos_ - 1].span.end;
    return p;
  }

  ast::Block test_block(std::optional<size_t>& marker) {
    ast::Block b;
    while (!at(Tok::End)) {
      if (at(Tok::Ident) && peek().text == "__solution__") {
        if (marker) throw DuplicateSolutionMarker();
        marker = b.stmts.size();
        ++pos_;
        accept(Tok::Semi);
        continue;
      }
      statement_into(b.stmts);
    }
    return b;
  }

 private:
  const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(peek().span, msg); }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) {
      const Token& t = peek();
      fail(std::string("expected ") + what + ", found " + (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"));
    }
    return toks_[pos_++];
  }
  NodeId fresh() { return next_id_++; }
  Span from(Span s) const {
    s.end = toks_[pos_ > 0 ? pos_ - 1 : 0].span.end;
    return s;
  }

  ExprPtr mk(Expr::Node n, Span s) { return make_expr(std::move(n), from(s), fresh()); }
  StmtPtr mks(Stmt::Node n, Span s) { return make_stmt(std::move(n), from(s), fresh()); }

  bool at_base_type() const {
    switch (peek().kind) {
      case Tok::KwInt:
      case Tok::KwBoolean:
      case Tok::KwString:
      case Tok::KwVoid:
        return true;
      default:
        return false;
    }
  }

  // A declaration starts with a keyword type, `Name name`, or `Name[] name`.
  bool at_declaration() const {
    if (at_base_type()) return true;
    if (!at(Tok::Ident)) return false;
    if (peek(1).kind == Tok::Ident) return true;
    return peek(1).kind == Tok::LBracket && peek(2).kind == Tok::RBracket;
  }

  Type base_type() {
    const Token& t = peek();
    ++pos_;
    switch (t.kind) {
      case Tok::KwInt: return Type::integer();
      case Tok::KwBoolean: return Type::boolean();
      case Tok::KwString: return Type::string();
      case Tok::KwVoid: return Type::unit();
      case Tok::Ident: return Type::opaque(t.text);
      default:
        --pos_;
        fail("expected a type");
    }
  }

  Type type() {
    Span s = peek().span;
    Type t = base_type();
    int dims = 0;
    while (at(Tok::LBracket) && peek(1).kind == Tok::RBracket) {
      pos_ += 2;
      ++dims;
    }
    if (dims == 0) return t;
    if (t.kind == TypeKind::Unit) throw SyntaxError(s, "array of void");
    if (dims > 2) throw SyntaxError(s, "arrays have at most two dimensions");
    return Type::array(t, dims);
  }

  StmtPtr block() {
    Span s = expect(Tok::LBrace, "'{'").span;
    ast::Block b;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("expected '}'");
      statement_into(b.stmts);
    }
    ++pos_;
    return mks(std::move(b), s);
  }

  // Parses one statement; a multi-variable declaration yields several.
  void statement_into(std::vector<StmtPtr>& out) {
    if (at_declaration()) {
      declaration_into(out);
      expect(Tok::Semi, "';'");
      return;
    }
    out.push_back(statement());
  }

  StmtPtr statement() {
    Span s = peek().span;
    if (at_declaration()) {
      std::vector<StmtPtr> decls;
      declaration_into(decls);
      expect(Tok::Semi, "';'");
      if (decls.size() == 1) return decls[0];
      return mks(ast::Block{std::move(decls)}, s);
    }
    switch (peek().kind) {
      case Tok::LBrace:
        return block();
      case Tok::KwIf: {
        ++pos_;
        expect(Tok::LParen, "'('");
        ExprPtr cond = expression();
        expect(Tok::RParen, "')'");
        StmtPtr then_branch = statement();
        StmtPtr else_branch;
        if (accept(Tok::KwElse)) else_branch = statement();
        return mks(ast::If{cond, then_branch, else_branch}, s);
      }
      case Tok::KwWhile: {
        ++pos_;
        expect(Tok::LParen, "'('");
        ExprPtr cond = expression();
        expect(Tok::RParen, "')'");
        StmtPtr body = statement();
        return mks(ast::While{cond, body}, s);
      }
      case Tok::KwFor: {
        ++pos_;
        expect(Tok::LParen, "'('");
        StmtPtr init;
        if (!at(Tok::Semi)) {
          Span is = peek().span;
          if (at_declaration()) {
            std::vector<StmtPtr> decls;
            declaration_into(decls);
            init = decls.size() == 1 ? decls[0] : mks(ast::Block{std::move(decls)}, is);
          } else {
            init = mks(ast::ExprStmt{expression()}, is);
          }
        }
        expect(Tok::Semi, "';'");
        ExprPtr cond = expression();
        expect(Tok::Semi, "';'");
        ExprPtr step;
        if (!at(Tok::RParen)) step = expression();
        expect(Tok::RParen, "')'");
        StmtPtr body = statement();
        return mks(ast::For{init, cond, step, body}, s);
      }
      case Tok::KwReturn: {
        ++pos_;
        ExprPtr value;
        if (!at(Tok::Semi)) value = expression();
        expect(Tok::Semi, "';'");
        return mks(ast::Return{value}, s);
      }
      case Tok::Hole: {
        if (!allow_holes_) fail("holes are not allowed here");
        ++pos_;
        accept(Tok::Semi);
        return mks(ast::StmtHole{next_hole_++}, s);
      }
      case Tok::Semi:
        ++pos_;
        return mks(ast::Block{}, s);
      default: {
        ExprPtr e = expression();
        expect(Tok::Semi, "';'");
        return mks(ast::ExprStmt{e}, s);
      }
    }
  }

  void declaration_into(std::vector<StmtPtr>& out) {
    Type t = type();
    if (t.kind == TypeKind::Unit) fail("variables cannot have type void");
    do {
      Span s = peek().span;
      std::string name = expect(Tok::Ident, "variable name").text;
      if (!at(Tok::Assign)) fail("declarations need an initializer");
      ++pos_;
      ExprPtr init = expression();
      out.push_back(mks(ast::Let{name, t, init}, s));
    } while (accept(Tok::Comma));
  }

  ExprPtr expression() { return assignment(); }

  ExprPtr assignment() {
    Span s = peek().span;
    ExprPtr lhs = logical_or();
    Tok k = peek().kind;
    if (k == Tok::Assign || k == Tok::PlusAssign || k == Tok::MinusAssign || k == Tok::StarAssign) {
      if (!lhs->is<ast::Var>() && !lhs->is<ast::Index>()) fail("assignment target must be a variable or array element");
      ++pos_;
      ExprPtr rhs = assignment();
      if (k != Tok::Assign) {
        BinOp op = k == Tok::PlusAssign ? BinOp::Add : k == Tok::MinusAssign ? BinOp::Sub : BinOp::Mul;
        rhs = mk(ast::Binary{op, lhs, rhs}, s);
      }
      return mk(ast::Assign{lhs, rhs}, s);
    }
    return lhs;
  }

  template <class Next>
  ExprPtr binary_level(Next next, std::initializer_list<std::pair<Tok, BinOp>> ops) {
    Span s = peek().span;
    ExprPtr lhs = (this->*next)();
    for (;;) {
      bool matched = false;
      for (auto [tok, op] : ops) {
        if (at(tok)) {
          ++pos_;
          ExprPtr rhs = (this->*next)();
          lhs = mk(ast::Binary{op, lhs, rhs}, s);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  ExprPtr logical_or() { return binary_level(&Parser::logical_and, {{Tok::OrOr, BinOp::Or}}); }
  ExprPtr logical_and() { return binary_level(&Parser::equality, {{Tok::AndAnd, BinOp::And}}); }
  ExprPtr equality() {
    return binary_level(&Parser::relational, {{Tok::EqEq, BinOp::Eq}, {Tok::NotEq, BinOp::Ne}});
  }
  ExprPtr relational() {
    return binary_level(&Parser::additive, {{Tok::Le, BinOp::Le}, {Tok::Ge, BinOp::Ge},
                                            {Tok::Lt, BinOp::Lt}, {Tok::Gt, BinOp::Gt}});
  }
  ExprPtr additive() {
    return binary_level(&Parser::multiplicative, {{Tok::Plus, BinOp::Add}, {Tok::Minus, BinOp::Sub}});
  }
  ExprPtr multiplicative() {
    return binary_level(&Parser::unary,
                        {{Tok::Star, BinOp::Mul}, {Tok::Slash, BinOp::Div}, {Tok::Percent, BinOp::Mod}});
  }

  ExprPtr unary() {
    Span s = peek().span;
    UnOp op;
    switch (peek().kind) {
      case Tok::Minus: op = UnOp::Neg; break;
      case Tok::Bang: op = UnOp::Not; break;
      case Tok::PlusPlus: op = UnOp::Inc; break;
      case Tok::MinusMinus: op = UnOp::Dec; break;
      default: return postfix();
    }
    ++pos_;
    ExprPtr e = unary();
    if ((op == UnOp::Inc || op == UnOp::Dec) && !e->is<ast::Var>() && !e->is<ast::Index>())
      fail("++/-- need a variable or array element");
    return mk(ast::Unary{op, e}, s);
  }

  ExprPtr postfix() {
    Span s = peek().span;
    ExprPtr e = primary();
    for (;;) {
      if (at(Tok::LBracket)) {
        std::vector<ExprPtr> indices;
        while (accept(Tok::LBracket)) {
          indices.push_back(expression());
          expect(Tok::RBracket, "']'");
        }
        e = mk(ast::Index{e, std::move(indices)}, s);
      } else if (at(Tok::Dot)) {
        ++pos_;
        const Token& m = expect(Tok::Ident, "member name");
        if (m.text != "length") throw SyntaxError(m.span, "only .length is supported");
        e = mk(ast::Length{e}, s);
      } else if (at(Tok::PlusPlus) || at(Tok::MinusMinus)) {
        if (!e->is<ast::Var>() && !e->is<ast::Index>()) fail("++/-- need a variable or array element");
        UnOp op = at(Tok::PlusPlus) ? UnOp::Inc : UnOp::Dec;
        ++pos_;
        e = mk(ast::Unary{op, e}, s);
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    Span s = peek().span;
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || v > std::numeric_limits<int32_t>::max())
          throw SyntaxError(t.span, "integer literal out of range");
        ++pos_;
        return mk(ast::IntLit{v}, s);
      }
      case Tok::Str: {
        std::string v = t.text;
        ++pos_;
        return mk(ast::StrLit{std::move(v)}, s);
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        bool v = t.kind == Tok::KwTrue;
        ++pos_;
        return mk(ast::BoolLit{v}, s);
      }
      case Tok::Hole: {
        if (!allow_holes_) fail("holes are not allowed here");
        ++pos_;
        return mk(ast::ExprHole{next_hole_++}, s);
      }
      case Tok::Ident: {
        std::string name = t.text;
        ++pos_;
        if (accept(Tok::LParen)) {
          std::vector<ExprPtr> args;
          if (!at(Tok::RParen)) {
            do args.push_back(expression());
            while (accept(Tok::Comma));
          }
          expect(Tok::RParen, "')'");
          return mk(ast::Call{std::move(name), std::move(args)}, s);
        }
        return mk(ast::Var{std::move(name)}, s);
      }
      case Tok::LParen: {
        ++pos_;
        ExprPtr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::KwNew: {
        ++pos_;
        Type elem = base_type();
        if (elem.kind == TypeKind::Unit) fail("array of void");
        std::vector<ExprPtr> sizes;
        while (accept(Tok::LBracket)) {
          sizes.push_back(expression());
          expect(Tok::RBracket, "']'");
        }
        if (sizes.empty() || sizes.size() > 2) fail("new needs one or two dimensions");
        return mk(ast::NewArray{elem, std::move(sizes)}, s);
      }
      case Tok::LBrace: {
        ++pos_;
        std::vector<ExprPtr> elems;
        if (!at(Tok::RBrace)) {
          do elems.push_back(expression());
          while (accept(Tok::Comma));
        }
        expect(Tok::RBrace, "'}'");
        return mk(ast::ArrayLit{std::move(elems)}, s);
      }
      case Tok::End:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  bool allow_holes_;
  NodeId next_id_ = 1;
  HoleId next_hole_ = 0;
};

}  // namespace

Program parse_program_syntax(std::string_view text, std::vector<Comment>& comments) {
  Parser parser(Lexer(text).run(&comments), true);
  return parser.program();
}

Program parse_program_syntax(std::string_view text) {
  std::vector<Comment> ignored;
  return parse_program_syntax(text, ignored);
}

ast::Block parse_test_block(std::string_view text, std::optional<size_t>& marker) {
  Parser parser(Lexer(text).run(nullptr), false);
  return parser.test_block(marker);
}

std::vector<Comment> scan_comments(std::string_view text) {
  std::vector<Comment> comments;
  Lexer(text).run(&comments);
  return comments;
}

std::vector<FunctionChunk> split_functions(std::string_view text) {
  std::vector<Comment> comments;
  std::vector<Token> toks = Lexer(text).run(&comments);
  std::vector<FunctionChunk> chunks;
  size_t i = 0;
  size_t next_comment = 0;
  uint32_t prev_end = 0;
  while (toks[i].kind != Tok::End) {
    size_t start = i;
    while (toks[i].kind != Tok::End && toks[i].kind != Tok::LBrace) ++i;
    if (toks[i].kind == Tok::End) break;
    int depth = 0;
    do {
      if (toks[i].kind == Tok::LBrace) ++depth;
      if (toks[i].kind == Tok::RBrace) --depth;
      ++i;
    } while (depth > 0 && toks[i].kind != Tok::End);
    FunctionChunk c;
    c.begin = toks[start].span.begin;
    c.end = toks[i - 1].span.end;
    c.line = toks[start].span.line;
    while (next_comment < comments.size() && comments[next_comment].span.begin < c.begin) {
      if (comments[next_comment].span.begin >= prev_end) c.leading.push_back(comments[next_comment]);
      ++next_comment;
    }
    while (next_comment < comments.size() && comments[next_comment].span.begin < c.end) ++next_comment;
    prev_end = c.end;
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace splice
