#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splice/lang/ast.hpp"

namespace splice {

struct Comment {
  std::string text;  // without the comment delimiters
  Span span;
  bool block = false;
};

// Syntax only: the result is not type-checked. See parse_program in
// typecheck.hpp for the checked entry point.
Program parse_program_syntax(std::string_view text);

// Same, also returning every comment that appears inside the text.
Program parse_program_syntax(std::string_view text, std::vector<Comment>& comments);

// Statement list of a TEST block. A `__solution__` line is removed and its
// position (index into the top-level statements) reported through `marker`.
ast::Block parse_test_block(std::string_view text, std::optional<size_t>& marker);

// One top-level function of a multi-function source file. `leading` holds the
// comments between the previous function and this one; `inner` the comments
// inside the function.
struct FunctionChunk {
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 1;
  std::vector<Comment> leading;
};

// Splits a source file into top-level function chunks by brace matching. Does
// not parse the chunks, so a malformed function does not hide its neighbours.
std::vector<FunctionChunk> split_functions(std::string_view text);

// All comments in a text, in source order.
std::vector<Comment> scan_comments(std::string_view text);

}  // namespace splice
