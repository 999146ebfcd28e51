#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "splice/interp/automaton.hpp"
#include "splice/lang/typecheck.hpp"

namespace splice {

struct TestsRequirement {
  StmtPtr block;                 // a Block, as written (marker removed)
  std::optional<size_t> marker;  // index of `__solution__` among the top-level statements
};

struct AutomatonRequirement {
  ApiAutomaton automaton;
  std::string path;
};

using Requirement = std::variant<TestsRequirement, AutomatonRequirement>;

struct Draft {
  Program program;
  std::string comment;                  // the COMMENT section
  std::vector<Comment> inner_comments;  // ordinary comments inside the function
  Requirement requirement;
  std::vector<HoleId> expr_holes;  // source order
  std::vector<HoleId> stmt_holes;
  std::map<HoleId, HoleInfo> holes;
};

// Reads the file named by API_cons(...). Paths are passed through as written.
using FileLoader = std::function<std::string(const std::string& path)>;

Draft parse_draft(std::string_view text, const SignatureTable& apis, const FileLoader& load);

Type infer_hole_type(const Draft& d, HoleId hole);

// The test block with `__solution__` replaced: when every parameter of `fn` is
// declared at the top level before the marker, the marker becomes
// `T __result__ = fn(params...);` (a bare call for void functions); otherwise
// it disappears.
StmtPtr expand_solution(const TestsRequirement& tests, const Program& fn);

}  // namespace splice
