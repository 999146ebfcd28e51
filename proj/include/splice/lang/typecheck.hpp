#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "splice/lang/ast.hpp"
#include "splice/lang/parser.hpp"

namespace splice {

struct FunctionSig {
  std::string name;
  std::vector<Type> params;
  Type ret;
  bool operator==(const FunctionSig&) const = default;
};

FunctionSig signature_of(const Program& p);

// What the type checker needs to know about callable APIs and opaque types.
class SignatureTable {
 public:
  virtual ~SignatureTable() = default;
  virtual const FunctionSig* find_function(std::string_view name) const = 0;
  virtual bool has_opaque_type(std::string_view name) const = 0;
};

struct Binding {
  std::string name;
  Type type;
  bool operator==(const Binding&) const = default;
};

struct HoleInfo {
  HoleId id = 0;
  bool is_expr = false;
  Type type;   // expression holes only
  Role role;   // expression holes only
  std::vector<Binding> scope;  // visible variables at the hole, in declaration order
};

struct TypeInfo {
  std::unordered_map<const Expr*, Type> types;
  std::unordered_map<const Expr*, Role> roles;
  std::map<HoleId, HoleInfo> holes;
};

// Type-checks a function. Calls resolve to `apis` plus the function itself.
TypeInfo typecheck(const Program& p, const SignatureTable& apis);

// Type-checks a statement list as the body of a parameterless function
// returning `ret`, with `extra` callable in addition to `apis`.
TypeInfo typecheck_body(const ast::Block& body, const Type& ret, const SignatureTable& apis,
                        const std::vector<FunctionSig>& extra);

// Parses and type-checks one function.
Program parse_program(std::string_view text, const SignatureTable& apis);

}  // namespace splice
