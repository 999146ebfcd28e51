#pragma once

#include <string>

namespace splice {

enum class TypeKind { Int, Bool, Str, Unit, Array, Opaque };

// Value type of the language. Arrays have a scalar or opaque element and one
// or two dimensions; `name` holds the opaque name (for Opaque, or for arrays of
// opaque elements).
struct Type {
  TypeKind kind = TypeKind::Unit;
  TypeKind elem = TypeKind::Unit;
  int dims = 0;
  std::string name;

  static Type integer() { return {TypeKind::Int, TypeKind::Unit, 0, {}}; }
  static Type boolean() { return {TypeKind::Bool, TypeKind::Unit, 0, {}}; }
  static Type string() { return {TypeKind::Str, TypeKind::Unit, 0, {}}; }
  static Type unit() { return {TypeKind::Unit, TypeKind::Unit, 0, {}}; }
  static Type opaque(std::string name) { return {TypeKind::Opaque, TypeKind::Unit, 0, std::move(name)}; }
  static Type array(const Type& element, int dims) {
    return {TypeKind::Array, element.kind, dims, element.name};
  }

  bool is_array() const { return kind == TypeKind::Array; }
  bool is_scalar() const {
    return kind == TypeKind::Int || kind == TypeKind::Bool || kind == TypeKind::Str;
  }

  // The element kind as a standalone type (Array only).
  Type element_type() const { return {elem, TypeKind::Unit, 0, elem == TypeKind::Opaque ? name : ""}; }

  // Type produced by indexing once: a row for 2-d arrays, the element for 1-d.
  Type indexed() const { return dims > 1 ? Type{TypeKind::Array, elem, dims - 1, name} : element_type(); }

  bool operator==(const Type&) const = default;

  std::string str() const {
    switch (kind) {
      case TypeKind::Int: return "int";
      case TypeKind::Bool: return "boolean";
      case TypeKind::Str: return "String";
      case TypeKind::Unit: return "void";
      case TypeKind::Opaque: return name;
      case TypeKind::Array: {
        std::string s = element_type().str();
        for (int i = 0; i < dims; ++i) s += "[]";
        return s;
      }
    }
    return "?";
  }
};

}  // namespace splice
