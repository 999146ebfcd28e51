#include "splice/interp/value.hpp"

namespace splice {

Value make_array(std::vector<Value> elems, int dims) {
  auto a = std::make_shared<ArrayObject>();
  a->dims = dims;
  a->elems = std::move(elems);
  return {ValueKind::Array, 0, std::move(a)};
}

bool deep_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Unit: return true;
    case ValueKind::Int:
    case ValueKind::Bool: return a.i == b.i;
    default: break;
  }
  if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
  switch (a.kind) {
    case ValueKind::Str: return a.str() == b.str();
    case ValueKind::Array: {
      auto& x = a.array();
      auto& y = b.array();
      if (x.elems.size() != y.elems.size()) return false;
      for (size_t i = 0; i < x.elems.size(); ++i)
        if (!deep_equal(x.elems[i], y.elems[i])) return false;
      return true;
    }
    case ValueKind::Opaque: {
      auto& x = a.opaque();
      auto& y = b.opaque();
      return x.type_name == y.type_name && x.text == y.text && x.number == y.number;
    }
    default: return false;
  }
}

Value deep_copy(const Value& v) {
  if (v.is_null()) return v;
  switch (v.kind) {
    case ValueKind::Array: {
      std::vector<Value> elems;
      elems.reserve(v.array().elems.size());
      for (auto& e : v.array().elems) elems.push_back(deep_copy(e));
      return make_array(std::move(elems), v.array().dims);
    }
    case ValueKind::Opaque: return {v.kind, 0, std::make_shared<OpaqueObject>(v.opaque())};
    default: return v;  // strings are immutable
  }
}

std::string to_string(const Value& v) {
  if (v.is_null()) return "null";
  switch (v.kind) {
    case ValueKind::Unit: return "void";
    case ValueKind::Int: return std::to_string(v.i);
    case ValueKind::Bool: return v.i ? "true" : "false";
    case ValueKind::Str: return "\"" + v.str() + "\"";
    case ValueKind::Array: {
      std::string out = "{";
      auto& elems = v.array().elems;
      for (size_t i = 0; i < elems.size(); ++i) {
        if (i) out += ", ";
        out += to_string(elems[i]);
      }
      return out + "}";
    }
    case ValueKind::Opaque: return "<" + v.opaque().type_name + " " + v.opaque().text + ">";
  }
  return "?";
}

const char* to_string(RuntimeErrorKind k) {
  switch (k) {
    case RuntimeErrorKind::DivByZero: return "divByZero";
    case RuntimeErrorKind::IndexOutOfBounds: return "indexOutOfBounds";
    case RuntimeErrorKind::NullRead: return "nullRead";
    case RuntimeErrorKind::BadParse: return "badParse";
    case RuntimeErrorKind::Io: return "io";
    case RuntimeErrorKind::StackOverflow: return "stackOverflow";
    case RuntimeErrorKind::OutOfMemory: return "outOfMemory";
  }
  return "?";
}

}  // namespace splice
