#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "splice/errors.hpp"
#include "splice/lang/type.hpp"

namespace splice {

enum class ValueKind : uint8_t { Unit, Int, Bool, Str, Array, Opaque };

struct HeapObject {
  virtual ~HeapObject() = default;
};

// Runtime value. Strings, arrays and opaque handles are references and may be
// null (the default element of `new String[n]`, or a failed API constructor).
struct Value {
  ValueKind kind = ValueKind::Unit;
  int64_t i = 0;  // Int and Bool payload
  std::shared_ptr<HeapObject> ref;

  static Value unit() { return {}; }
  static Value integer(int64_t v) { return {ValueKind::Int, v, nullptr}; }
  static Value boolean(bool v) { return {ValueKind::Bool, v ? 1 : 0, nullptr}; }
  static Value string(std::string s);
  static Value null_of(ValueKind k) { return {k, 0, nullptr}; }

  bool is_null() const { return ref == nullptr && (kind == ValueKind::Str || kind == ValueKind::Array || kind == ValueKind::Opaque); }
  const std::string& str() const;
  struct ArrayObject& array() const;
  struct OpaqueObject& opaque() const;
};

struct StringObject : HeapObject {
  std::string text;
  explicit StringObject(std::string t) : text(std::move(t)) {}
};

struct ArrayObject : HeapObject {
  int dims = 1;
  std::vector<Value> elems;  // rows of a 2-d array are 1-d ArrayObjects
};

// State of a mock API handle. The API that created it decides what the fields mean.
struct OpaqueObject : HeapObject {
  std::string type_name;
  std::string text;
  int64_t number = 0;
};

inline Value Value::string(std::string s) {
  return {ValueKind::Str, 0, std::make_shared<StringObject>(std::move(s))};
}
inline const std::string& Value::str() const { return static_cast<const StringObject&>(*ref).text; }
inline ArrayObject& Value::array() const { return static_cast<ArrayObject&>(*ref); }
inline OpaqueObject& Value::opaque() const { return static_cast<OpaqueObject&>(*ref); }

Value make_array(std::vector<Value> elems, int dims = 1);

// Structural equality; arrays and handles compare by contents.
bool deep_equal(const Value& a, const Value& b);

// Copy with no storage shared with `v`.
Value deep_copy(const Value& v);

// Source-like rendering: 3, true, "s", {1, 2}, null, <Mat photo.png>.
std::string to_string(const Value& v);

enum class RuntimeErrorKind { DivByZero, IndexOutOfBounds, NullRead, BadParse, Io, StackOverflow, OutOfMemory };
const char* to_string(RuntimeErrorKind k);

// Raised inside evaluation; never escapes eval().
class RuntimeError : public Error {
 public:
  RuntimeError(RuntimeErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  RuntimeErrorKind kind() const { return kind_; }

 private:
  RuntimeErrorKind kind_;
};

}  // namespace splice
