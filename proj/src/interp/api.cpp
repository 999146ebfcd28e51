#include "splice/interp/api.hpp"

#include <json.hpp>

namespace splice {

VirtualFS parse_fs_manifest(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad manifest: ") + e.what());
  }
  if (!j.is_object() || !j.contains("files") || !j["files"].is_object())
    throw IoError("bad manifest: expected an object with a \"files\" object");
  std::map<std::string, std::string> files;
  for (auto& [path, content] : j["files"].items()) {
    if (!content.is_string()) throw IoError("bad manifest: content of " + path + " is not a string");
    files[path] = content.get<std::string>();
  }
  return VirtualFS(std::move(files));
}

void ApiRegistry::register_type(const std::string& name) { types_.insert(name); }

void ApiRegistry::register_api(FunctionSig sig, ApiBehavior behavior) {
  std::string name = sig.name;
  if (apis_.count(name)) throw DuplicateApi(name);
  apis_.emplace(name, ApiEntry{std::move(sig), std::move(behavior)});
}

const ApiEntry* ApiRegistry::find(std::string_view name) const {
  auto it = apis_.find(name);
  return it == apis_.end() ? nullptr : &it->second;
}

const FunctionSig* ApiRegistry::find_function(std::string_view name) const {
  auto e = find(name);
  return e ? &e->sig : nullptr;
}

bool ApiRegistry::has_opaque_type(std::string_view name) const { return types_.count(name) > 0; }

namespace {

const std::string& text_arg(const Value& v, const char* fn) {
  if (v.is_null()) throw RuntimeError(RuntimeErrorKind::NullRead, std::string(fn) + ": null string");
  return v.str();
}

const Value& handle_arg(const Value& v, const char* fn) {
  if (v.is_null()) throw RuntimeError(RuntimeErrorKind::NullRead, std::string(fn) + ": null handle");
  return v;
}

const std::string& file(const std::string& path, ApiContext& ctx) {
  if (auto f = ctx.fs.find(path)) return *f;
  throw RuntimeError(RuntimeErrorKind::Io, "no such file: " + path);
}

Value strings(const std::vector<std::string>& parts) {
  std::vector<Value> out;
  for (auto& p : parts) out.push_back(Value::string(p));
  return make_array(std::move(out));
}

// Literal-separator split; trailing empty fields are dropped.
std::vector<std::string> split_text(const std::string& s, const std::string& sep) {
  std::vector<std::string> parts;
  if (sep.empty()) {
    for (char c : s) parts.emplace_back(1, c);
    return parts;
  }
  size_t from = 0;
  while (true) {
    size_t at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      break;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + sep.size();
  }
  while (!parts.empty() && parts.back().empty()) parts.pop_back();
  return parts;
}

Value handle(const std::string& type, std::string text, int64_t number = 0) {
  auto o = std::make_shared<OpaqueObject>();
  o->type_name = type;
  o->text = std::move(text);
  o->number = number;
  return {ValueKind::Opaque, 0, std::move(o)};
}

int64_t count_faces(const std::string& content) {
  int64_t n = 0;
  for (size_t at = content.find("face"); at != std::string::npos; at = content.find("face", at + 4)) ++n;
  return n;
}

}  // namespace

ApiRegistry ApiRegistry::with_builtins() {
  ApiRegistry r;
  const Type I = Type::integer(), B = Type::boolean(), S = Type::string(), U = Type::unit();
  const Type SA = Type::array(S, 1), IA = Type::array(I, 1), IM = Type::array(I, 2), BA = Type::array(B, 1);

  r.register_api({"readFile", {S}, S}, [](const std::vector<Value>& a, ApiContext& ctx) {
    return Value::string(file(text_arg(a[0], "readFile"), ctx));
  });
  r.register_api({"readLines", {S}, SA}, [](const std::vector<Value>& a, ApiContext& ctx) {
    auto lines = split_text(file(text_arg(a[0], "readLines"), ctx), "\n");
    for (auto& l : lines)
      if (!l.empty() && l.back() == '\r') l.pop_back();
    return strings(lines);
  });
  r.register_api({"split", {S, S}, SA}, [](const std::vector<Value>& a, ApiContext&) {
    return strings(split_text(text_arg(a[0], "split"), text_arg(a[1], "split")));
  });
  r.register_api({"parseInt", {S}, I}, [](const std::vector<Value>& a, ApiContext&) {
    const std::string& s = text_arg(a[0], "parseInt");
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw RuntimeError(RuntimeErrorKind::BadParse, "parseInt: \"" + s + "\"");
    int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw RuntimeError(RuntimeErrorKind::BadParse, "parseInt: \"" + s + "\"");
      v = v * 10 + (s[i] - '0');
      if (v > 2147483648LL) throw RuntimeError(RuntimeErrorKind::BadParse, "parseInt: out of range");
    }
    if (s[0] == '-') v = -v;
    if (v > 2147483647LL) throw RuntimeError(RuntimeErrorKind::BadParse, "parseInt: out of range");
    return Value::integer(v);
  });
  r.register_api({"strlen", {S}, I}, [](const std::vector<Value>& a, ApiContext&) {
    return Value::integer(static_cast<int64_t>(text_arg(a[0], "strlen").size()));
  });
  auto eq = [](const std::vector<Value>& a, ApiContext&) {
    handle_arg(a[0], "eq");
    handle_arg(a[1], "eq");
    return Value::boolean(deep_equal(a[0], a[1]));
  };
  r.register_api({"eqIntArray", {IA, IA}, B}, eq);
  r.register_api({"eqIntMatrix", {IM, IM}, B}, eq);
  r.register_api({"eqBoolArray", {BA, BA}, B}, eq);

  for (const char* t : {"Classifier", "Mat", "Rects"}) r.register_type(t);
  const Type C = Type::opaque("Classifier"), M = Type::opaque("Mat"), R = Type::opaque("Rects");
  // Constructors return null for missing files, like their OpenCV counterparts.
  r.register_api({"newClassifier", {S}, C}, [](const std::vector<Value>& a, ApiContext& ctx) {
    const std::string& path = text_arg(a[0], "newClassifier");
    if (!ctx.fs.find(path)) return Value::null_of(ValueKind::Opaque);
    return handle("Classifier", path);
  });
  r.register_api({"imread", {S}, M}, [](const std::vector<Value>& a, ApiContext& ctx) {
    const std::string& path = text_arg(a[0], "imread");
    auto content = ctx.fs.find(path);
    if (!content) return Value::null_of(ValueKind::Opaque);
    return handle("Mat", *content);
  });
  r.register_api({"detectMultiScale", {C, M}, R}, [](const std::vector<Value>& a, ApiContext&) {
    handle_arg(a[0], "detectMultiScale");
    const Value& img = handle_arg(a[1], "detectMultiScale");
    return handle("Rects", "", count_faces(img.opaque().text));
  });
  r.register_api({"drawRects", {M, R}, U}, [](const std::vector<Value>& a, ApiContext&) {
    const Value& img = handle_arg(a[0], "drawRects");
    img.opaque().number += handle_arg(a[1], "drawRects").opaque().number;
    return Value::unit();
  });
  r.register_api({"imwrite", {S, M}, U}, [](const std::vector<Value>& a, ApiContext& ctx) {
    const std::string& path = text_arg(a[0], "imwrite");
    const Value& img = handle_arg(a[1], "imwrite");
    if (ctx.fs.find(path)) throw RuntimeError(RuntimeErrorKind::Io, "imwrite: " + path + " is read-only");
    ctx.written[path] = img.opaque().text + "#boxes=" + std::to_string(img.opaque().number);
    return Value::unit();
  });
  return r;
}

}  // namespace splice
