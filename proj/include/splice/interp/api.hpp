#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "splice/interp/value.hpp"
#include "splice/lang/typecheck.hpp"

namespace splice {

// Read-only file contents visible to interpreted programs.
class VirtualFS {
 public:
  VirtualFS() = default;
  explicit VirtualFS(std::map<std::string, std::string> files) : files_(std::move(files)) {}

  const std::string* find(const std::string& path) const {
    auto it = files_.find(path);
    return it == files_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, std::string>& files() const { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

// Manifest format: {"files": {"<path>": "<content>", ...}}
VirtualFS parse_fs_manifest(std::string_view json_text);

// Per-evaluation state handed to API behaviours.
struct ApiContext {
  const VirtualFS& fs;
  std::map<std::string, std::string> written;  // files produced during this evaluation
};

using ApiBehavior = std::function<Value(const std::vector<Value>& args, ApiContext& ctx)>;

struct ApiEntry {
  FunctionSig sig;
  ApiBehavior behavior;
};

class ApiRegistry : public SignatureTable {
 public:
  // Makes `name` usable as an opaque type in signatures and declarations.
  void register_type(const std::string& name);
  void register_api(FunctionSig sig, ApiBehavior behavior);

  const ApiEntry* find(std::string_view name) const;
  const FunctionSig* find_function(std::string_view name) const override;
  bool has_opaque_type(std::string_view name) const override;

  // readFile, readLines, split, parseInt, strlen, eqIntArray, eqIntMatrix,
  // eqBoolArray, and a small mock image-processing API (Classifier, Mat,
  // Rects: newClassifier, imread, detectMultiScale, drawRects, imwrite).
  static ApiRegistry with_builtins();

 private:
  std::map<std::string, ApiEntry, std::less<>> apis_;
  std::set<std::string, std::less<>> types_;
};

}  // namespace splice
