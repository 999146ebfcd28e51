#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "splice/engine/engine.hpp"
#include "splice/lang/parser.hpp"
#include "splice/lang/printer.hpp"

namespace testing {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path bench_dir() { return SPLICE_BENCH_DIR; }
inline std::filesystem::path corpus_dir() { return bench_dir() / "corpus"; }
inline std::filesystem::path drafts_dir() { return bench_dir() / "drafts"; }

inline const splice::ApiRegistry& apis() {
  static const splice::ApiRegistry r = splice::ApiRegistry::with_builtins();
  return r;
}

inline splice::Draft load_draft(const std::string& name) {
  auto dir = drafts_dir();
  return splice::parse_draft(slurp(dir / (name + ".spl")), apis(),
                             [dir](const std::string& p) { return slurp(dir / p); });
}

inline splice::VirtualFS load_fs(const std::string& name) {
  auto p = drafts_dir() / (name + ".fs.json");
  if (!std::filesystem::exists(p)) return {};
  return splice::parse_fs_manifest(slurp(p));
}

inline const splice::CorpusIndex& bundled_index() {
  static const splice::CorpusIndex idx = splice::build_index(corpus_dir(), apis());
  return idx;
}

inline const char* kSieveDonor = R"(void sieve(boolean[] p) {
  p[1] = false;
  int l = p.length - 1;
  for (int i = 2; i <= l; i++)
    p[i] = true;
  for (int i = 2; i <= l / 2; i++)
    for (int j = 2; j <= l / i; j++)
      p[i * j] = false;
})";

inline const char* kSieveDraft = R"(/* COMMENT:
 * use sieve of eratosthenes
 * to test primality
 * TEST:
 * __solution__
 * return sieve(1) == false &&
 *        sieve(2) == true &&
 *        sieve(29) == true;
 */
boolean sieve(int num) {
  boolean[] prime = new boolean[num + 1];
  for (int i = ??; i <= num; ++i)
    prime[i] = ??;
  // build a table
  ??;
  return prime[num];
})";

inline const char* kSieveCompleted = R"(boolean sieve(int num) {
  boolean[] prime = new boolean[num + 1];
  for (int i = 2; i <= num; i++)
    prime[i] = true;
  for (int i = 2; i <= num / 2; i++)
    for (int j = 2; j <= num / i; j++)
      prime[i * j] = false;
  return prime[num];
})";

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Random well-typed programs over int and int[] locals, for round-trip and
// desugaring properties.
class ProgramGen {
 public:
  explicit ProgramGen(uint32_t seed) : rng_(seed) {}

  std::string program() {
    vars_ = {"a", "b"};
    std::string body;
    int n = pick(1, 5);
    for (int i = 0; i < n; ++i) body += stmt(2);
    std::string result = int_expr(2);
    return "int f(int a, int b) {\n  int[] xs = new int[8];\n" + body + "  return " + result + ";\n}\n";
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string var() { return vars_[static_cast<size_t>(pick(0, static_cast<int>(vars_.size()) - 1))]; }

  std::string int_expr(int depth) {
    int c = depth <= 0 ? pick(0, 2) : pick(0, 5);
    switch (c) {
      case 0: return std::to_string(pick(0, 9));
      case 1: return var();
      case 2: return "xs[" + std::to_string(pick(0, 7)) + "]";
      case 3: {
        static const char* ops[] = {"+", "-", "*"};
        std::string l = int_expr(depth - 1);
        std::string op = ops[pick(0, 2)];
        return "(" + l + " " + op + " " + int_expr(depth - 1) + ")";
      }
      case 4: return "-(" + int_expr(depth - 1) + ")";
      default: return "xs.length";
    }
  }

  std::string bool_expr(int depth) {
    static const char* cmp[] = {"<", "<=", "==", "!=", ">", ">="};
    if (depth <= 0 || pick(0, 2) > 0) {
      std::string l = int_expr(1);
      std::string op = cmp[pick(0, 5)];
      return l + " " + op + " " + int_expr(1);
    }
    std::string l = bool_expr(depth - 1);
    std::string op = pick(0, 1) ? " && " : " || ";
    return "(" + l + op + bool_expr(depth - 1) + ")";
  }

  std::string stmt(int depth) {
    int c = depth <= 0 ? pick(0, 1) : pick(0, 4);
    switch (c) {
      case 0: {
        std::string init = int_expr(2);
        std::string name = "v" + std::to_string(counter_++);
        std::string s = "int " + name + " = " + init + ";\n";
        vars_.push_back(name);
        return s;
      }
      case 1: {
        std::string v = var();
        if (v[0] == 'k') v = "a";  // loop counters stay untouched
        std::string rhs = int_expr(2);
        return v + " = " + rhs + ";\n";
      }
      case 2: {
        auto saved = vars_;
        std::string guard = bool_expr(1);
        std::string s = "if (" + guard + ") {\n" + stmt(depth - 1) + "}";
        vars_ = saved;
        if (pick(0, 1)) {
          s += " else {\n" + stmt(depth - 1) + "}";
          vars_ = saved;
        }
        return s + "\n";
      }
      case 3: {
        auto saved = vars_;
        std::string k = "k" + std::to_string(counter_++);
        vars_.push_back(k);
        std::string bound = std::to_string(pick(1, 4));
        std::string s = "for (int " + k + " = 0; " + k + " < " + bound + "; " + k + "++) {\n";
        s += stmt(depth - 1) + "}\n";
        vars_ = saved;
        return s;
      }
      default: {
        std::string at = std::to_string(pick(0, 7));
        return "xs[" + at + "] = " + int_expr(2) + ";\n";
      }
    }
  }

  std::mt19937 rng_;
  std::vector<std::string> vars_;
  int counter_ = 0;
};

// Random corpora of small functions whose names and comments come from a
// shared vocabulary, so that queries overlap some entries and not others.
inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "sieve", "prime", "table", "matrix", "sum",    "count",  "search", "sort",  "array", "value",
      "index", "read",  "write", "file",   "image",  "face",   "list",   "row",   "column", "total",
      "number", "digit", "merge", "binary", "insert", "find",  "max",    "min",   "average", "parse"};
  return words;
}

inline std::string camel(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    std::string w = parts[i];
    if (i > 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    out += w;
  }
  return out;
}

class CorpusGen {
 public:
  explicit CorpusGen(uint32_t seed) : rng_(seed) {}

  std::string word() { return vocabulary()[static_cast<size_t>(pick(0, static_cast<int>(vocabulary().size()) - 1))]; }

  std::string function() {
    std::string name = camel({word(), word()}) + std::to_string(serial_++);
    std::string a = word(), b = camel({word(), "of"});
    if (b == a) b += "2";
    std::string local = camel({"my", word()});
    std::string text;
    if (pick(0, 2) > 0) text += "// " + word() + " the " + word() + " " + word() + "\n";
    text += "int " + name + "(int " + a + ", int " + b + ") {\n  int " + local + " = " + a + ";\n  return " + local +
            " + " + b + ";\n}\n";
    return text;
  }

  std::vector<splice::SourceFile> corpus(size_t functions) {
    std::vector<splice::SourceFile> files;
    size_t made = 0;
    while (made < functions) {
      std::string text;
      int per_file = pick(1, 4);
      for (int i = 0; i < per_file && made < functions; ++i, ++made) text += function() + "\n";
      files.push_back({"f" + std::to_string(files.size()) + ".spl", text});
    }
    return files;
  }

  std::string draft() {
    std::string comment = word() + " " + word() + " " + word();
    std::string name = camel({word(), word()});
    return "/* COMMENT:\n * " + comment + "\n * TEST:\n * return " + name + "(1) == 1;\n */\nint " + name + "(int " +
           word() + "Arg) {\n  int t = 1;\n  return t;\n}\n";
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937 rng_;
  int serial_ = 0;
};

// Scores every entry directly from its stored features and stable-sorts them.
inline std::vector<splice::Neighbor> brute_force_knn(const splice::CorpusIndex& idx, const splice::WeightVector& q,
                                                     const std::set<std::string>& names, size_t k,
                                                     const splice::QueryWeights& w) {
  std::vector<splice::Neighbor> all;
  for (auto& e : idx.entries) {
    double dot = 0, nq = 0, ne = 0;
    for (auto& [t, x] : q) {
      nq += x * x;
      auto it = e.weights.find(t);
      if (it != e.weights.end()) dot += x * it->second;
    }
    for (auto& [t, x] : e.weights) ne += x * x;
    double cos = (nq == 0 || ne == 0) ? 0.0 : std::clamp(dot / (std::sqrt(nq) * std::sqrt(ne)), 0.0, 1.0);
    size_t common = 0;
    for (auto& n : names) common += e.names.count(n);
    size_t uni = names.size() + e.names.size() - common;
    double jac = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
    all.push_back({e.id, w.nl * cos + w.names * jac});
  }
  std::stable_sort(all.begin(), all.end(), [](const splice::Neighbor& a, const splice::Neighbor& b) {
    return a.score > b.score;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace testing
