#include "splice/index/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "overloaded.hpp"

namespace splice {

std::map<std::string, int> TermBag::counts() const {
  std::map<std::string, int> out = other_counts;
  for (auto& [t, n] : name_counts) out[t] += n;
  return out;
}

int TermBag::boosted_tf(const std::string& term) const {
  int tf = 0;
  if (auto it = name_counts.find(term); it != name_counts.end()) tf += kNameBoost * it->second;
  if (auto it = other_counts.find(term); it != other_counts.end()) tf += it->second;
  return tf;
}

namespace {

void declared_names(const Stmt& s, std::vector<std::string>& out) {
  std::visit(overloaded{
                 [&](const ast::Let& x) { out.push_back(x.name); },
                 [&](const ast::If& x) {
                   declared_names(*x.then_branch, out);
                   if (x.else_branch) declared_names(*x.else_branch, out);
                 },
                 [&](const ast::While& x) { declared_names(*x.body, out); },
                 [&](const ast::For& x) {
                   if (x.init) declared_names(*x.init, out);
                   declared_names(*x.body, out);
                 },
                 [&](const ast::Block& x) {
                   for (auto& st : x.stmts) declared_names(*st, out);
                 },
                 [](const auto&) {},
             },
             s.node);
}

std::vector<std::string> identifier_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void add_terms(const std::string& token, const WordLists& words, std::map<std::string, int>& into) {
  for (auto& w : split_identifier(token, words.dictionary)) {
    if (w.size() < 2 || words.stop_words.count(w)) continue;
    if (std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) continue;
    std::string stem = porter_stem(w);
    if (stem.size() < 2) continue;
    ++into[stem];
  }
}

TermBag terms_of(const Program& fn, const std::vector<std::string>& texts, const WordLists& words) {
  TermBag bag;
  add_terms(fn.name, words, bag.name_counts);
  for (auto& t : texts)
    for (auto& tok : identifier_tokens(t)) add_terms(tok, words, bag.other_counts);
  for (auto& p : fn.params) add_terms(p.name, words, bag.other_counts);
  std::vector<std::string> locals;
  declared_names(*fn.body, locals);
  for (auto& l : locals) add_terms(l, words, bag.other_counts);
  return bag;
}

}  // namespace

TermBag extract_nl_terms(const Program& fn, const std::vector<Comment>& comments, const WordLists& words) {
  std::vector<std::string> texts;
  for (auto& c : comments) texts.push_back(c.text);
  return terms_of(fn, texts, words);
}

TermBag extract_nl_terms(const Draft& d, const WordLists& words) {
  std::vector<std::string> texts{d.comment};
  for (auto& c : d.inner_comments) texts.push_back(c.text);
  return terms_of(d.program, texts, words);
}

std::set<std::string> extract_names(const Program& fn) {
  std::vector<std::string> names{fn.name};
  for (auto& p : fn.params) names.push_back(p.name);
  declared_names(*fn.body, names);
  std::set<std::string> out;
  for (auto& n : names)
    for (auto& w : split_case(n)) out.insert(w);
  return out;
}

double cosine(const WeightVector& a, const WeightVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (auto& [t, w] : a) {
    na += w * w;
    if (auto it = b.find(t); it != b.end()) dot += w * it->second;
  }
  for (auto& [t, w] : b) nb += w * w;
  if (na == 0 || nb == 0) return 0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, 0.0, 1.0);
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0;
  size_t common = 0;
  for (auto& x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

}  // namespace splice
