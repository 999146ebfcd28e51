#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "splice/index/text.hpp"
#include "splice/lang/draft.hpp"

namespace splice {

// Term frequency multiplier for terms that come from the function name.
constexpr int kNameBoost = 5;

// Stemmed NL terms of one function. Occurrences in the function name are
// counted apart from the rest so that the name boost can be applied.
struct TermBag {
  std::map<std::string, int> name_counts;
  std::map<std::string, int> other_counts;

  std::map<std::string, int> counts() const;  // raw occurrences, name and other together
  int boosted_tf(const std::string& term) const;
  bool empty() const { return name_counts.empty() && other_counts.empty(); }
};

using WeightVector = std::map<std::string, double>;

// Function name, comment words, parameter and local variable names: split,
// lowercased, stop words and one-character words dropped, stemmed.
TermBag extract_nl_terms(const Program& fn, const std::vector<Comment>& comments, const WordLists& words);

// Query terms of a draft: its COMMENT section, the comments inside the
// function and the function's own identifiers. TEST code is not used.
TermBag extract_nl_terms(const Draft& d, const WordLists& words);

// Variable and function names split at underscores/case changes and lowercased.
std::set<std::string> extract_names(const Program& fn);

double cosine(const WeightVector& a, const WeightVector& b);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace splice
