#pragma once

#include <cmath>
#include <map>

#include "helpers.hpp"

namespace testing {

// tf-idf recomputed from the raw term bags of freshly parsed functions.
struct OracleIndex {
  std::vector<splice::TermBag> bags;
  std::map<std::string, int> df;

  explicit OracleIndex(const std::vector<splice::SourceFile>& files) {
    for (auto& f : files)
      for (auto& chunk : splice::split_functions(f.text)) {
        std::string_view body(f.text.data() + chunk.begin, chunk.end - chunk.begin);
        splice::Program p = splice::parse_program_syntax(body);
        bags.push_back(splice::extract_nl_terms(p, chunk.leading, splice::WordLists::bundled()));
      }
    for (auto& b : bags)
      for (auto& [t, c] : b.counts()) ++df[t];
  }

  splice::WeightVector weigh(const splice::TermBag& bag) const {
    splice::WeightVector out;
    double n = static_cast<double>(bags.size());
    for (auto& [t, c] : bag.counts()) {
      auto it = df.find(t);
      if (it == df.end()) continue;
      int name = bag.name_counts.count(t) ? bag.name_counts.at(t) : 0;
      int other = bag.other_counts.count(t) ? bag.other_counts.at(t) : 0;
      out[t] = (5 * name + other) * std::log(n / it->second);
    }
    return out;
  }
};

}  // namespace testing
