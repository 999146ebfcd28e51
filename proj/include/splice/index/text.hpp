#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace splice {

struct WordLists {
  std::unordered_set<std::string> dictionary;
  std::unordered_set<std::string> stop_words;
  uint64_t dictionary_hash = 0;

  // One word per line; blank lines ignored.
  static WordLists from_text(std::string_view dictionary, std::string_view stop_words);
  // The lists in data/, compiled into the library.
  static const WordLists& bundled();
};

// FNV-1a over the sorted dictionary words, newline-terminated.
uint64_t hash_dictionary(const std::unordered_set<std::string>& dictionary);

// Splits at underscores, lower-to-upper case changes, acronym ends
// ("XMLParser" -> XML, Parser) and letter/digit boundaries. Lowercases.
std::vector<std::string> split_case(std::string_view token);

// split_case, then any piece not in the dictionary is re-split left to right
// into the longest dictionary prefixes (at least two letters); whatever
// remains when no prefix matches is kept as is.
std::vector<std::string> split_identifier(std::string_view token, const std::unordered_set<std::string>& dictionary);

// Porter's suffix-stripping stemmer. Expects a lowercase word.
std::string porter_stem(std::string_view word);

}  // namespace splice
