#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "splice/index/features.hpp"

namespace splice {

struct QueryWeights {
  double nl = 0.8;
  double names = 0.2;
};

struct IndexEntry {
  uint32_t id = 0;  // position in CorpusIndex::entries
  std::string path;
  uint32_t begin = 0;  // byte range of the function in its file
  uint32_t end = 0;
  std::string source;
  Program program;
  WeightVector weights;
  std::set<std::string> names;
};

struct CorpusIndex {
  std::vector<IndexEntry> entries;
  std::map<std::string, uint32_t> doc_freq;
  const WordLists* words = &WordLists::bundled();

  // tf-idf with the name boost: (5 * nameCount + otherCount) * ln(N / df).
  // Terms the corpus has never seen get no weight.
  WeightVector weigh(const TermBag& bag) const;
};

struct SourceFile {
  std::string path;
  std::string text;
};

struct IngestReport {
  size_t files = 0;
  std::vector<IngestError> skipped;
};

// Every top-level function becomes one entry, in file order. Functions that do
// not parse, type-check, or that contain holes are skipped and reported.
CorpusIndex build_index(const std::vector<SourceFile>& files, const SignatureTable& apis,
                        IngestReport* report = nullptr, const WordLists& words = WordLists::bundled());

// All *.spl files below `dir`, in path order; paths are stored relative to `dir`.
CorpusIndex build_index(const std::filesystem::path& dir, const SignatureTable& apis,
                        IngestReport* report = nullptr, const WordLists& words = WordLists::bundled());

struct Neighbor {
  uint32_t id = 0;
  double score = 0;
  bool operator==(const Neighbor&) const = default;
};

// score = w.nl * cosine + w.names * jaccard; best first, ties by lower id.
std::vector<Neighbor> knn_query(const CorpusIndex& index, const WeightVector& query, const std::set<std::string>& names,
                                size_t k, const QueryWeights& w);
std::vector<Neighbor> knn_query(const CorpusIndex& index, const Draft& draft, size_t k, const QueryWeights& w);

// Text format, version 1:
//   splice-index 1
//   docs <N>
//   dictionary <16 hex digits>
//   df <T>            followed by T lines "<term> <count>"
//   then per entry:
//   entry <id> <begin> <end> <path byte length> <path>
//   source <byte length>   followed by the raw source and a newline
//   weights <W>       followed by W lines "<term> <C99 hex float>"
//   names <M>         followed by M lines "<name>"
//   end
void save_index(const CorpusIndex& index, std::ostream& out);
CorpusIndex load_index(std::istream& in, const SignatureTable& apis, const WordLists& words = WordLists::bundled());

void save_index(const CorpusIndex& index, const std::filesystem::path& file);
CorpusIndex load_index(const std::filesystem::path& file, const SignatureTable& apis,
                       const WordLists& words = WordLists::bundled());

}  // namespace splice
