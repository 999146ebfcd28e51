#include "splice/index/index.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace splice {

WeightVector CorpusIndex::weigh(const TermBag& bag) const {
  WeightVector out;
  double n = static_cast<double>(entries.size());
  for (auto& entry : bag.counts()) {
    const std::string& term = entry.first;
    auto df = doc_freq.find(term);
    if (df == doc_freq.end()) continue;
    out[term] = bag.boosted_tf(term) * std::log(n / df->second);
  }
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CorpusIndex build_index(const std::vector<SourceFile>& files, const SignatureTable& apis, IngestReport* report,
                        const WordLists& words) {
  CorpusIndex index;
  index.words = &words;
  std::vector<TermBag> bags;
  for (auto& f : files) {
    if (report) ++report->files;
    std::vector<FunctionChunk> chunks;
    try {
      chunks = split_functions(f.text);
    } catch (const Error& e) {
      if (report) report->skipped.emplace_back(f.path, e.what());
      continue;
    }
    for (auto& c : chunks) {
      std::string text = f.text.substr(c.begin, c.end - c.begin);
      try {
        Program p = parse_program(text, apis);
        if (has_holes(p)) throw Error("corpus function contains a hole");
        std::vector<Comment> comments = c.leading;
        for (auto& inner : scan_comments(text)) comments.push_back(inner);
        IndexEntry e;
        e.id = static_cast<uint32_t>(index.entries.size());
        e.path = f.path;
        e.begin = c.begin;
        e.end = c.end;
        e.source = std::move(text);
        e.names = extract_names(p);
        e.program = std::move(p);
        bags.push_back(extract_nl_terms(e.program, comments, words));
        index.entries.push_back(std::move(e));
      } catch (const Error& e) {
        if (report) report->skipped.emplace_back(f.path, "line " + std::to_string(c.line) + ": " + e.what());
      }
    }
  }
  for (auto& b : bags)
    for (auto& [t, n] : b.counts()) ++index.doc_freq[t];
  for (size_t i = 0; i < bags.size(); ++i) index.entries[i].weights = index.weigh(bags[i]);
  return index;
}

CorpusIndex build_index(const std::filesystem::path& dir, const SignatureTable& apis, IngestReport* report,
                        const WordLists& words) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (auto it = std::filesystem::recursive_directory_iterator(dir, ec); !ec && it != std::filesystem::end(it);
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".spl") paths.push_back(it->path());
  }
  if (ec) throw IoError("cannot scan " + dir.string() + ": " + ec.message());
  std::vector<SourceFile> files;
  for (auto& p : paths) files.push_back({std::filesystem::relative(p, dir).generic_string(), read_file(p)});
  std::sort(files.begin(), files.end(), [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return build_index(files, apis, report, words);
}

std::vector<Neighbor> knn_query(const CorpusIndex& index, const WeightVector& query, const std::set<std::string>& names,
                                size_t k, const QueryWeights& w) {
  if (index.entries.empty()) throw EmptyIndex();
  if (k == 0) throw Error("k must be at least 1");
  std::vector<Neighbor> all;
  all.reserve(index.entries.size());
  for (auto& e : index.entries)
    all.push_back({e.id, w.nl * cosine(query, e.weights) + w.names * jaccard(names, e.names)});
  size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(n), all.end(),
                    [](const Neighbor& a, const Neighbor& b) { return a.score != b.score ? a.score > b.score : a.id < b.id; });
  all.resize(n);
  return all;
}

std::vector<Neighbor> knn_query(const CorpusIndex& index, const Draft& draft, size_t k, const QueryWeights& w) {
  if (index.entries.empty()) throw EmptyIndex();
  return knn_query(index, index.weigh(extract_nl_terms(draft, *index.words)), extract_names(draft.program), k, w);
}

namespace {

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

[[noreturn]] void bad(const std::string& what) { throw IoError("malformed index file: " + what); }

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) bad(std::string("unexpected end of file, expected ") + what);
  return line;
}

// Reads "<key> <fields...>" and returns the fields.
std::istringstream keyed(std::istream& in, const std::string& key) {
  std::string line = expect_line(in, key.c_str());
  if (line.compare(0, key.size() + 1, key + " ") != 0) bad("expected '" + key + "', found '" + line + "'");
  return std::istringstream(line.substr(key.size() + 1));
}

template <class T>
T field(std::istringstream& s, const char* what) {
  T v;
  if (!(s >> v)) bad(std::string("bad ") + what);
  return v;
}

}  // namespace

void save_index(const CorpusIndex& index, std::ostream& out) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, index.words->dictionary_hash);
  out << "splice-index 1\n";
  out << "docs " << index.entries.size() << "\n";
  out << "dictionary " << hash << "\n";
  out << "df " << index.doc_freq.size() << "\n";
  for (auto& [t, n] : index.doc_freq) out << t << " " << n << "\n";
  for (auto& e : index.entries) {
    out << "entry " << e.id << " " << e.begin << " " << e.end << " " << e.path.size() << " " << e.path << "\n";
    out << "source " << e.source.size() << "\n" << e.source << "\n";
    out << "weights " << e.weights.size() << "\n";
    for (auto& [t, w] : e.weights) out << t << " " << hex_double(w) << "\n";
    out << "names " << e.names.size() << "\n";
    for (auto& n : e.names) out << n << "\n";
  }
  out << "end\n";
}

CorpusIndex load_index(std::istream& in, const SignatureTable& apis, const WordLists& words) {
  CorpusIndex index;
  index.words = &words;
  if (expect_line(in, "header") != "splice-index 1") bad("unsupported header");
  auto docs = keyed(in, "docs");
  size_t n = field<size_t>(docs, "document count");
  auto dict = keyed(in, "dictionary");
  std::string hash = field<std::string>(dict, "dictionary hash");
  if (std::strtoull(hash.c_str(), nullptr, 16) != words.dictionary_hash)
    throw IoError("index was built with a different dictionary");
  auto df = keyed(in, "df");
  size_t terms = field<size_t>(df, "term count");
  for (size_t i = 0; i < terms; ++i) {
    std::istringstream l(expect_line(in, "df entry"));
    std::string t = field<std::string>(l, "term");
    index.doc_freq[t] = field<uint32_t>(l, "document frequency");
  }
  for (size_t i = 0; i < n; ++i) {
    IndexEntry e;
    auto head = keyed(in, "entry");
    e.id = field<uint32_t>(head, "id");
    e.begin = field<uint32_t>(head, "begin");
    e.end = field<uint32_t>(head, "end");
    size_t plen = field<size_t>(head, "path length");
    head.get();
    e.path.resize(plen);
    if (!head.read(e.path.data(), static_cast<long>(plen))) bad("truncated path");
    if (e.id != i) bad("entries out of order");
    auto src = keyed(in, "source");
    size_t slen = field<size_t>(src, "source length");
    e.source.resize(slen);
    if (!in.read(e.source.data(), static_cast<long>(slen))) bad("truncated source");
    expect_line(in, "source terminator");
    auto ws = keyed(in, "weights");
    size_t nw = field<size_t>(ws, "weight count");
    for (size_t j = 0; j < nw; ++j) {
      std::istringstream l(expect_line(in, "weight"));
      std::string t = field<std::string>(l, "term");
      std::string v = field<std::string>(l, "weight");
      e.weights[t] = std::strtod(v.c_str(), nullptr);
    }
    auto ns = keyed(in, "names");
    size_t nn = field<size_t>(ns, "name count");
    for (size_t j = 0; j < nn; ++j) e.names.insert(expect_line(in, "name"));
    try {
      e.program = parse_program(e.source, apis);
    } catch (const Error& err) {
      bad("entry " + std::to_string(i) + ": " + err.what());
    }
    index.entries.push_back(std::move(e));
  }
  if (expect_line(in, "end") != "end") bad("missing end marker");
  return index;
}

void save_index(const CorpusIndex& index, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  save_index(index, out);
  if (!out) throw IoError("cannot write " + file.string());
}

CorpusIndex load_index(const std::filesystem::path& file, const SignatureTable& apis, const WordLists& words) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  return load_index(in, apis, words);
}

}  // namespace splice
