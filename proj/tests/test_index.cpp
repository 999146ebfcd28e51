#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "index_oracle.hpp"

using namespace splice;
using testing::apis;
using testing::OracleIndex;

namespace {

const WordLists& words() { return WordLists::bundled(); }

std::vector<std::string> split(const std::string& token) { return split_identifier(token, words().dictionary); }

Draft sieve_draft() {
  return parse_draft(testing::kSieveDraft, apis(), [](const std::string&) { return std::string(); });
}

}  // namespace

TEST_CASE("identifier splitting") {
  CHECK(split("faceDetector") == std::vector<std::string>{"face", "detector"});
  CHECK(split("read_csv") == std::vector<std::string>{"read", "csv"});
  CHECK(split("binsearch") == std::vector<std::string>{"bin", "search"});
  CHECK(split_case("XMLParser") == std::vector<std::string>{"xml", "parser"});
  CHECK(split("matrix2csv") == std::vector<std::string>{"matrix", "2", "csv"});
  CHECK(split_case("lcsLength") == std::vector<std::string>{"lcs", "length"});
}

TEST_CASE("greedy splitting against a known dictionary") {
  std::unordered_set<std::string> dict = {"bin", "search", "sea", "rch"};
  CHECK(split_identifier("binsearch", dict) == std::vector<std::string>{"bin", "search"});
  CHECK(split_identifier("binxyz", dict) == std::vector<std::string>{"bin", "xyz"});
  CHECK(split_identifier("qq", dict) == std::vector<std::string>{"qq"});
}

TEST_CASE("stems of the sieve draft") {
  TermBag bag = extract_nl_terms(sieve_draft(), words());
  auto counts = bag.counts();
  for (const char* w : {"sieve", "eratosthenes", "primality", "test", "prime", "num", "build", "table"})
    CHECK_MESSAGE(counts.count(porter_stem(w)) == 1, w);
  for (const char* stop : {"use", "to", "a"}) CHECK(counts.count(stop) == 0);
}

TEST_CASE("a one-letter function with no comments has no terms") {
  Program p = parse_program_syntax("int f() { return 0; }");
  CHECK(extract_nl_terms(p, {}, words()).empty());
}

TEST_CASE("golden stems") {
  Program p = parse_program_syntax("void testPrimality() { }");
  Comment c{"prime sieve", {}, false};
  TermBag bag = extract_nl_terms(p, {c}, words());
  std::map<std::string, int> want = {{"test", 1}, {"primal", 1}, {"prime", 1}, {"siev", 1}};
  CHECK(bag.counts() == want);
  CHECK(bag.name_counts == std::map<std::string, int>{{"test", 1}, {"primal", 1}});
}

TEST_CASE("name sets") {
  Program sieve = parse_program(testing::kSieveDonor, apis());
  CHECK(extract_names(sieve) == std::set<std::string>{"sieve", "p", "l", "i", "j"});
  Program one = parse_program("int oneLiner() { int x = 1; return x; }", apis());
  CHECK(extract_names(one) == std::set<std::string>{"one", "liner", "x"});
  Program a = parse_program("int total(int count) { int acc = count; return acc; }", apis());
  Program b = parse_program("int total(int number) { int sum = number; return sum; }", apis());
  CHECK(jaccard(extract_names(a), extract_names(b)) < 1.0);
}

TEST_CASE("idf on a two-function corpus") {
  std::vector<SourceFile> files = {
      {"a.spl", "// shared lonely\nint first(int x) { return x; }\n"},
      {"b.spl", "// shared\nint second(int y) { return y; }\n"},
  };
  CorpusIndex idx = build_index(files, apis());
  REQUIRE(idx.entries.size() == 2);
  CHECK(idx.entries[0].weights.at("share") == 0.0);
  CHECK(idx.entries[1].weights.at("share") == 0.0);
  CHECK(idx.entries[0].weights.at("lone") == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(idx.entries[0].weights.at("lone") == std::log(2.0));
}

TEST_CASE("name terms get the boost") {
  std::vector<SourceFile> files = {
      {"a.spl", "// sieve test\nint sieve(int v) { return v; }\n"},
      {"b.spl", "// other words\nint other(int w) { return w; }\n"},
  };
  CorpusIndex idx = build_index(files, apis());
  auto& w = idx.entries[0].weights;
  CHECK(std::fabs(w.at("siev") / w.at("test") - 6.0) < 1e-9);
}

TEST_CASE("cosine and jaccard") {
  WeightVector a{{"x", 1}, {"y", 1}}, b{{"x", 1}}, c{{"z", 2}};
  CHECK(cosine(a, a) == doctest::Approx(1.0));
  CHECK(cosine(a, c) == 0.0);
  CHECK(cosine(a, b) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(cosine({}, a) == 0.0);
  std::set<std::string> s1{"a", "b"}, s2{"b", "c"}, s3{"x"};
  CHECK(jaccard(s1, s1) == 1.0);
  CHECK(jaccard(s1, s3) == 0.0);
  CHECK(jaccard(s1, s2) == doctest::Approx(1.0 / 3.0));
  CHECK(jaccard({}, {}) == 0.0);
}

TEST_CASE("similarities are symmetric and bounded") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> w(0.0, 3.0);
  std::uniform_int_distribution<int> term(0, 9);
  for (int trial = 0; trial < 300; ++trial) {
    WeightVector a, b;
    std::set<std::string> sa, sb;
    for (int i = 0; i < 5; ++i) {
      a["t" + std::to_string(term(rng))] = w(rng);
      b["t" + std::to_string(term(rng))] = w(rng);
      sa.insert("n" + std::to_string(term(rng)));
      sb.insert("n" + std::to_string(term(rng)));
    }
    double c1 = cosine(a, b), c2 = cosine(b, a);
    CHECK(c1 == doctest::Approx(c2));
    CHECK(c1 >= 0.0);
    CHECK(c1 <= 1.0);
    CHECK(jaccard(sa, sb) == jaccard(sb, sa));
    CHECK(jaccard(sa, sb) >= 0.0);
    CHECK(jaccard(sa, sb) <= 1.0);
  }
}

TEST_CASE("weights match an independent tf-idf computation") {
  for (uint32_t seed = 0; seed < 20; ++seed) {
    testing::CorpusGen gen(seed);
    auto files = gen.corpus(30);
    CorpusIndex idx = build_index(files, apis());
    OracleIndex oracle(files);
    REQUIRE(idx.entries.size() == oracle.bags.size());
    for (auto& [t, n] : oracle.df) CHECK(idx.doc_freq.at(t) == static_cast<uint32_t>(n));
    for (size_t i = 0; i < idx.entries.size(); ++i) CHECK(idx.entries[i].weights == oracle.weigh(oracle.bags[i]));
    for (auto& [t, n] : idx.doc_freq) CHECK(n <= idx.entries.size());
  }
}

TEST_CASE("k larger than the corpus returns everything in order") {
  auto& idx = testing::bundled_index();
  auto all = knn_query(idx, sieve_draft(), idx.entries.size() + 10, {});
  CHECK(all.size() == idx.entries.size());
  for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].score >= all[i].score);
}

TEST_CASE("the planted sieve is among the nearest donors of the sieve draft") {
  auto& idx = testing::bundled_index();
  Draft d = sieve_draft();
  auto top = knn_query(idx, d, 5, {});
  auto oracle = testing::brute_force_knn(idx, idx.weigh(extract_nl_terms(d, words())), extract_names(d.program), 5, {});
  CHECK(top == oracle);
  bool found = false;
  for (auto& n : top) found |= idx.entries[n.id].program.name == "sieve";
  CHECK(found);
}

TEST_CASE("identical entries rank adjacently, lower id first") {
  std::string fn = "// sieve of primes\nint sieveTable(int n) { return n; }\n";
  std::vector<SourceFile> files = {{"a.spl", "// unrelated\nint other(int q) { return q; }\n"},
                                   {"b.spl", fn},
                                   {"c.spl", fn}};
  CorpusIndex idx = build_index(files, apis());
  auto top = knn_query(idx, sieve_draft(), 3, {});
  REQUIRE(top.size() == 3);
  CHECK(top[0].id == 1);
  CHECK(top[1].id == 2);
  CHECK(top[0].score == top[1].score);
}

TEST_CASE("knn matches brute force on random corpora") {
  for (uint32_t seed = 0; seed < 40; ++seed) {
    testing::CorpusGen gen(seed);
    auto files = gen.corpus(static_cast<size_t>(gen.pick(1, 200)));
    CorpusIndex idx = build_index(files, apis());
    Draft d = parse_draft(gen.draft(), apis(), {});
    QueryWeights w;
    w.nl = gen.pick(0, 10) / 10.0;
    w.names = 1.0 - w.nl;
    size_t k = static_cast<size_t>(gen.pick(1, 12));
    OracleIndex oracle(files);
    auto q = oracle.weigh(extract_nl_terms(d, words()));
    CHECK(knn_query(idx, d, k, w) == testing::brute_force_knn(idx, q, extract_names(d.program), k, w));
  }
}

TEST_CASE("scaling every weight leaves the ranking unchanged") {
  testing::CorpusGen gen(5);
  CorpusIndex idx = build_index(gen.corpus(80), apis());
  Draft d = parse_draft(gen.draft(), apis(), {});
  WeightVector q = idx.weigh(extract_nl_terms(d, words()));
  auto names = extract_names(d.program);
  auto before = knn_query(idx, q, names, 80, {});
  CorpusIndex scaled = idx;
  for (auto& e : scaled.entries)
    for (auto& [t, x] : e.weights) x *= 4.0;
  for (auto& [t, x] : q) x *= 4.0;
  auto after = knn_query(scaled, q, names, 80, {});
  REQUIRE(before.size() == after.size());
  for (size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].id == after[i].id);
    CHECK(before[i].score == doctest::Approx(after[i].score));
  }
}

TEST_CASE("save and load are lossless") {
  auto& idx = testing::bundled_index();
  std::stringstream buf;
  save_index(idx, buf);
  CorpusIndex back = load_index(buf, apis());
  REQUIRE(back.entries.size() == idx.entries.size());
  CHECK(back.doc_freq == idx.doc_freq);
  for (size_t i = 0; i < idx.entries.size(); ++i) {
    auto& a = idx.entries[i];
    auto& b = back.entries[i];
    CHECK(a.id == b.id);
    CHECK(a.path == b.path);
    CHECK(a.begin == b.begin);
    CHECK(a.end == b.end);
    CHECK(a.source == b.source);
    CHECK(a.weights == b.weights);
    CHECK(a.names == b.names);
    CHECK(structurally_equal(a.program, b.program));
  }
  std::stringstream again;
  save_index(back, again);
  CHECK(again.str() == buf.str());
}

TEST_CASE("load rejects a damaged file") {
  std::stringstream bad("splice-index 1\ndocs 3\n");
  CHECK_THROWS_AS(load_index(bad, apis()), IoError);
}

TEST_CASE("ingestion skips broken functions and keeps going") {
  std::vector<SourceFile> files = {
      {"a.spl", "int good(int x) { return x; }\nint broken(int x) { return x + ; }\nint fine() { return 2; }\n"},
      {"b.spl", "int holey(int x) { return ??; }\n"},
      {"c.spl", "int typo(int x) { return true; }\n"},
  };
  IngestReport report;
  CorpusIndex idx = build_index(files, apis(), &report);
  CHECK(idx.entries.size() == 2);
  CHECK(report.skipped.size() == 3);
  CHECK(report.skipped[0].file() == "a.spl");
}

TEST_CASE("an empty index refuses queries") {
  CorpusIndex empty;
  CHECK_THROWS_AS(knn_query(empty, sieve_draft(), 5, {}), EmptyIndex);
}
