#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splice/codelet/codelet.hpp"
#include "splice/index/index.hpp"
#include "splice/interp/interpreter.hpp"

namespace splice {

struct SpliceConfig {
  size_t k = 5;
  QueryWeights weights;
  size_t max_solutions = 3;                                 // per donor and in total
  std::chrono::duration<double> search_time_limit{300.0};  // zero or negative: no limit
  Limits test_limits;
  bool type_matching = true;
  bool role_matching = true;
  bool constant_adaptation = false;
  size_t adapt_budget = 16;  // variants per codelet, the codelet itself included
  size_t max_window = 8;
  unsigned workers = 0;             // 0: hardware concurrency
  uint64_t donor_step_budget = 0;   // interpreter steps per donor; 0: unbounded
};

struct SpliceStats {
  uint64_t candidates_evaluated = 0;  // complete programs reached by merge
  uint64_t tests_run = 0;             // requirement checks actually executed
  double wall_time = 0;               // seconds

  SpliceStats& operator+=(const SpliceStats& o) {
    candidates_evaluated += o.candidates_evaluated;
    tests_run += o.tests_run;
    wall_time += o.wall_time;
    return *this;
  }
};

struct RenamedRef {
  std::string from;  // donor name
  std::string to;    // draft name
  bool is_function = false;
  bool operator==(const RenamedRef&) const = default;
};

struct Solution {
  Program program;
  std::string text;  // pretty-printed program
  uint32_t donor = 0;
  size_t donor_rank = 0;        // 1 = nearest neighbour
  size_t discovery_order = 0;   // 0-based, within the donor's own enumeration
  std::vector<RenamedRef> renamings;
};

struct SpliceResult {
  std::vector<Solution> solutions;
  SpliceStats stats;
  bool timed_out = false;
};

// Everything the search needs besides the draft and the donors.
struct SpliceEnv {
  const ApiRegistry& apis;
  const VirtualFS& fs;
};

// A donor prepared for splicing: desugared, with its codelets extracted.
struct Donor {
  uint32_t id = 0;
  size_t rank = 0;
  Program program;  // desugared
  std::vector<ExprCodelet> exprs;
  std::vector<StmtCodelet> windows;
};

Donor prepare_donor(const Program& p, const SignatureTable& apis, size_t max_window, uint32_t id = 0,
                    size_t rank = 0);

// Type and role pruning for one hole. Statement holes accept a window when each
// of its references missing from the hole's scope has a same-typed stand-in
// there (type matching on) and always otherwise. Throws KindMismatch when the
// codelet kind differs from the hole kind.
bool valid(const Draft& d, HoleId hole, const ExprCodelet& c, const SpliceConfig& cfg);
bool valid(const Draft& d, HoleId hole, const StmtCodelet& c, const SpliceConfig& cfg);

using CodeletRef = std::variant<const ExprCodelet*, const StmtCodelet*>;

// One codelet per hole, in the order of `fill_order(d)`.
struct Candidate {
  std::vector<CodeletRef> codelets;
  uint32_t donor = 0;
};

// Holes in source order.
std::vector<HoleId> fill_order(const Draft& d);

// Enumerates complete assignments depth-first, holes in source order and
// codelets smallest first. The visitor returns false to stop the enumeration.
void fill(const Draft& d, const Donor& donor, const SpliceConfig& cfg,
          const std::function<bool(const Candidate&)>& visit);

// Draft program with the holes replaced by the (renamed) codelets.
// Returns nullopt when a renaming would be captured inside a codelet.
std::optional<Program> instantiate(const Draft& d, const Candidate& c, const Renaming& r);

// References of the candidate's codelets that the draft does not define at the
// corresponding hole, in first-occurrence order.
std::vector<FreeRef> undefined_refs(const Draft& d, const Candidate& c);

// Per-search state shared by successive merge calls on one donor.
struct MergeContext {
  SpliceStats stats;
  std::map<std::string, bool> verdicts;  // program text -> requirement verdict
  uint64_t steps = 0;
  std::function<bool()> should_stop;  // polled before each complete program
  bool stopped = false;               // set once should_stop returned true
};

struct MergeResult {
  Program program;
  std::string text;
  std::vector<RenamedRef> renamings;
};

// Tries the renamings of the candidate's undefined references depth-first and
// returns the first program that type-checks and satisfies the requirement.
std::optional<MergeResult> merge(const Candidate& c, const Draft& d, const SpliceConfig& cfg, const SpliceEnv& env,
                                 MergeContext& ctx);

// True when some block has a statement after a return.
bool has_redundant_return(const Program& p);
std::vector<Solution> post_filter(std::vector<Solution> sols);

struct DonorSearch {
  std::vector<MergeResult> solutions;  // discovery order
  SpliceStats stats;
  bool stopped_early = false;  // deadline or step budget hit
};

// fill -> merge on one donor, until `max_solutions` distinct programs pass.
DonorSearch search_donor(const Draft& d, const Donor& donor, const SpliceConfig& cfg, const SpliceEnv& env,
                         const std::function<bool()>& cancelled = {});

SpliceResult splice(const Draft& d, const CorpusIndex& index, const SpliceConfig& cfg, const SpliceEnv& env);

struct Switches {
  bool type_matching = true;
  bool role_matching = true;
};
SpliceResult ablation_run(const Draft& d, const CorpusIndex& index, const SpliceConfig& cfg, const SpliceEnv& env,
                          const Switches& switches);

struct Precision {
  size_t high_quality = 0;
  size_t donors = 0;
  double value() const { return donors ? static_cast<double>(high_quality) / static_cast<double>(donors) : 0.0; }
};

// Fraction of the top-k donors that complete the draft on their own, searched
// without a time limit but with a 10^9 interpreter-step budget per donor.
Precision measure_precision(const Draft& d, const CorpusIndex& index, size_t k, const QueryWeights& w,
                            const SpliceEnv& env, unsigned workers = 0);

}  // namespace splice
