#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "splice/splice.h"

namespace {

enum Exit { kSolved = 0, kNoSolution = 1, kUsage = 2, kTimeout = 3 };

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using IndexPtr = std::unique_ptr<splice_index, Deleter<splice_index, splice_index_free>>;
using DraftPtr = std::unique_ptr<splice_draft, Deleter<splice_draft, splice_draft_free>>;
using FsPtr = std::unique_ptr<splice_fs, Deleter<splice_fs, splice_fs_free>>;
using ConfigPtr = std::unique_ptr<splice_config, Deleter<splice_config, splice_config_free>>;
using NeighborsPtr = std::unique_ptr<splice_neighbors, Deleter<splice_neighbors, splice_neighbors_free>>;
using ResultPtr = std::unique_ptr<splice_result, Deleter<splice_result, splice_result_free>>;

struct Failure {
  int code;
};

void check(splice_status s, const std::string& what) {
  if (s == SPLICE_OK) return;
  std::cerr << "error: " << what << ": " << splice_last_error() << "\n";
  throw Failure{kUsage};
}

// "300", "300s", "250ms", "5m"
double parse_duration(const std::string& text) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--time-limit", "not a duration: " + text);
  }
  std::string unit = text.substr(used);
  if (unit.empty() || unit == "s") return v;
  if (unit == "ms") return v / 1000.0;
  if (unit == "m") return v * 60.0;
  throw CLI::ValidationError("--time-limit", "unknown unit in " + text);
}

struct Options {
  std::string index, draft, corpus, out;
  size_t k = 5;
  double w_nl = 0.8, w_names = 0.2;
  size_t max_solutions = 3;
  std::string time_limit = "300s";
  uint64_t step_fuel = 10'000'000;
  std::string test_time_limit = "1s";
  bool no_types = false, no_roles = false, adapt = false;
  size_t adapt_budget = 16;
  size_t max_window = 8;
  unsigned workers = 0;
  std::string fs_manifest;
  bool json = false;
};

ConfigPtr make_config(const Options& o) {
  splice_config* raw = nullptr;
  check(splice_config_new(&raw), "config");
  ConfigPtr cfg(raw);
  unsigned workers = o.workers;
  if (const char* env = std::getenv("SPLICE_WORKERS"); env && *env) {
    try {
      workers = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "error: SPLICE_WORKERS is not a number: " << env << "\n";
      throw Failure{kUsage};
    }
  }
  check(splice_config_set_k(cfg.get(), o.k), "--k");
  check(splice_config_set_weights(cfg.get(), o.w_nl, o.w_names), "--w-nl/--w-names");
  check(splice_config_set_max_solutions(cfg.get(), o.max_solutions), "--max-solutions");
  check(splice_config_set_time_limit(cfg.get(), parse_duration(o.time_limit)), "--time-limit");
  check(splice_config_set_step_fuel(cfg.get(), o.step_fuel), "--step-fuel");
  check(splice_config_set_test_time_limit(cfg.get(), parse_duration(o.test_time_limit)), "--test-time-limit");
  check(splice_config_set_type_matching(cfg.get(), !o.no_types), "--no-types");
  check(splice_config_set_role_matching(cfg.get(), !o.no_roles), "--no-roles");
  check(splice_config_set_constant_adaptation(cfg.get(), o.adapt), "--adapt-constants");
  check(splice_config_set_adapt_budget(cfg.get(), o.adapt_budget), "--adapt-budget");
  check(splice_config_set_max_window(cfg.get(), o.max_window), "--max-window");
  check(splice_config_set_workers(cfg.get(), workers), "--workers");
  return cfg;
}

IndexPtr open_index(const std::string& path) {
  splice_index* raw = nullptr;
  check(splice_index_load(path.c_str(), &raw), "index " + path);
  return IndexPtr(raw);
}

DraftPtr open_draft(const std::string& path) {
  splice_draft* raw = nullptr;
  check(splice_draft_load(path.c_str(), &raw), "draft " + path);
  return DraftPtr(raw);
}

FsPtr open_fs(const std::string& manifest) {
  splice_fs* raw = nullptr;
  if (manifest.empty()) check(splice_fs_empty(&raw), "fs");
  else check(splice_fs_load(manifest.c_str(), &raw), "--fs-manifest " + manifest);
  return FsPtr(raw);
}

int cmd_index(const Options& o) {
  splice_index* raw = nullptr;
  check(splice_index_build(o.corpus.c_str(), &raw), "corpus " + o.corpus);
  IndexPtr index(raw);
  for (size_t i = 0; i < splice_index_skipped_count(index.get()); ++i)
    std::cerr << "skipped: " << splice_index_skipped_message(index.get(), i) << "\n";
  check(splice_index_save(index.get(), o.out.c_str()), "write " + o.out);
  std::cout << "indexed " << splice_index_size(index.get()) << " functions\n";
  return kSolved;
}

int cmd_search(const Options& o) {
  IndexPtr index = open_index(o.index);
  DraftPtr draft = open_draft(o.draft);
  ConfigPtr cfg = make_config(o);
  splice_neighbors* raw = nullptr;
  check(splice_search(index.get(), draft.get(), cfg.get(), &raw), "search");
  NeighborsPtr n(raw);
  for (size_t i = 0; i < splice_neighbors_count(n.get()); ++i) {
    uint32_t id = splice_neighbors_id(n.get(), i);
    std::printf("%zu %.4f %u %s\n", i + 1, splice_neighbors_score(n.get(), i), id,
                splice_index_entry_path(index.get(), id));
  }
  return kSolved;
}

int cmd_splice(const Options& o) {
  IndexPtr index = open_index(o.index);
  DraftPtr draft = open_draft(o.draft);
  FsPtr fs = open_fs(o.fs_manifest);
  ConfigPtr cfg = make_config(o);
  splice_result* raw = nullptr;
  check(splice_run(index.get(), draft.get(), cfg.get(), fs.get(), &raw), "splice");
  ResultPtr r(raw);
  size_t count = splice_result_count(r.get());
  bool timed_out = splice_result_timed_out(r.get()) != 0;

  if (o.json) {
    nlohmann::ordered_json out;
    out["solutions"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
      nlohmann::ordered_json s;
      uint32_t donor = splice_result_donor(r.get(), i);
      s["program"] = splice_result_program(r.get(), i);
      s["donor"] = donor;
      s["donorPath"] = splice_index_entry_path(index.get(), donor);
      s["donorRank"] = splice_result_donor_rank(r.get(), i);
      s["discoveryOrder"] = splice_result_discovery_order(r.get(), i);
      s["renamings"] = nlohmann::ordered_json::array();
      for (size_t j = 0; j < splice_result_renaming_count(r.get(), i); ++j) {
        const char* from = nullptr;
        const char* to = nullptr;
        int fn = 0;
        splice_result_renaming(r.get(), i, j, &from, &to, &fn);
        s["renamings"].push_back({{"from", from}, {"to", to}, {"function", fn != 0}});
      }
      out["solutions"].push_back(std::move(s));
    }
    out["stats"] = {{"candidatesEvaluated", splice_result_candidates_evaluated(r.get())},
                    {"testsRun", splice_result_tests_run(r.get())}};
    out["timedOut"] = timed_out;
    std::cout << out.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < count; ++i) {
      std::cout << "--- solution " << i + 1 << " (donor " << splice_result_donor(r.get(), i) << ") ---\n";
      std::cout << splice_result_program(r.get(), i);
    }
    std::cerr << "candidates " << splice_result_candidates_evaluated(r.get()) << ", tests "
              << splice_result_tests_run(r.get()) << (timed_out ? ", timed out" : "") << "\n";
  }
  if (timed_out) return kTimeout;
  return count ? kSolved : kNoSolution;
}

int cmd_precision(const Options& o) {
  IndexPtr index = open_index(o.index);
  DraftPtr draft = open_draft(o.draft);
  FsPtr fs = open_fs(o.fs_manifest);
  ConfigPtr cfg = make_config(o);
  size_t high = 0, donors = 0;
  check(splice_precision(index.get(), draft.get(), cfg.get(), fs.get(), &high, &donors), "precision");
  double f = donors ? static_cast<double>(high) / static_cast<double>(donors) : 0.0;
  std::printf("precision: %zu/%zu = %.2f\n", high, donors, f);
  return kSolved;
}

void add_search_flags(CLI::App* c, Options& o) {
  c->add_option("index", o.index, "index file written by `index`")->required();
  c->add_option("draft", o.draft, "draft source file")->required();
  c->add_option("--k", o.k, "number of donors to retrieve")->capture_default_str();
  c->add_option("--w-nl", o.w_nl, "weight of the comment/identifier cosine score")->capture_default_str();
  c->add_option("--w-names", o.w_names, "weight of the name Jaccard score")->capture_default_str();
}

void add_engine_flags(CLI::App* c, Options& o) {
  c->add_option("--max-solutions", o.max_solutions)->capture_default_str();
  c->add_option("--time-limit", o.time_limit, "whole search; 0 for none (units: ms, s, m)")->capture_default_str();
  c->add_option("--step-fuel", o.step_fuel, "interpreter steps per test run")->capture_default_str();
  c->add_option("--test-time-limit", o.test_time_limit, "wall clock per test run")->capture_default_str();
  c->add_flag("--no-types", o.no_types, "disable type matching");
  c->add_flag("--no-roles", o.no_roles, "disable role matching");
  c->add_flag("--adapt-constants", o.adapt, "try draft constants and int variables in place of literals");
  c->add_option("--adapt-budget", o.adapt_budget, "variants per codelet")->capture_default_str();
  c->add_option("--max-window", o.max_window, "longest statement window")->capture_default_str();
  c->add_option("--workers", o.workers, "parallel donors; 0 for all cores (env SPLICE_WORKERS)")
      ->capture_default_str();
  c->add_option("--fs-manifest", o.fs_manifest, "JSON file listing the virtual files tests may read");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"program splicing: fill the holes of a draft with code from a corpus"};
  app.require_subcommand(1);
  Options o;

  auto* index = app.add_subcommand("index", "index every function of a corpus directory");
  index->add_option("corpus", o.corpus, "directory of .spl files")->required();
  index->add_option("out", o.out, "index file to write")->required();

  auto* search = app.add_subcommand("search", "list the nearest donors of a draft");
  add_search_flags(search, o);

  auto* splice = app.add_subcommand("splice", "complete a draft");
  add_search_flags(splice, o);
  add_engine_flags(splice, o);
  splice->add_flag("--json", o.json, "structured output");

  auto* precision = app.add_subcommand("precision", "share of the nearest donors that complete the draft alone");
  add_search_flags(precision, o);
  add_engine_flags(precision, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (index->parsed()) return cmd_index(o);
    if (search->parsed()) return cmd_search(o);
    if (splice->parsed()) return cmd_splice(o);
    return cmd_precision(o);
  } catch (const Failure& f) {
    return f.code;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
