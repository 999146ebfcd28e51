#include "splice/splice.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "splice/engine/engine.hpp"
#include "splice/errors.hpp"

struct splice_index {
  splice::CorpusIndex index;
  std::vector<std::string> skipped;
};

struct splice_draft {
  splice::Draft draft;
};

struct splice_fs {
  splice::VirtualFS fs;
};

struct splice_config {
  splice::SpliceConfig cfg;
};

struct splice_neighbors {
  std::vector<splice::Neighbor> items;
};

struct splice_result {
  splice::SpliceResult result;
};

namespace {

thread_local std::string last_error;

const splice::ApiRegistry& builtins() {
  static const splice::ApiRegistry apis = splice::ApiRegistry::with_builtins();
  return apis;
}

splice_status fail(splice_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
splice_status guarded(F&& f) {
  try {
    f();
    return SPLICE_OK;
  } catch (const splice::SyntaxError& e) {
    return fail(SPLICE_ERR_SYNTAX, e.what());
  } catch (const splice::TypeError& e) {
    return fail(SPLICE_ERR_TYPE, e.what());
  } catch (const splice::MissingRequirement& e) {
    return fail(SPLICE_ERR_REQUIREMENT, e.what());
  } catch (const splice::DuplicateSolutionMarker& e) {
    return fail(SPLICE_ERR_REQUIREMENT, e.what());
  } catch (const splice::EmptyIndex& e) {
    return fail(SPLICE_ERR_EMPTY_INDEX, e.what());
  } catch (const splice::IoError& e) {
    return fail(SPLICE_ERR_IO, e.what());
  } catch (const splice::IngestError& e) {
    return fail(SPLICE_ERR_IO, e.what());
  } catch (const splice::Error& e) {
    return fail(SPLICE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SPLICE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SPLICE_ERR_INTERNAL, "unknown failure");
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw splice::IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

splice::FileLoader loader_for(const std::string& base_dir) {
  return [base_dir](const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return read_file(p);
  };
}

#define SPLICE_REQUIRE(cond)                                                      \
  do {                                                                            \
    if (!(cond)) return fail(SPLICE_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* splice_last_error(void) { return last_error.c_str(); }

const char* splice_status_name(splice_status s) {
  switch (s) {
    case SPLICE_OK: return "ok";
    case SPLICE_ERR_IO: return "io error";
    case SPLICE_ERR_SYNTAX: return "syntax error";
    case SPLICE_ERR_TYPE: return "type error";
    case SPLICE_ERR_REQUIREMENT: return "requirement error";
    case SPLICE_ERR_EMPTY_INDEX: return "empty index";
    case SPLICE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SPLICE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

splice_status splice_index_build(const char* corpus_dir, splice_index** out) {
  SPLICE_REQUIRE(corpus_dir && out);
  return guarded([&] {
    auto h = std::make_unique<splice_index>();
    splice::IngestReport report;
    h->index = splice::build_index(std::filesystem::path(corpus_dir), builtins(), &report);
    for (auto& e : report.skipped) h->skipped.push_back(e.what());
    *out = h.release();
  });
}

splice_status splice_index_load(const char* path, splice_index** out) {
  SPLICE_REQUIRE(path && out);
  return guarded([&] {
    auto h = std::make_unique<splice_index>();
    h->index = splice::load_index(std::filesystem::path(path), builtins());
    *out = h.release();
  });
}

splice_status splice_index_save(const splice_index* index, const char* path) {
  SPLICE_REQUIRE(index && path);
  return guarded([&] { splice::save_index(index->index, std::filesystem::path(path)); });
}

void splice_index_free(splice_index* index) { delete index; }

size_t splice_index_size(const splice_index* index) { return index ? index->index.entries.size() : 0; }

const char* splice_index_entry_path(const splice_index* index, uint32_t id) {
  if (!index || id >= index->index.entries.size()) return nullptr;
  return index->index.entries[id].path.c_str();
}

const char* splice_index_entry_name(const splice_index* index, uint32_t id) {
  if (!index || id >= index->index.entries.size()) return nullptr;
  return index->index.entries[id].program.name.c_str();
}

size_t splice_index_skipped_count(const splice_index* index) { return index ? index->skipped.size() : 0; }

const char* splice_index_skipped_message(const splice_index* index, size_t i) {
  if (!index || i >= index->skipped.size()) return nullptr;
  return index->skipped[i].c_str();
}

splice_status splice_draft_parse(const char* text, const char* base_dir, splice_draft** out) {
  SPLICE_REQUIRE(text && out);
  return guarded([&] {
    auto h = std::make_unique<splice_draft>();
    h->draft = splice::parse_draft(text, builtins(), loader_for(base_dir ? base_dir : ""));
    *out = h.release();
  });
}

splice_status splice_draft_load(const char* path, splice_draft** out) {
  SPLICE_REQUIRE(path && out);
  return guarded([&] {
    std::filesystem::path p(path);
    std::string text = read_file(p);
    auto h = std::make_unique<splice_draft>();
    h->draft = splice::parse_draft(text, builtins(), loader_for(p.parent_path().string()));
    *out = h.release();
  });
}

void splice_draft_free(splice_draft* draft) { delete draft; }

size_t splice_draft_expr_holes(const splice_draft* draft) { return draft ? draft->draft.expr_holes.size() : 0; }
size_t splice_draft_stmt_holes(const splice_draft* draft) { return draft ? draft->draft.stmt_holes.size() : 0; }

splice_status splice_fs_empty(splice_fs** out) {
  SPLICE_REQUIRE(out);
  return guarded([&] { *out = new splice_fs{}; });
}

splice_status splice_fs_load(const char* manifest_path, splice_fs** out) {
  SPLICE_REQUIRE(manifest_path && out);
  return guarded([&] {
    auto h = std::make_unique<splice_fs>();
    h->fs = splice::parse_fs_manifest(read_file(manifest_path));
    *out = h.release();
  });
}

void splice_fs_free(splice_fs* fs) { delete fs; }

splice_status splice_config_new(splice_config** out) {
  SPLICE_REQUIRE(out);
  return guarded([&] { *out = new splice_config{}; });
}

void splice_config_free(splice_config* cfg) { delete cfg; }

splice_status splice_config_set_k(splice_config* cfg, size_t k) {
  SPLICE_REQUIRE(cfg && k > 0);
  cfg->cfg.k = k;
  return SPLICE_OK;
}

splice_status splice_config_set_weights(splice_config* cfg, double nl, double names) {
  SPLICE_REQUIRE(cfg && nl >= 0 && names >= 0);
  if (std::fabs(nl + names - 1.0) > 1e-9) return fail(SPLICE_ERR_INVALID_ARGUMENT, "weights must sum to 1");
  cfg->cfg.weights = {nl, names};
  return SPLICE_OK;
}

splice_status splice_config_set_max_solutions(splice_config* cfg, size_t n) {
  SPLICE_REQUIRE(cfg && n > 0);
  cfg->cfg.max_solutions = n;
  return SPLICE_OK;
}

splice_status splice_config_set_time_limit(splice_config* cfg, double seconds) {
  SPLICE_REQUIRE(cfg && seconds >= 0 && std::isfinite(seconds));
  cfg->cfg.search_time_limit = std::chrono::duration<double>(seconds);
  return SPLICE_OK;
}

splice_status splice_config_set_step_fuel(splice_config* cfg, uint64_t steps) {
  SPLICE_REQUIRE(cfg && steps > 0);
  cfg->cfg.test_limits.step_fuel = steps;
  return SPLICE_OK;
}

splice_status splice_config_set_test_time_limit(splice_config* cfg, double seconds) {
  SPLICE_REQUIRE(cfg && seconds > 0 && std::isfinite(seconds));
  cfg->cfg.test_limits.wall_clock = std::chrono::duration<double>(seconds);
  return SPLICE_OK;
}

splice_status splice_config_set_type_matching(splice_config* cfg, int on) {
  SPLICE_REQUIRE(cfg);
  cfg->cfg.type_matching = on != 0;
  return SPLICE_OK;
}

splice_status splice_config_set_role_matching(splice_config* cfg, int on) {
  SPLICE_REQUIRE(cfg);
  cfg->cfg.role_matching = on != 0;
  return SPLICE_OK;
}

splice_status splice_config_set_constant_adaptation(splice_config* cfg, int on) {
  SPLICE_REQUIRE(cfg);
  cfg->cfg.constant_adaptation = on != 0;
  return SPLICE_OK;
}

splice_status splice_config_set_adapt_budget(splice_config* cfg, size_t n) {
  SPLICE_REQUIRE(cfg && n > 0);
  cfg->cfg.adapt_budget = n;
  return SPLICE_OK;
}

splice_status splice_config_set_max_window(splice_config* cfg, size_t n) {
  SPLICE_REQUIRE(cfg && n > 0);
  cfg->cfg.max_window = n;
  return SPLICE_OK;
}

splice_status splice_config_set_workers(splice_config* cfg, unsigned workers) {
  SPLICE_REQUIRE(cfg);
  cfg->cfg.workers = workers;
  return SPLICE_OK;
}

splice_status splice_search(const splice_index* index, const splice_draft* draft, const splice_config* cfg,
                            splice_neighbors** out) {
  SPLICE_REQUIRE(index && draft && out);
  return guarded([&] {
    splice::SpliceConfig c = cfg ? cfg->cfg : splice::SpliceConfig{};
    auto h = std::make_unique<splice_neighbors>();
    h->items = splice::knn_query(index->index, draft->draft, c.k, c.weights);
    *out = h.release();
  });
}

void splice_neighbors_free(splice_neighbors* n) { delete n; }
size_t splice_neighbors_count(const splice_neighbors* n) { return n ? n->items.size() : 0; }
uint32_t splice_neighbors_id(const splice_neighbors* n, size_t i) {
  return n && i < n->items.size() ? n->items[i].id : 0;
}
double splice_neighbors_score(const splice_neighbors* n, size_t i) {
  return n && i < n->items.size() ? n->items[i].score : 0.0;
}

splice_status splice_run(const splice_index* index, const splice_draft* draft, const splice_config* cfg,
                         const splice_fs* fs, splice_result** out) {
  SPLICE_REQUIRE(index && draft && out);
  return guarded([&] {
    splice::SpliceConfig c = cfg ? cfg->cfg : splice::SpliceConfig{};
    static const splice::VirtualFS no_files;
    splice::SpliceEnv env{builtins(), fs ? fs->fs : no_files};
    auto h = std::make_unique<splice_result>();
    h->result = splice::splice(draft->draft, index->index, c, env);
    *out = h.release();
  });
}

void splice_result_free(splice_result* r) { delete r; }

size_t splice_result_count(const splice_result* r) { return r ? r->result.solutions.size() : 0; }

const char* splice_result_program(const splice_result* r, size_t i) {
  if (!r || i >= r->result.solutions.size()) return nullptr;
  return r->result.solutions[i].text.c_str();
}

uint32_t splice_result_donor(const splice_result* r, size_t i) {
  return r && i < r->result.solutions.size() ? r->result.solutions[i].donor : 0;
}

size_t splice_result_donor_rank(const splice_result* r, size_t i) {
  return r && i < r->result.solutions.size() ? r->result.solutions[i].donor_rank : 0;
}

size_t splice_result_discovery_order(const splice_result* r, size_t i) {
  return r && i < r->result.solutions.size() ? r->result.solutions[i].discovery_order : 0;
}

size_t splice_result_renaming_count(const splice_result* r, size_t i) {
  return r && i < r->result.solutions.size() ? r->result.solutions[i].renamings.size() : 0;
}

splice_status splice_result_renaming(const splice_result* r, size_t i, size_t j, const char** from, const char** to,
                                     int* is_function) {
  SPLICE_REQUIRE(r && i < r->result.solutions.size() && j < r->result.solutions[i].renamings.size());
  auto& rn = r->result.solutions[i].renamings[j];
  if (from) *from = rn.from.c_str();
  if (to) *to = rn.to.c_str();
  if (is_function) *is_function = rn.is_function ? 1 : 0;
  return SPLICE_OK;
}

int splice_result_timed_out(const splice_result* r) { return r && r->result.timed_out ? 1 : 0; }
uint64_t splice_result_candidates_evaluated(const splice_result* r) {
  return r ? r->result.stats.candidates_evaluated : 0;
}
uint64_t splice_result_tests_run(const splice_result* r) { return r ? r->result.stats.tests_run : 0; }
double splice_result_wall_time(const splice_result* r) { return r ? r->result.stats.wall_time : 0.0; }

splice_status splice_precision(const splice_index* index, const splice_draft* draft, const splice_config* cfg,
                               const splice_fs* fs, size_t* high_quality, size_t* donors) {
  SPLICE_REQUIRE(index && draft && high_quality && donors);
  return guarded([&] {
    splice::SpliceConfig c = cfg ? cfg->cfg : splice::SpliceConfig{};
    static const splice::VirtualFS no_files;
    splice::SpliceEnv env{builtins(), fs ? fs->fs : no_files};
    splice::Precision p = splice::measure_precision(draft->draft, index->index, c.k, c.weights, env, c.workers);
    *high_quality = p.high_quality;
    *donors = p.donors;
  });
}

}  // extern "C"
