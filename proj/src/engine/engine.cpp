#include "splice/engine/engine.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <set>
#include <thread>

#include "overloaded.hpp"
#include "splice/lang/printer.hpp"

namespace splice {

namespace {

using Clock = std::chrono::steady_clock;

const HoleInfo& hole_info(const Draft& d, HoleId h) {
  auto it = d.holes.find(h);
  if (it == d.holes.end()) throw Error("unknown hole " + std::to_string(h));
  return it->second;
}

bool in_scope(const HoleInfo& h, const std::string& name) {
  return std::any_of(h.scope.begin(), h.scope.end(), [&](const Binding& b) { return b.name == name; });
}

bool defined_at(const Draft& d, const HoleInfo& h, const FreeRef& ref) {
  return ref.is_function ? ref.name == d.program.name : in_scope(h, ref.name);
}

const std::vector<FreeRef>& free_of(const CodeletRef& c) {
  return std::visit([](auto* p) -> const std::vector<FreeRef>& { return p->free; }, c);
}

std::string dedupe_key(const std::string& text, const std::vector<FreeRef>& free) {
  std::string key = text;
  for (auto& f : free) key += "\x1f" + f.name + (f.is_function ? "()" : "") + ":" + f.type.str();
  return key;
}

// A window holding one plain block is the same statement sequence as the
// window spanning that block's contents.
std::string dedupe_key(const StmtCodelet& c) {
  if (c.stmts.size() != 1) return dedupe_key(c.text, c.free);
  auto block = c.stmts[0]->as<ast::Block>();
  if (!block) return dedupe_key(c.text, c.free);
  std::string text;
  for (auto& s : block->stmts) text += print_stmt(*s);
  return dedupe_key(text, c.free);
}

std::string dedupe_key(const ExprCodelet& c) { return dedupe_key(c.text, c.free); }

}  // namespace

Donor prepare_donor(const Program& p, const SignatureTable& apis, size_t max_window, uint32_t id, size_t rank) {
  Donor d;
  d.id = id;
  d.rank = rank;
  d.program = desugar(p);
  TypeInfo info = typecheck(d.program, apis);
  d.exprs = extract_expr_codelets(d.program, info, id);
  d.windows = extract_stmt_codelets(d.program, info, max_window, id);
  return d;
}

bool valid(const Draft& d, HoleId hole, const ExprCodelet& c, const SpliceConfig& cfg) {
  const HoleInfo& h = hole_info(d, hole);
  if (!h.is_expr) throw KindMismatch();
  if (cfg.type_matching && c.type != h.type) return false;
  if (cfg.role_matching && c.role != h.role) return false;
  return true;
}

bool valid(const Draft& d, HoleId hole, const StmtCodelet& c, const SpliceConfig& cfg) {
  const HoleInfo& h = hole_info(d, hole);
  if (h.is_expr) throw KindMismatch();
  if (c.stmts.empty()) return false;
  if (!cfg.type_matching) return true;
  FunctionSig self = signature_of(d.program);
  for (auto& ref : c.free) {
    if (defined_at(d, h, ref)) continue;
    if (ref.is_function) {
      if (ref.sig != self) return false;
    } else if (std::none_of(h.scope.begin(), h.scope.end(), [&](const Binding& b) { return b.type == ref.type; })) {
      return false;
    }
  }
  return true;
}

std::vector<HoleId> fill_order(const Draft& d) {
  std::vector<HoleId> out(d.expr_holes);
  out.insert(out.end(), d.stmt_holes.begin(), d.stmt_holes.end());
  std::sort(out.begin(), out.end());
  return out;
}

void fill(const Draft& d, const Donor& donor, const SpliceConfig& cfg,
          const std::function<bool(const Candidate&)>& visit) {
  std::vector<HoleId> order = fill_order(d);
  std::vector<int64_t> literals = cfg.constant_adaptation ? integer_literals(d.program) : std::vector<int64_t>{};
  std::deque<ExprCodelet> expr_variants;
  std::deque<StmtCodelet> stmt_variants;
  std::vector<std::vector<CodeletRef>> choices(order.size());

  for (size_t i = 0; i < order.size(); ++i) {
    const HoleInfo& h = hole_info(d, order[i]);
    std::vector<std::string> int_vars;
    for (auto& b : h.scope)
      if (b.type == Type::integer()) int_vars.push_back(b.name);
    std::set<std::string> seen;
    auto offer = [&](auto& pool, const auto& base) {
      if (!cfg.constant_adaptation) {
        if (valid(d, order[i], base, cfg) && seen.insert(dedupe_key(base)).second)
          choices[i].push_back(&base);
        return;
      }
      for (auto& v : adapt_constants(base, literals, int_vars, cfg.adapt_budget)) {
        if (!valid(d, order[i], v, cfg) || !seen.insert(dedupe_key(v)).second) continue;
        pool.push_back(std::move(v));
        choices[i].push_back(&pool.back());
      }
    };
    if (h.is_expr) {
      for (auto& c : donor.exprs) offer(expr_variants, c);
    } else {
      for (auto& c : donor.windows) offer(stmt_variants, c);
    }
  }

  Candidate cand;
  cand.donor = donor.id;
  cand.codelets.resize(order.size());
  std::function<bool(size_t)> dfs = [&](size_t i) {
    if (i == order.size()) return visit(cand);
    for (auto& c : choices[i]) {
      cand.codelets[i] = c;
      if (!dfs(i + 1)) return false;
    }
    return true;
  };
  dfs(0);
}

std::vector<FreeRef> undefined_refs(const Draft& d, const Candidate& c) {
  std::vector<HoleId> order = fill_order(d);
  std::vector<FreeRef> out;
  for (size_t i = 0; i < order.size(); ++i) {
    const HoleInfo& h = hole_info(d, order[i]);
    for (auto& ref : free_of(c.codelets[i])) {
      if (defined_at(d, h, ref)) continue;
      bool dup = std::any_of(out.begin(), out.end(),
                             [&](const FreeRef& o) { return o.name == ref.name && o.is_function == ref.is_function; });
      if (!dup) out.push_back(ref);
    }
  }
  return out;
}

std::optional<Program> instantiate(const Draft& d, const Candidate& c, const Renaming& r) {
  std::vector<HoleId> order = fill_order(d);
  std::map<HoleId, ExprPtr> exprs;
  std::map<HoleId, std::vector<StmtPtr>> stmts;
  for (size_t i = 0; i < order.size(); ++i) {
    const HoleInfo& h = hole_info(d, order[i]);
    // Names the draft defines at this hole keep their meaning there.
    Renaming local;
    for (auto& [from, to] : r.vars)
      if (!in_scope(h, from)) local.vars[from] = to;
    local.function = r.function;
    bool ok = std::visit(overloaded{
                             [&](const ExprCodelet* e) {
                               auto out = rename_free(*e, local);
                               if (out) exprs[order[i]] = *out;
                               return out.has_value();
                             },
                             [&](const StmtCodelet* s) {
                               auto out = rename_free(*s, local);
                               if (out) stmts[order[i]] = std::move(*out);
                               return out.has_value();
                             },
                         },
                         c.codelets[i]);
    if (!ok) return std::nullopt;
  }

  Rewriter rw;
  rw.on_expr = [&](const ExprPtr& e) -> ExprPtr {
    auto h = e->as<ast::ExprHole>();
    return h ? exprs.at(h->hole) : nullptr;
  };
  rw.on_stmt = [&](const StmtPtr& s) -> StmtPtr {
    if (auto h = s->as<ast::StmtHole>()) return make_stmt(ast::Block{stmts.at(h->hole)}, s->span, s->id);
    auto b = s->as<ast::Block>();
    if (!b) return nullptr;
    std::vector<StmtPtr> out;
    bool changed = false;
    for (auto& st : b->stmts) {
      if (auto h = st->as<ast::StmtHole>()) {
        auto& w = stmts.at(h->hole);
        out.insert(out.end(), w.begin(), w.end());
        changed = true;
      } else {
        out.push_back(rewrite(st, rw));
        changed |= out.back() != st;
      }
    }
    return changed ? make_stmt(ast::Block{std::move(out)}, s->span, s->id) : s;
  };
  Program p = d.program;
  p.body = rewrite(p.body, rw);
  return p;
}

std::optional<MergeResult> merge(const Candidate& c, const Draft& d, const SpliceConfig& cfg, const SpliceEnv& env,
                                 MergeContext& ctx) {
  std::vector<HoleId> order = fill_order(d);
  std::vector<FreeRef> refs = undefined_refs(d, c);
  FunctionSig self = signature_of(d.program);

  // Stand-ins for each reference, taken from the scope of the first hole that
  // needs it, in declaration order.
  std::vector<std::vector<Binding>> options(refs.size());
  for (size_t r = 0; r < refs.size(); ++r) {
    if (refs[r].is_function) {
      if (!cfg.type_matching || refs[r].sig == self) options[r].push_back({d.program.name, self.ret});
      continue;
    }
    for (size_t i = 0; i < order.size(); ++i) {
      auto& f = free_of(c.codelets[i]);
      bool here = std::any_of(f.begin(), f.end(),
                              [&](const FreeRef& x) { return !x.is_function && x.name == refs[r].name; });
      const HoleInfo& h = hole_info(d, order[i]);
      if (!here || in_scope(h, refs[r].name)) continue;
      for (auto& b : h.scope)
        if (!cfg.type_matching || b.type == refs[r].type) options[r].push_back(b);
      break;
    }
  }

  // Checks that type matching makes before a program is ever assembled.
  auto types_agree = [&](const std::vector<Binding>& targets) {
    for (size_t i = 0; i < order.size(); ++i)
      if (auto e = std::get_if<const ExprCodelet*>(&c.codelets[i]))
        if ((*e)->type != hole_info(d, order[i]).type) return false;
    for (size_t r = 0; r < refs.size(); ++r) {
      bool same = refs[r].is_function ? refs[r].sig == self : refs[r].type == targets[r].type;
      if (!same) return false;
    }
    return true;
  };

  std::vector<Binding> targets(refs.size());
  std::optional<MergeResult> found;

  auto leaf = [&]() -> bool {
    if (ctx.should_stop && ctx.should_stop()) {
      ctx.stopped = true;
      return false;
    }
    ++ctx.stats.candidates_evaluated;
    if (!cfg.type_matching && !types_agree(targets)) return true;
    Renaming ren;
    for (size_t r = 0; r < refs.size(); ++r) {
      if (refs[r].is_function) ren.function = targets[r].name;
      else ren.vars[refs[r].name] = targets[r].name;
    }
    std::optional<Program> p = instantiate(d, c, ren);
    if (!p) return true;
    std::string text = pretty_print(*p);
    bool ok;
    if (auto v = ctx.verdicts.find(text); v != ctx.verdicts.end()) {
      ok = v->second;
    } else {
      try {
        typecheck(*p, env.apis);
        uint64_t steps = 0;
        ok = satisfies(*p, d.requirement, env.apis, env.fs, cfg.test_limits, &steps);
        ++ctx.stats.tests_run;
        ctx.steps += steps;
      } catch (const Error&) {
        ok = false;
      }
      ctx.verdicts.emplace(text, ok);
    }
    if (!ok) return true;
    MergeResult m{std::move(*p), std::move(text), {}};
    for (size_t r = 0; r < refs.size(); ++r) m.renamings.push_back({refs[r].name, targets[r].name, refs[r].is_function});
    found = std::move(m);
    return false;
  };

  std::function<bool(size_t)> dfs = [&](size_t r) -> bool {
    if (r == refs.size()) return leaf();
    for (auto& b : options[r]) {
      targets[r] = b;
      if (!dfs(r + 1)) return false;
    }
    return true;
  };
  dfs(0);
  return found;
}

namespace {

bool redundant_return(const Stmt& s) {
  return std::visit(overloaded{
                        [](const ast::Block& b) {
                          for (size_t i = 0; i < b.stmts.size(); ++i) {
                            if (b.stmts[i]->is<ast::Return>() && i + 1 < b.stmts.size()) return true;
                            if (redundant_return(*b.stmts[i])) return true;
                          }
                          return false;
                        },
                        [](const ast::If& x) {
                          return redundant_return(*x.then_branch) || (x.else_branch && redundant_return(*x.else_branch));
                        },
                        [](const ast::While& x) { return redundant_return(*x.body); },
                        [](const ast::For& x) { return (x.init && redundant_return(*x.init)) || redundant_return(*x.body); },
                        [](const auto&) { return false; },
                    },
                    s.node);
}

}  // namespace

bool has_redundant_return(const Program& p) { return redundant_return(*p.body); }

std::vector<Solution> post_filter(std::vector<Solution> sols) {
  std::erase_if(sols, [](const Solution& s) { return has_redundant_return(s.program); });
  return sols;
}

DonorSearch search_donor(const Draft& d, const Donor& donor, const SpliceConfig& cfg, const SpliceEnv& env,
                         const std::function<bool()>& cancelled) {
  auto t0 = Clock::now();
  DonorSearch out;
  MergeContext ctx;
  ctx.should_stop = [&]() {
    if (cancelled && cancelled()) return true;
    return cfg.donor_step_budget != 0 && ctx.steps >= cfg.donor_step_budget;
  };
  std::set<std::string> seen;
  fill(d, donor, cfg, [&](const Candidate& c) {
    auto m = merge(c, d, cfg, env, ctx);
    if (ctx.stopped) return false;
    if (m && !has_redundant_return(m->program) && seen.insert(m->text).second) {
      out.solutions.push_back(std::move(*m));
      if (out.solutions.size() >= cfg.max_solutions) return false;
    }
    return true;
  });
  out.stats = ctx.stats;
  out.stopped_early = ctx.stopped;
  out.stats.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

namespace {

unsigned worker_count(unsigned requested, size_t tasks) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<size_t>(n, std::max<size_t>(tasks, 1)));
}

// Runs task(i) for i in [0, n) on `workers` threads.
void parallel_for(size_t n, unsigned workers, const std::function<void(size_t)>& task) {
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto run = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned w = worker_count(workers, n);
  if (w <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct DonorRun {
  DonorSearch search;
  bool prepared = false;
};

std::vector<DonorRun> run_donors(const Draft& d, const CorpusIndex& index, const std::vector<Neighbor>& donors,
                                 const SpliceConfig& cfg, const SpliceEnv& env, const std::function<bool()>& cancelled) {
  std::vector<DonorRun> runs(donors.size());
  parallel_for(donors.size(), cfg.workers, [&](size_t i) {
    const IndexEntry& e = index.entries.at(donors[i].id);
    Donor donor;
    try {
      donor = prepare_donor(e.program, env.apis, cfg.max_window, e.id, i + 1);
    } catch (const Error&) {
      return;  // a donor that no longer type-checks against the current API table
    }
    runs[i].prepared = true;
    runs[i].search = search_donor(d, donor, cfg, env, cancelled);
  });
  return runs;
}

}  // namespace

SpliceResult splice(const Draft& d, const CorpusIndex& index, const SpliceConfig& cfg, const SpliceEnv& env) {
  if (cfg.k == 0) throw Error("k must be at least 1");
  if (cfg.max_solutions == 0) throw Error("max solutions must be at least 1");
  auto t0 = Clock::now();
  std::vector<Neighbor> donors = knn_query(index, d, cfg.k, cfg.weights);
  bool limited = cfg.search_time_limit.count() > 0;
  auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(limited ? cfg.search_time_limit
                                                                            : std::chrono::duration<double>(0));
  std::atomic<bool> expired{false};
  auto cancelled = [&]() {
    if (!limited) return false;
    if (expired.load(std::memory_order_relaxed)) return true;
    if (Clock::now() < deadline) return false;
    expired = true;
    return true;
  };
  std::vector<DonorRun> runs = run_donors(d, index, donors, cfg, env, cancelled);

  SpliceResult out;
  std::set<std::string> seen;
  bool cut_short = false;
  for (size_t i = 0; i < runs.size(); ++i) {
    auto& s = runs[i].search;
    out.stats += s.stats;
    cut_short |= s.stopped_early;
    for (size_t j = 0; j < s.solutions.size(); ++j) {
      auto& m = s.solutions[j];
      if (!seen.insert(m.text).second) continue;
      out.solutions.push_back({m.program, m.text, donors[i].id, i + 1, j, m.renamings});
    }
  }
  out.solutions = post_filter(std::move(out.solutions));
  if (out.solutions.size() > cfg.max_solutions) out.solutions.resize(cfg.max_solutions);
  out.timed_out = cut_short && out.solutions.size() < cfg.max_solutions;
  out.stats.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

SpliceResult ablation_run(const Draft& d, const CorpusIndex& index, const SpliceConfig& cfg, const SpliceEnv& env,
                          const Switches& switches) {
  SpliceConfig c = cfg;
  c.type_matching = switches.type_matching;
  c.role_matching = switches.role_matching;
  return splice(d, index, c, env);
}

Precision measure_precision(const Draft& d, const CorpusIndex& index, size_t k, const QueryWeights& w,
                            const SpliceEnv& env, unsigned workers) {
  SpliceConfig cfg;
  cfg.k = k;
  cfg.weights = w;
  cfg.max_solutions = 1;
  cfg.search_time_limit = std::chrono::duration<double>(0);
  cfg.donor_step_budget = 1'000'000'000;
  cfg.workers = workers;
  std::vector<Neighbor> donors = knn_query(index, d, k, w);
  std::vector<DonorRun> runs = run_donors(d, index, donors, cfg, env, {});
  Precision p;
  p.donors = donors.size();
  for (auto& r : runs) p.high_quality += r.search.solutions.empty() ? 0 : 1;
  return p;
}

}  // namespace splice
