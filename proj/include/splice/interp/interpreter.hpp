#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splice/interp/api.hpp"
#include "splice/interp/automaton.hpp"
#include "splice/lang/draft.hpp"

namespace splice {

struct Limits {
  uint64_t step_fuel = 10'000'000;
  std::chrono::duration<double> wall_clock{1.0};
};

enum class EvalStatus { Ok, Timeout, Failed };

struct EvalOutcome {
  EvalStatus status = EvalStatus::Ok;
  std::optional<RuntimeErrorKind> error;  // set when status is Failed
  std::string message;
  Value value;
  std::vector<ApiEvent> trace;  // complete up to the point of failure
  std::map<std::string, std::string> written;
  uint64_t steps = 0;

  bool ok() const { return status == EvalStatus::Ok; }
};

// Runs a hole-free, type-correct function. Array and handle arguments are
// copied first, so the caller's values are never modified.
EvalOutcome eval(const Program& p, const std::vector<Value>& args, const ApiRegistry& apis, const VirtualFS& fs,
                 const Limits& limits = {});

// Runs the expanded test block with `candidate` callable by name. The outcome
// value is the block's boolean result.
EvalOutcome eval_tests(const Program& candidate, const TestsRequirement& tests, const ApiRegistry& apis,
                       const VirtualFS& fs, const Limits& limits = {});

// True iff the test block evaluates to true; errors and timeouts count as false.
bool run_tests(const Program& candidate, const TestsRequirement& tests, const ApiRegistry& apis, const VirtualFS& fs,
               const Limits& limits = {});

// Checks either kind of requirement. An automaton-checked program is run with
// no arguments and must finish without error. `steps` receives the
// interpreter steps spent.
bool satisfies(const Program& candidate, const Requirement& req, const ApiRegistry& apis, const VirtualFS& fs,
               const Limits& limits = {}, uint64_t* steps = nullptr);

}  // namespace splice
