#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "splice/lang/type.hpp"

namespace splice {

struct ApiEvent {
  std::string fname;
  std::vector<Type> arg_types;
  std::optional<std::string> receiver;  // opaque type of the first argument
  uint64_t seq = 0;
};

// `fname` alone matches any call of that API; with a receiver it matches only
// calls whose first argument has that opaque type.
struct EventPattern {
  std::string fname;
  std::optional<std::string> receiver;

  bool matches(const ApiEvent& e) const { return e.fname == fname && (!receiver || receiver == e.receiver); }
  auto operator<=>(const EventPattern&) const = default;
  std::string str() const { return receiver ? fname + "@" + *receiver : fname; }
};

struct ApiAutomaton {
  std::vector<std::string> states;
  std::string start;
  std::set<std::string> accepting;
  std::set<EventPattern> alphabet;
  std::map<std::pair<std::string, EventPattern>, std::string> transitions;
  bool wildcard_self_loop = true;
};

// Line-oriented format:
//   states: s0 s1 s2
//   start: s0
//   accept: s2
//   wildcard: on
//   trans: s0 open s1
//   trans: s1 read@File s2
// Blank lines and lines starting with '#' are ignored.
ApiAutomaton parse_automaton(std::string_view text);

bool check_automaton(const std::vector<ApiEvent>& trace, const ApiAutomaton& a);

}  // namespace splice
