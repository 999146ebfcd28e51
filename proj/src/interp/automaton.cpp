#include "splice/interp/automaton.hpp"

#include <algorithm>
#include <sstream>

#include "splice/errors.hpp"

namespace splice {

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

EventPattern pattern_of(const std::string& w) {
  auto at = w.find('@');
  if (at == std::string::npos) return {w, std::nullopt};
  return {w.substr(0, at), w.substr(at + 1)};
}

}  // namespace

ApiAutomaton parse_automaton(std::string_view text) {
  ApiAutomaton a;
  bool have_start = false;
  std::istringstream in{std::string(text)};
  std::string line;
  uint32_t lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw SyntaxError(Span{0, 0, lineno, 1}, "automaton: " + msg);
  };
  auto known = [&](const std::string& s) {
    return std::find(a.states.begin(), a.states.end(), s) != a.states.end();
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    std::string key = line.substr(first, colon - first);
    std::vector<std::string> vals = words(line.substr(colon + 1));
    if (key == "states") {
      for (auto& s : vals)
        if (!known(s)) a.states.push_back(s);
    } else if (key == "start") {
      if (vals.size() != 1) fail("start takes one state");
      a.start = vals[0];
      have_start = true;
    } else if (key == "accept") {
      a.accepting.insert(vals.begin(), vals.end());
    } else if (key == "wildcard") {
      if (vals.size() != 1 || (vals[0] != "on" && vals[0] != "off")) fail("wildcard must be on or off");
      a.wildcard_self_loop = vals[0] == "on";
    } else if (key == "trans") {
      if (vals.size() != 3) fail("trans takes <state> <event> <state>");
      if (!known(vals[0]) || !known(vals[2])) fail("transition between undeclared states");
      EventPattern p = pattern_of(vals[1]);
      a.alphabet.insert(p);
      if (!a.transitions.emplace(std::make_pair(vals[0], p), vals[2]).second)
        fail("two transitions from " + vals[0] + " on " + p.str());
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!have_start || !known(a.start)) throw SyntaxError(Span{0, 0, lineno, 1}, "automaton: missing or undeclared start state");
  for (auto& s : a.accepting)
    if (!known(s)) throw SyntaxError(Span{0, 0, lineno, 1}, "automaton: undeclared accepting state " + s);
  return a;
}

bool check_automaton(const std::vector<ApiEvent>& trace, const ApiAutomaton& a) {
  std::string state = a.start;
  for (auto& e : trace) {
    bool in_alphabet = false;
    const std::string* next = nullptr;
    // A receiver-qualified pattern is more specific than the bare name.
    for (bool qualified : {true, false}) {
      for (auto& p : a.alphabet) {
        if (p.receiver.has_value() != qualified || !p.matches(e)) continue;
        in_alphabet = true;
        auto t = a.transitions.find({state, p});
        if (t != a.transitions.end() && !next) next = &t->second;
      }
    }
    if (next) {
      state = *next;
    } else if (in_alphabet || !a.wildcard_self_loop) {
      return false;
    }
  }
  return a.accepting.count(state) > 0;
}

}  // namespace splice
