#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace splice;
using testing::apis;

namespace {

Program parse(const std::string& text) { return parse_program(text, apis()); }

TestsRequirement tests_of(const std::string& text) {
  std::optional<size_t> marker;
  ast::Block b = parse_test_block(text, marker);
  return TestsRequirement{make_stmt(std::move(b)), marker};
}

const TestsRequirement& sieve_tests() {
  static const TestsRequirement t = std::get<TestsRequirement>(
      parse_draft(testing::kSieveDraft, apis(), [](const std::string&) { return std::string(); }).requirement);
  return t;
}

ApiEvent event(const std::string& f, std::optional<std::string> receiver = {}) {
  ApiEvent e;
  e.fname = f;
  e.receiver = std::move(receiver);
  return e;
}

const ApiAutomaton& face_automaton() {
  static const ApiAutomaton a = parse_automaton(testing::slurp(testing::drafts_dir() / "face.aut"));
  return a;
}

// Independent simulator: a table of (state, label) -> state where labels are
// "fname" or "fname@Receiver", preferring the receiver-qualified label.
bool simulate(const std::vector<ApiEvent>& trace) {
  std::map<std::pair<int, std::string>, int> next = {{{0, "newClassifier"}, 1},
                                                     {{1, "imread"}, 2},
                                                     {{2, "detectMultiScale@Classifier"}, 3},
                                                     {{3, "drawRects@Mat"}, 4},
                                                     {{4, "imwrite"}, 5}};
  std::set<std::string> alphabet = {"newClassifier", "imread", "detectMultiScale", "drawRects", "imwrite"};
  int s = 0;
  for (auto& e : trace) {
    std::string qualified = e.receiver ? e.fname + "@" + *e.receiver : e.fname;
    if (auto it = next.find({s, qualified}); it != next.end()) s = it->second;
    else if (auto it2 = next.find({s, e.fname}); it2 != next.end()) s = it2->second;
    else if (alphabet.count(e.fname)) return false;
  }
  return s == 5;
}

Value random_value(const Type& t, std::mt19937& rng) {
  auto num = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (t.kind) {
    case TypeKind::Int: return Value::integer(num(-3, 12));
    case TypeKind::Bool: return Value::boolean(num(0, 1));
    case TypeKind::Str: return Value::string(num(0, 1) ? "3,1,2" : "word");
    case TypeKind::Array: {
      Type elem = t.indexed();
      int n = t.dims == 2 ? 3 : num(0, 6);
      std::vector<Value> elems;
      for (int i = 0; i < n; ++i) elems.push_back(random_value(elem, rng));
      return make_array(std::move(elems), t.dims);
    }
    default: return Value::unit();
  }
}

}  // namespace

TEST_CASE("the completed sieve answers the draft's questions") {
  Program p = parse(testing::kSieveCompleted);
  EvalOutcome a = eval(p, {Value::integer(29)}, apis(), {});
  REQUIRE(a.ok());
  CHECK(a.value.kind == ValueKind::Bool);
  CHECK(a.value.i == 1);
  EvalOutcome b = eval(p, {Value::integer(1)}, apis(), {});
  REQUIRE(b.ok());
  CHECK(b.value.i == 0);
  for (int n = 1; n <= 100; ++n) {
    EvalOutcome o = eval(p, {Value::integer(n)}, apis(), {});
    REQUIRE(o.ok());
    CHECK_MESSAGE((o.value.i == 1) == testing::is_prime(n), n);
  }
}

TEST_CASE("non-termination runs out of fuel") {
  Program p = parse("int f() { while (true) { } return 0; }");
  EvalOutcome o = eval(p, {}, apis(), {}, Limits{100000, std::chrono::duration<double>(10.0)});
  CHECK(o.status == EvalStatus::Timeout);
  EvalOutcome c = eval(p, {}, apis(), {}, Limits{UINT64_MAX, std::chrono::duration<double>(0.05)});
  CHECK(c.status == EvalStatus::Timeout);
}

TEST_CASE("runtime errors") {
  auto kind_of = [](const std::string& text, std::vector<Value> args) {
    EvalOutcome o = eval(parse(text), args, apis(), {});
    REQUIRE(o.status == EvalStatus::Failed);
    return *o.error;
  };
  CHECK(kind_of("int f(int x) { return 1 / x; }", {Value::integer(0)}) == RuntimeErrorKind::DivByZero);
  CHECK(kind_of("int f(int x) { return 1 % x; }", {Value::integer(0)}) == RuntimeErrorKind::DivByZero);
  CHECK(kind_of("int f() { int[] a = new int[2]; return a[2]; }", {}) == RuntimeErrorKind::IndexOutOfBounds);
  CHECK(kind_of("int f() { String[] s = new String[1]; return strlen(s[0]); }", {}) == RuntimeErrorKind::NullRead);
  CHECK(kind_of("int f() { return parseInt(\"x1\"); }", {}) == RuntimeErrorKind::BadParse);
  CHECK(kind_of("String f() { return readFile(\"missing\"); }", {}) == RuntimeErrorKind::Io);
}

TEST_CASE("errors keep the partial trace") {
  Program p = parse("int f() { int n = strlen(\"ab\"); return parseInt(\"?\") + n; }");
  EvalOutcome o = eval(p, {}, apis(), {});
  REQUIRE(o.status == EvalStatus::Failed);
  REQUIRE(o.trace.size() == 2);
  CHECK(o.trace[0].fname == "strlen");
  CHECK(o.trace[1].fname == "parseInt");
}

TEST_CASE("integer arithmetic wraps at 32 bits") {
  Program p = parse("int f(int x) { return x + 1; }");
  EvalOutcome o = eval(p, {Value::integer(2147483647)}, apis(), {});
  REQUIRE(o.ok());
  CHECK(o.value.i == -2147483648LL);
}

TEST_CASE("arguments are not modified by the callee") {
  Program p = parse("int f(int[] a) { a[0] = 9; return a[0]; }");
  Value arr = make_array({Value::integer(1)});
  EvalOutcome o = eval(p, {arr}, apis(), {});
  REQUIRE(o.ok());
  CHECK(o.value.i == 9);
  CHECK(arr.array().elems[0].i == 1);
}

TEST_CASE("test blocks") {
  CHECK(run_tests(parse(testing::kSieveCompleted), sieve_tests(), apis(), {}));
  CHECK_FALSE(run_tests(parse("boolean sieve(int n) { return false; }"), sieve_tests(), apis(), {}));
  CHECK_FALSE(run_tests(parse("boolean sieve(int n) { return 1 / (n - n) == 0; }"), sieve_tests(), apis(), {}));
  CHECK_FALSE(run_tests(parse("boolean sieve(int n) { while (true) { } return true; }"), sieve_tests(), apis(), {},
                        Limits{10000, std::chrono::duration<double>(1.0)}));
}

TEST_CASE("__solution__ binds __result__ when every parameter is in scope") {
  Program f = parse("int twice(int x) { return 2 * x; }");
  CHECK(run_tests(f, tests_of("int x = 21;\n__solution__\nreturn __result__ == 42;"), apis(), {}));
  CHECK(run_tests(f, tests_of("__solution__\nreturn twice(4) == 8;"), apis(), {}));
  CHECK_FALSE(run_tests(f, tests_of("int x = 1;\n__solution__\nreturn __result__ == 3;"), apis(), {}));
}

TEST_CASE("file built-ins read the virtual file system") {
  VirtualFS fs(std::map<std::string, std::string>{{"m.csv", "1,2"}});
  ApiRegistry r;
  r.register_api({"readFile", {Type::string()}, Type::string()}, [](const std::vector<Value>& a, ApiContext& ctx) {
    auto c = ctx.fs.find(a[0].str());
    if (!c) throw RuntimeError(RuntimeErrorKind::Io, "missing");
    return Value::string(*c);
  });
  CHECK_THROWS_AS(r.register_api({"readFile", {Type::string()}, Type::string()}, {}), DuplicateApi);
  Program p = parse_program("String f() { return readFile(\"m.csv\"); }", r);
  EvalOutcome o = eval(p, {}, r, fs);
  REQUIRE(o.ok());
  CHECK(o.value.str() == "1,2");
  REQUIRE(o.trace.size() == 1);
  CHECK(o.trace[0].fname == "readFile");

  EvalOutcome s = eval(parse("String[] f() { return split(\"1,2\", \",\"); }"), {}, apis(), {});
  REQUIRE(s.ok());
  CHECK(deep_equal(s.value, make_array({Value::string("1"), Value::string("2")})));
  CHECK_THROWS_AS(parse("int f() { return foo(); }"), TypeError);
}

TEST_CASE("mock vision API") {
  VirtualFS fs = testing::load_fs("face");
  Program p = parse(R"(int f() {
  Classifier c = newClassifier("cascade.xml");
  Mat img = imread("photo.png");
  Rects r = detectMultiScale(c, img);
  drawRects(img, r);
  imwrite("out.png", img);
  return 1;
})");
  EvalOutcome o = eval(p, {}, apis(), fs);
  REQUIRE(o.ok());
  REQUIRE(o.trace.size() == 5);
  CHECK(check_automaton(o.trace, face_automaton()));
  CHECK(o.written.count("out.png") == 1);
  CHECK(o.trace[2].receiver == std::optional<std::string>("Classifier"));
  for (size_t i = 1; i < o.trace.size(); ++i) CHECK(o.trace[i].seq > o.trace[i - 1].seq);

  EvalOutcome missing = eval(parse("int f() { Mat m = imread(\"nope.png\"); drawRects(m, detectMultiScale("
                                   "newClassifier(\"cascade.xml\"), m)); return 0; }"),
                             {}, apis(), fs);
  CHECK(missing.status == EvalStatus::Failed);
  CHECK(*missing.error == RuntimeErrorKind::NullRead);
}

TEST_CASE("automaton acceptance") {
  std::vector<ApiEvent> good = {event("newClassifier"), event("imread"), event("detectMultiScale", "Classifier"),
                                event("drawRects", "Mat"), event("imwrite")};
  CHECK(check_automaton(good, face_automaton()));
  CHECK_FALSE(check_automaton({}, face_automaton()));
  auto with_noise = good;
  with_noise.insert(with_noise.begin() + 2, event("strlen"));
  CHECK(check_automaton(with_noise, face_automaton()));
  ApiAutomaton strict = face_automaton();
  strict.wildcard_self_loop = false;
  CHECK_FALSE(check_automaton(with_noise, strict));
}

TEST_CASE("automaton agrees with a brute-force simulator on all orderings") {
  std::vector<ApiEvent> events = {event("newClassifier"), event("imread"), event("detectMultiScale", "Classifier"),
                                  event("drawRects", "Mat"), event("imwrite")};
  std::vector<size_t> order = {0, 1, 2, 3, 4};
  size_t accepted = 0;
  do {
    for (size_t len = 0; len <= order.size(); ++len) {
      std::vector<ApiEvent> trace;
      for (size_t i = 0; i < len; ++i) trace.push_back(events[order[i]]);
      bool got = check_automaton(trace, face_automaton());
      CHECK(got == simulate(trace));
      if (got) ++accepted;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(accepted == 1);
}

TEST_CASE("automaton file errors") {
  CHECK_THROWS_AS(parse_automaton("states: a b\naccept: b\ntrans: a f b\n"), SyntaxError);
  CHECK_THROWS_AS(parse_automaton("states: a\nstart: a\naccept: a\ntrans: a f a\ntrans: a f a\nbogus\n"), SyntaxError);
}

TEST_CASE("evaluation is deterministic") {
  for (uint32_t seed = 0; seed < 100; ++seed) {
    testing::ProgramGen gen(seed);
    Program p = parse(gen.program());
    std::vector<Value> args{Value::integer(seed % 5), Value::integer(2)};
    EvalOutcome a = eval(p, args, apis(), {});
    EvalOutcome b = eval(p, args, apis(), {});
    CHECK(a.status == b.status);
    CHECK(a.steps == b.steps);
    CHECK(deep_equal(a.value, b.value));
  }
}

TEST_CASE("more fuel never changes a successful result") {
  for (uint32_t seed = 0; seed < 100; ++seed) {
    testing::ProgramGen gen(seed);
    Program p = parse(gen.program());
    std::vector<Value> args{Value::integer(3), Value::integer(seed % 4)};
    EvalOutcome full = eval(p, args, apis(), {});
    REQUIRE(full.ok());
    Limits exact{full.steps, std::chrono::duration<double>(10.0)};
    EvalOutcome tight = eval(p, args, apis(), {}, exact);
    REQUIRE(tight.ok());
    CHECK(tight.value.i == full.value.i);
    if (full.steps > 1) {
      Limits short_of{full.steps - 1, std::chrono::duration<double>(10.0)};
      CHECK(eval(p, args, apis(), {}, short_of).status == EvalStatus::Timeout);
    }
    Limits more{full.steps * 2 + 10, std::chrono::duration<double>(10.0)};
    EvalOutcome loose = eval(p, args, apis(), {}, more);
    REQUIRE(loose.ok());
    CHECK(loose.value.i == full.value.i);
  }
}

TEST_CASE("the trace records every API call") {
  Program p = parse("int f(int n) { int t = 0; for (int i = 0; i < n; i++) { t = t + strlen(\"abc\"); } return t; }");
  for (int n : {0, 1, 7, 40}) {
    EvalOutcome o = eval(p, {Value::integer(n)}, apis(), {});
    REQUIRE(o.ok());
    CHECK(o.trace.size() == static_cast<size_t>(n));
    CHECK(o.value.i == 3 * n);
  }
}

TEST_CASE("desugared corpus functions behave the same") {
  std::mt19937 rng(7);
  VirtualFS fs(std::map<std::string, std::string>{{"data.txt", "1,2,3\n4,5,6\n"}});
  for (auto& e : testing::bundled_index().entries) {
    Program sugared = e.program;
    Program plain = desugar(sugared);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Value> args;
      for (auto& prm : sugared.params) args.push_back(random_value(prm.type, rng));
      Limits lim{200000, std::chrono::duration<double>(2.0)};
      EvalOutcome a = eval(sugared, args, apis(), fs, lim);
      EvalOutcome b = eval(plain, args, apis(), fs, lim);
      CHECK_MESSAGE(a.status == b.status, sugared.name);
      if (a.ok() && b.ok()) CHECK_MESSAGE(deep_equal(a.value, b.value), sugared.name);
    }
  }
}
