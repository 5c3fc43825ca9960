#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ltsep/automata.hpp"
#include "ltsep/testkit.hpp"

using namespace ltsep;
using ltsep::test::w;

namespace {

std::size_t count_a(const Word& x) { return x.size(); }

}  // namespace

TEST_CASE("minimal document describes the empty-word language on both sides") {
  LangSpec s = parse_spec("alphabet: a\nstates: 1\nI1: 0\nF1: 0\nI2: 0\nF2: 0\n");
  CHECK(s.nfa.num_states() == 1);
  CHECK(s.nfa.num_transitions() == 0);
  CHECK(accepts(s.nfa, s.i1, s.f1, {}));
  CHECK(accepts(s.nfa, s.i2, s.f2, {}));
  CHECK_FALSE(accepts(s.nfa, s.i1, s.f1, w(s.nfa, "a")));
  CHECK(enumerate_words(s.nfa, s.i1, s.f1, 4).size() == 1);
}

TEST_CASE("parity document: even and odd powers up to length 6") {
  LangSpec s = parse_spec(test::kParity);
  for (const Word& x : enumerate_words(s.nfa, s.i1, s.f1, 6)) CHECK(count_a(x) % 2 == 0);
  for (const Word& x : enumerate_words(s.nfa, s.i2, s.f2, 6)) CHECK(count_a(x) % 2 == 1);
  CHECK(enumerate_words(s.nfa, s.i1, s.f1, 6).size() == 4);
  CHECK(enumerate_words(s.nfa, s.i2, s.f2, 6).size() == 3);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_spec(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("alphabet: a\nstates: 2\ntrans: 0 a 7\nI1: 0\nF1: 0\nI2: 0\nF2: 1\n") == 3);
  CHECK(line_of("alphabet: a\nstates: 2\ntrans: 0 b 1\nI1: 0\nF1: 0\nI2: 0\nF2: 1\n") == 3);
  CHECK(line_of("alphabet: a\nstates: 2\nI1: 0\nF1: 0\nI2: 9\nF2: 1\n") == 5);
  CHECK(line_of("alphabet: a\nstates: 2\nbogus line\n") == 3);
  CHECK(line_of("alphabet: a\nstates: 2\nI1: 0\nF1: 0\nI2: 0\n") == 6);
  CHECK(line_of("alphabet: a a\nstates: 1\nI1: 0\nF1: 0\nI2: 0\nF2: 0\n") == 1);
}

TEST_CASE("full-line comments are skipped and '#' stays usable as a symbol") {
  LangSpec s = parse_spec(
      "# leading comment\n"
      "alphabet: # x1\n"
      "  # indented comment\n"
      "states: 1\n"
      "trans: 0 # 0\n"
      "I1: 0\nF1: 0\nI2: 0\nF2: 0\n");
  REQUIRE(s.nfa.alphabet_size() == 2);
  CHECK(s.nfa.symbol_name(0) == "#");
  CHECK(s.nfa.has_transition(0, 0, 0));
}

TEST_CASE("serialize then parse is the identity on normalized documents") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    LangSpec s = test::tiny_spec(rng, 5, 3);
    std::string text = serialize_spec(s);
    LangSpec t = parse_spec(text);
    CHECK(serialize_spec(t) == text);
    CHECK(t.nfa.transitions() == s.nfa.transitions());
    CHECK(t.i1 == s.i1);
    CHECK(t.f2 == s.f2);
  }
}

TEST_CASE("accepts on the parity spec") {
  LangSpec s = parse_spec(test::kParity);
  CHECK(accepts(s.nfa, s.i1, s.f1, {}));
  CHECK_FALSE(accepts(s.nfa, s.i2, s.f2, w(s.nfa, "aa")));
  CHECK(accepts(s.nfa, s.i2, s.f2, w(s.nfa, "a")));
  CHECK_THROWS(parse_word(s.nfa, "b"));
  CHECK_THROWS(accepts(s.nfa, s.i1, s.f1, Word{3}));
}

TEST_CASE("words: spaced and unspaced forms") {
  Nfa multi(1, {"x1", "~x1", "#"});
  CHECK(parse_word(multi, "x1 # ~x1") == Word{0, 2, 1});
  CHECK(format_word(multi, {0, 2, 1}) == "x1 # ~x1");
  Nfa single(1, {"a", "b"});
  CHECK(parse_word(single, "abba") == Word{0, 1, 1, 0});
  CHECK(parse_word(single, "a b") == Word{0, 1});
  CHECK(format_word(single, {}).empty());
  CHECK(parse_word(single, "ε").empty());
}

TEST_CASE("product of parity with itself") {
  LangSpec s = parse_spec(test::kParity);
  Product p = product(s.nfa, s.nfa);
  CHECK(p.nfa.num_states() == 4);
  StateSet start = {p.index(0, 0)};
  for (const Word& x : enumerate_words(p.nfa, start, start, 6)) CHECK(x.size() % 2 == 0);
  CHECK(enumerate_words(p.nfa, start, start, 6).size() == 4);
}

TEST_CASE("product with a universal automaton is an isomorphic copy") {
  std::mt19937_64 rng(11);
  LangSpec s = test::tiny_spec(rng, 4, 2);
  Nfa u(1, s.nfa.alphabet());
  for (Symbol a = 0; a < u.alphabet_size(); ++a) u.add_transition(0, a, 0);
  Product p = product(s.nfa, u);
  CHECK(p.nfa.num_states() == s.nfa.num_states());
  CHECK(p.nfa.num_transitions() == s.nfa.num_transitions());
  for (const auto& t : s.nfa.transitions())
    CHECK(p.nfa.has_transition(p.index(t.from, 0), t.symbol, p.index(t.to, 0)));
}

TEST_CASE("product drops letters without matching transitions") {
  Nfa a(2, {"a", "b"}), b(2, {"a", "b"});
  a.add_transition(0, 0, 1);
  a.add_transition(0, 1, 1);
  b.add_transition(0, 0, 1);
  Product p = product(a, b);
  for (const auto& t : p.nfa.transitions()) CHECK(t.symbol == 0);
  CHECK_THROWS_AS(product(a, Nfa(1, {"a"})), std::invalid_argument);
}

TEST_CASE("product accepts the intersection on sampled words") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    LangSpec x = gen_random(rng(), 3, 2, 0.4), y = gen_random(rng(), 3, 2, 0.4);
    if (x.nfa.num_states() == 0 || y.nfa.num_states() == 0) continue;
    Product p = product(x.nfa, y.nfa);
    StateSet ip = p.pairs(x.i1, y.i1), fp = p.pairs(x.f1, y.f1);
    for (int j = 0; j < 20; ++j) {
      Word v = random_word(rng, 2, 6);
      CHECK(accepts(p.nfa, ip, fp, v) ==
            (accepts(x.nfa, x.i1, x.f1, v) && accepts(y.nfa, y.i1, y.f1, v)));
    }
  }
}

TEST_CASE("emptiness and reachability") {
  LangSpec s = parse_spec(test::kParity);
  CHECK_FALSE(is_empty(s.nfa, s.i1, s.f1));
  CHECK(reachable(s.nfa, {0}) == StateSet{0, 1});
  Nfa n(3, {"a"});
  n.add_transition(0, 0, 1);
  CHECK(is_empty(n, {0}, {2}));
  CHECK(coreachable(n, {1}) == StateSet{0, 1});
  CHECK(shortest_word(s.nfa, s.i2, s.f2) == Word{0});
  CHECK_FALSE(shortest_common_word(s).has_value());
}

TEST_CASE("emptiness agrees with bounded enumeration") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    LangSpec s = gen_random(rng(), 1 + uniform_below(rng, 4), 2, 0.25);
    if (s.nfa.num_states() == 0) continue;
    bool some = !enumerate_words(s.nfa, s.i1, s.f1, s.nfa.num_states()).empty();
    CHECK(is_empty(s.nfa, s.i1, s.f1) == !some);
  }
}

TEST_CASE("trim keeps exactly the useful states") {
  Nfa n(4, {"a"});
  n.add_transition(0, 0, 1);
  n.add_transition(1, 0, 2);
  n.add_transition(3, 0, 1);
  std::vector<std::optional<State>> map;
  Nfa t = trim(n, {{{0}, {1}}}, &map);
  CHECK(t.num_states() == 2);
  CHECK(map[0].has_value());
  CHECK(map[1].has_value());
  CHECK_FALSE(map[2].has_value());
  CHECK_FALSE(map[3].has_value());
}

TEST_CASE("DOT export marks both language pairs") {
  std::string dot = dot_export(parse_spec(test::kParity));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("I1") != std::string::npos);
  CHECK(dot.find("F2") != std::string::npos);
}

TEST_CASE("Nfa rejects malformed alphabets and references") {
  CHECK_THROWS(Nfa(1, {""}));
  CHECK_THROWS(Nfa(1, {"a", "a"}));
  Nfa n(1, {"a"});
  CHECK_THROWS(n.add_transition(0, 0, 5));
  CHECK_THROWS(n.add_transition(0, 2, 0));
  LangSpec s{n, {3}, {0}, {0}, {0}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
