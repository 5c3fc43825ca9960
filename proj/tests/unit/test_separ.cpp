#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ltsep/separ.hpp"

using namespace ltsep;

namespace {

std::vector<Word> sample_side(const LangSpec& s, bool first, std::mt19937_64& rng, int n) {
  std::vector<Word> out;
  const StateSet& i = first ? s.i1 : s.i2;
  const StateSet& f = first ? s.f1 : s.f2;
  for (int j = 0; j < n; ++j)
    if (auto x = sample_word(s.nfa, i, f, rng, 10)) out.push_back(*x);
  return out;
}

}  // namespace

TEST_CASE("fixed separation on the threshold family") {
  LangSpec s = gen_threshold_family(1);
  Verdict ins = decide_fixed(s, 1, 2);
  CHECK(ins.outcome == Outcome::Inseparable);
  REQUIRE(ins.witness.has_value());
  CHECK(check_witness(s, *ins.witness));
  Verdict sep = decide_fixed(s, 1, 3);
  CHECK(sep.outcome == Outcome::Separable);
  CHECK(sep.separator.has_value());
  CHECK_THROWS_AS(decide_fixed(s, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(decide_fixed(s, 1, 0), std::invalid_argument);
}

TEST_CASE("single letters are separated at width 1") {
  LangSpec s = test::singletons({"a", "b"}, "a", "b");
  CHECK(decide_fixed(s, 1, 1).outcome == Outcome::Separable);
  CHECK(decide_lt(s).outcome == Outcome::Separable);
  CHECK(decide_ltt(s).outcome == Outcome::Separable);
}

TEST_CASE("a and aa need width 2") {
  LangSpec s = test::singletons({"a"}, "a", "aa");
  CHECK(decide_fixed(s, 1, 1).outcome == Outcome::Inseparable);
  CHECK(decide_fixed(s, 1, 2).outcome == Outcome::Separable);
  CHECK(decide_fixed(s, 2, 1).outcome == Outcome::Separable);
  Verdict lt = decide_lt(s);
  CHECK(lt.outcome == Outcome::Separable);
  REQUIRE(lt.separator.has_value());
  CHECK(lt.separator->d == 1);
}

TEST_CASE("parity is neither LT- nor LTT-separable") {
  LangSpec s = gen_parity();
  Verdict lt = decide_lt(s);
  CHECK(lt.outcome == Outcome::Inseparable);
  REQUIRE(lt.witness.has_value());
  CHECK(check_witness(s, *lt.witness));
  REQUIRE(lt.pattern.has_value());
  Verdict ltt = decide_ltt(s);
  CHECK(ltt.outcome == Outcome::Inseparable);
  CHECK(ltt.d_limit);
  REQUIRE(ltt.evidence.has_value());
  for (std::uint64_t d : {1, 2, 5}) {
    WitnessPair w = replay_certificate(s, *ltt.evidence, d, 1);
    CHECK(check_witness(s, w));
  }
}

TEST_CASE("common words and empty sides take the fast paths") {
  LangSpec same = test::singletons({"a", "b"}, "ab", "ab");
  Verdict v = decide_ltt(same);
  CHECK(v.outcome == Outcome::Inseparable);
  CHECK(v.route == "intersection");
  LangSpec empty = parse_spec(test::kParity);
  empty.nfa.add_state();
  empty.f2 = {2};
  Verdict e = decide_lt(empty);
  CHECK(e.outcome == Outcome::Separable);
  CHECK(e.route == "empty");
}

TEST_CASE("threshold family is LT-separable") {
  for (int m : {1, 2}) {
    LangSpec s = gen_threshold_family(m);
    CHECK(decide_lt(s).outcome == Outcome::Separable);
    CHECK(decide_ltt(s).outcome == Outcome::Separable);
  }
}

TEST_CASE("separator membership examples") {
  LangSpec s = gen_parity();
  SeparatorHandle h = make_separator(s, 1, 2);
  CHECK(separator_membership(h, {}) == Membership::Accepted);
  CHECK(separator_membership(h, {0}) == Membership::Rejected);
  CHECK(separator_membership(h, {0, 0}) == Membership::Accepted);
  CHECK(separator_membership(h, {0, 0, 0}) == Membership::Accepted);
  CHECK_THROWS_AS(separator_membership(h, {5}), std::out_of_range);
}

TEST_CASE("explicit separator automata") {
  LangSpec one = test::singletons({"a"}, "a", "aa");
  ExplicitSeparator plus = separator_automaton(make_separator(one, 1, 1));
  CHECK_FALSE(accepts(plus.nfa, plus.initial, plus.final, {}));
  for (std::size_t n = 1; n <= 5; ++n)
    CHECK(accepts(plus.nfa, plus.initial, plus.final, Word(n, 0)));

  LangSpec none = parse_spec(test::kParity);
  none.nfa.add_state();
  none.f1 = {2};
  ExplicitSeparator empty = separator_automaton(make_separator(none, 1, 1));
  CHECK(is_empty(empty.nfa, empty.initial, empty.final));

  ExplicitSeparator par = separator_automaton(make_separator(gen_parity(), 1, 2));
  CHECK(accepts(par.nfa, par.initial, par.final, {}));
  CHECK_FALSE(accepts(par.nfa, par.initial, par.final, {0}));
  for (std::size_t n = 2; n <= 7; ++n) CHECK(accepts(par.nfa, par.initial, par.final, Word(n, 0)));
}

TEST_CASE("separators contain L1 and are disjoint from L2") {
  std::mt19937_64 rng(307);
  int separable = 0;
  for (int i = 0; i < 100; ++i) {
    LangSpec s = test::tiny_spec(rng, 3, 2);
    if (s.nfa.num_states() == 0) continue;
    std::size_t k = 1 + uniform_below(rng, 2);
    std::uint64_t d = 1 + uniform_below(rng, 2);
    Verdict v = decide_fixed(s, k, d);
    REQUIRE(v.outcome != Outcome::Unknown);
    if (v.outcome == Outcome::Inseparable) {
      CHECK(check_witness(s, *v.witness));
      continue;
    }
    ++separable;
    REQUIRE(v.separator.has_value());
    for (const Word& x : sample_side(s, true, rng, 10))
      CHECK(separator_membership(*v.separator, x) == Membership::Accepted);
    for (const Word& x : sample_side(s, false, rng, 10))
      CHECK(separator_membership(*v.separator, x) == Membership::Rejected);
  }
  CHECK(separable > 0);
}

TEST_CASE("separability is monotone in k and d") {
  std::mt19937_64 rng(311);
  for (int i = 0; i < 100; ++i) {
    LangSpec s = test::tiny_spec(rng, 3, 2);
    if (s.nfa.num_states() == 0) continue;
    DecideConfig cfg;
    cfg.want_separator = false;
    bool s11 = decide_fixed(s, 1, 1, cfg).outcome == Outcome::Separable;
    bool s12 = decide_fixed(s, 1, 2, cfg).outcome == Outcome::Separable;
    bool s21 = decide_fixed(s, 2, 1, cfg).outcome == Outcome::Separable;
    bool s22 = decide_fixed(s, 2, 2, cfg).outcome == Outcome::Separable;
    CHECK(s11 <= s12);
    CHECK(s11 <= s21);
    CHECK(s12 <= s22);
    CHECK(s21 <= s22);
  }
}

TEST_CASE("explicit automaton agrees with the handle") {
  std::mt19937_64 rng(313);
  int compared = 0;
  for (int i = 0; i < 40; ++i) {
    LangSpec s = test::tiny_spec(rng, 3, 2);
    if (s.nfa.num_states() == 0) continue;
    SeparatorHandle h = make_separator(s, 1 + uniform_below(rng, 2), 1 + uniform_below(rng, 2));
    ExplicitSeparator e = separator_automaton(h);
    for (int j = 0; j < 20; ++j, ++compared) {
      Word x = random_word(rng, s.nfa.alphabet_size(), 7);
      CHECK((separator_membership(h, x) == Membership::Accepted) ==
            accepts(e.nfa, e.initial, e.final, x));
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("verdicts name their problem and outcome") {
  CHECK(std::string(to_string(Problem::LTT)) == "LTT");
  CHECK(std::string(to_string(Outcome::Inseparable)) == "inseparable");
}
